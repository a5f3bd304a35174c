use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use weakcr_cli::commands::polynomial_suite;
use weakcr_core::fock_rep::{boson_pair, coherent_state, defect_table, swanson_pair, weyl_convergence, StateVector};
use weakcr_core::ladder::{biorthogonality_gram, eigen_check, intertwiners, ladders, restricted_spectrum};
use weakcr_core::ncpoly::{normal_order, normal_order_with, safe_block_discrepancy, Gen, NCPoly, Strategy, Word};
use weakcr_core::uncertainty::{
    deltas, saturation_scan, swanson_closed_form, ur1_check, ur2_check, Centers, GridPart, ScanModel,
};
use weakcr_core::weighted_l2::{gaussian_eigen_check, ladder_length, weak_cr_check, Weight};
use weakcr_core::GaussRational;

/// Sub-checks of one criterion, each with a short description.
#[derive(Default)]
struct Outcome {
    checks: Vec<(bool, String)>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.checks.push((ok, what.into()));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(ok, _)| *ok)
    }
}

fn g(x: Gen) -> NCPoly {
    NCPoly::gen(x)
}

fn c(n: i64) -> NCPoly {
    NCPoly::scalar(GaussRational::from_int(n))
}

fn pw(x: Gen, k: u32) -> NCPoly {
    g(x).pow(k)
}

fn random_poly(rng: &mut ChaCha8Rng, max_len: usize) -> NCPoly {
    let terms = rng.gen_range(1..=5);
    NCPoly::from_terms((0..terms).map(|_| {
        let len = rng.gen_range(0..=max_len);
        let w = Word::new((0..len).map(|_| Gen::ALL[rng.gen_range(0..4)]).collect());
        (
            w,
            GaussRational::from_ints(rng.gen_range(-3..=3), rng.gen_range(-3..=3)),
        )
    }))
}

fn disk_states(n: usize) -> Vec<(Complex64, StateVector)> {
    let xs: Vec<f64> = (0..5)
        .map(|i| -FRAC_1_SQRT_2 + FRAC_1_SQRT_2 * i as f64 / 2.0)
        .collect();
    xs.iter()
        .flat_map(|&x| xs.iter().map(move |&y| Complex64::new(x, y)))
        .map(|z| (z, coherent_state(z, n).expect("coherent state")))
        .collect()
}

fn criterion_1() -> Outcome {
    use Gen::*;
    let mut o = Outcome::default();
    let start = Instant::now();
    o.check(normal_order(&(g(S) * g(T))) == g(T) * g(S) + c(1), "S T -> T S + 1");
    o.check(
        normal_order(&(pw(S, 2) * g(T))) == g(T) * pw(S, 2) + c(2) * g(S),
        "S^2 T -> T S^2 + 2 S",
    );
    o.check(
        normal_order(&(pw(S, 2) * pw(T, 2))) == pw(T, 2) * pw(S, 2) + c(4) * g(T) * g(S) + c(2),
        "S^2 T^2 -> T^2 S^2 + 4 T S + 2",
    );
    o.check(
        normal_order(&(pw(Sd, 2) * g(Td))) == g(Td) * pw(Sd, 2) - c(2) * g(Sd),
        "S'^2 T' -> T' S'^2 - 2 S'",
    );
    let pattern = (1..=10u32).all(|k| normal_order(&(pw(S, k) * g(T))) == g(T) * pw(S, k) + c(k as i64) * pw(S, k - 1));
    o.check(pattern, "S^k T -> T S^k + k S^(k-1) for k = 1..10");
    let t = start.elapsed();
    o.check(t < Duration::from_secs(1), format!("runtime {t:.2?} < 1s"));
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::default();
    let start = Instant::now();
    let pair = boson_pair(64).expect("boson pair");
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let p = random_poly(&mut rng, 4);
        let d = safe_block_discrepancy(&p, &normal_order(&p), &pair).expect("evaluation");
        worst = worst.max(d);
    }
    o.check(
        worst < 1e-10,
        format!("max safe-block discrepancy {worst:.2e} < 1e-10 over 200 polynomials"),
    );
    let t = start.elapsed();
    o.check(t < Duration::from_secs(30), format!("runtime {t:.2?} < 30s"));
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::default();
    let pair = boson_pair(256).expect("boson pair");
    let t = defect_table(&pair, 0.1, 0.1).expect("defects");
    o.check(t.weak < 1e-12, format!("weak defect {:.2e} < 1e-12", t.weak));
    o.check(
        t.quasi_strong < 1e-8,
        format!("quasi-strong defect {:.2e} < 1e-8", t.quasi_strong),
    );
    o.check(t.weyl < 1e-6, format!("Weyl defect {:.2e} < 1e-6", t.weyl));
    let series = weyl_convergence(0.1, 0.1, &[32, 64, 128, 256]).expect("series");
    let decreasing = series.windows(2).all(|w| w[1].1 < w[0].1);
    let shown: Vec<String> = series.iter().map(|(n, d)| format!("{n}:{d:.1e}")).collect();
    o.check(decreasing, format!("Weyl defect decreasing [{}]", shown.join(", ")));
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::default();
    let pair = swanson_pair(0.3, 96).expect("swanson pair");
    let (xi, eta) = ladders(&pair, 6).expect("ladders");
    o.check(
        xi.len() == 7 && eta.len() == 7,
        format!("ladder lengths {} and {}", xi.len(), eta.len()),
    );
    let eig = eigen_check(&pair, &xi).expect("eigen check");
    let worst = eig.residuals.iter().copied().fold(0.0, f64::max);
    o.check(worst < 1e-8, format!("max eigen residual {worst:.2e} < 1e-8"));
    let spectrum = restricted_spectrum(&pair, &xi, 1e-6).expect("spectrum");
    o.check(
        spectrum.matches && spectrum.max_deviation < 1e-6 && spectrum.eigenvalues.len() == 7,
        format!("restricted spectrum = 0..6 within {:.2e}", spectrum.max_deviation),
    );
    o.check(
        spectrum.min_gap > 1e-6,
        format!("eigenvalues simple, min gap {:.3}", spectrum.min_gap),
    );
    let gram = biorthogonality_gram(&xi, &eta).expect("gram");
    o.check(gram.defect < 1e-7, format!("Gram defect {:.2e} < 1e-7", gram.defect));
    let k = intertwiners(&pair, &xi, &eta).expect("intertwiners");
    o.check(
        k.inverse_defect < 1e-6,
        format!("K_eta K_xi = 1 defect {:.2e} < 1e-6", k.inverse_defect),
    );
    o.check(
        k.intertwining_defect_eta < 1e-6 && k.intertwining_defect_xi < 1e-6,
        format!(
            "intertwining defects {:.2e}, {:.2e} < 1e-6",
            k.intertwining_defect_eta, k.intertwining_defect_xi
        ),
    );
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::default();
    let l = ladder_length(2.0).expect("ladder length");
    o.check(
        l.n_max == 2 && l.dim_n0 == 3,
        format!("alpha = 2: n_max = {}, dim N0 = {}", l.n_max, l.dim_n0),
    );
    let l = ladder_length(1.75).expect("ladder length");
    o.check(
        l.n_max == 1 && l.discrepancy && l.closed_form_dim == 3,
        format!(
            "alpha = 7/4: n_max = {}, closed form {}, flagged {}",
            l.n_max, l.closed_form_dim, l.discrepancy
        ),
    );
    let suite = polynomial_suite(0);
    let mut worst = 0.0f64;
    let mut pairs = 0usize;
    for w in [1.75, 2.0, 2.5, 3.0, 4.0]
        .into_iter()
        .map(|a| Weight::rational(a).expect("weight"))
        .chain([Weight::gaussian()])
    {
        for f in &suite {
            for h in &suite {
                if let Ok(d) = weak_cr_check(&w, f, h) {
                    worst = worst.max(d);
                    pairs += 1;
                }
            }
        }
    }
    o.check(
        worst < 1e-8,
        format!("weak CR defect {worst:.2e} < 1e-8 over {pairs} admissible pairs"),
    );
    let exact = (0..=10).all(|k| {
        let r = gaussian_eigen_check(k);
        r.exact && r.quadrature_residual < 1e-10
    });
    o.check(exact, "Gaussian ladder exact for k = 0..10");
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::default();
    let states = disk_states(64);

    let pair = swanson_pair(FRAC_PI_4, 64).expect("rotated pair");
    let mut worst = 0.0f64;
    let mut saturated = true;
    for (_, phi) in &states {
        let r = ur1_check(&pair, phi, Centers::default(), None).expect("UR1");
        let d = r.deltas;
        for v in [d.d_s, d.d_sd, d.d_t, d.d_td] {
            worst = worst.max((v - FRAC_1_SQRT_2).abs());
        }
        saturated &= r.saturated;
    }
    o.check(
        worst < 1e-6 && saturated,
        format!("rotated boson: deltas within {worst:.1e} of 1/sqrt 2, UR1 saturated {saturated}"),
    );

    let pair = boson_pair(64).expect("boson pair");
    let (mut worst, mut gap_err) = (0.0f64, 0.0f64);
    let mut saturated = true;
    for (_, phi) in &states {
        let d = deltas(&pair, phi, Centers::default()).expect("deltas");
        for (v, e) in [d.d_s, d.d_sd, d.d_t, d.d_td].iter().zip([0.0, 1.0, 1.0, 0.0]) {
            worst = worst.max((v - e).abs());
        }
        let r1 = ur1_check(&pair, phi, Centers::default(), None).expect("UR1");
        gap_err = gap_err.max((r1.gap - 1.0).abs());
        saturated &= ur2_check(&pair, phi, 1.0, 1.0, None).expect("UR2").saturated;
    }
    o.check(
        worst < 1e-6 && gap_err < 1e-6 && saturated,
        format!("(a, a+): deltas within {worst:.1e} of (0,1,1,0), UR2 saturated {saturated}, UR1 gap within {gap_err:.1e} of 1"),
    );

    let mut worst = 0.0f64;
    for theta in [0.0, 0.2, 0.5, FRAC_PI_4, 1.1, 2.0, -0.7] {
        for (_, phi) in &states {
            worst = worst.max(swanson_closed_form(theta, phi).expect("closed form").max_discrepancy);
        }
    }
    o.check(worst < 1e-6, format!("Swanson closed forms within {worst:.1e}"));

    let grid = [GridPart::Coherent { n_re: 5, n_im: 5 }, GridPart::Fock { k: 5 }];
    let t = saturation_scan(ScanModel::Swanson { theta: 0.0, dim: 64 }, &grid).expect("scan");
    o.check(
        t.summary.ur1_saturated == 0 && t.summary.min_ur1_gap > 0.4,
        format!(
            "swanson(0): UR1 saturated on {} rows, min gap {:.3}",
            t.summary.ur1_saturated, t.summary.min_ur1_gap
        ),
    );

    let t = saturation_scan(ScanModel::Matrix2x2 { s: 1.0, q: 1.0 }, &[GridPart::Circle { n: 11 }]).expect("scan");
    let ur1_at_ends = t
        .rows
        .iter()
        .all(|r| r.ur1_saturated == (r.params[0] == 0.0 || r.params[0] == 1.0));
    let ur2_never = t.rows.iter().all(|r| !r.ur2_saturated);
    let ur1_at: Vec<f64> = t.rows.iter().filter(|r| r.ur1_saturated).map(|r| r.params[0]).collect();
    let ur2_at: Vec<f64> = t.rows.iter().filter(|r| r.ur2_saturated).map(|r| r.params[0]).collect();
    o.check(
        ur1_at_ends && ur2_never,
        format!(
            "2x2: UR1 saturated exactly at |phi1| in {{0,1}} and UR2 never; observed UR1 at t = {ur1_at:?}, UR2 at t = {ur2_at:?}, min UR1 gap {:.3}",
            t.summary.min_ur1_gap
        ),
    );
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut involution, mut antihom, mut idempotent, mut linear) = (true, true, true, true);
    for _ in 0..300 {
        let p = random_poly(&mut rng, 5);
        let q = random_poly(&mut rng, 5);
        let a = GaussRational::from_ints(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        involution &= p.adjoint().adjoint() == p;
        antihom &= (&p * &q).adjoint() == &q.adjoint() * &p.adjoint();
        let np = normal_order(&p);
        idempotent &= normal_order(&np) == np;
        linear &= normal_order(&(&p.scale(&a) + &q)) == &np.scale(&a) + &normal_order(&q);
    }
    o.check(involution, "adjoint is an involution");
    o.check(antihom, "adjoint reverses products");
    o.check(idempotent, "normal_order is idempotent");
    o.check(linear, "normal_order is linear");

    let mut confluent = true;
    let mut words = vec![Word::empty()];
    let mut checked = 0usize;
    for _ in 0..8 {
        let next: Vec<Word> = words
            .iter()
            .flat_map(|w| Gen::ALL.iter().map(move |&x| w.concat(&Word::gen(x))))
            .collect();
        for w in &next {
            let p = NCPoly::word(w.clone());
            confluent &= normal_order_with(&p, Strategy::Leftmost) == normal_order_with(&p, Strategy::Rightmost);
        }
        checked += next.len();
        words = next;
    }
    o.check(
        confluent,
        format!("leftmost and rightmost reduction agree on all {checked} words of length 1..8"),
    );
    o
}

fn cli(args: &[&str]) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_weakcr"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code())
}

fn cli_json(args: &[&str]) -> (Value, Vec<u8>, Option<i32>) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (bytes, code) = cli(&full);
    (serde_json::from_slice(&bytes).unwrap_or(Value::Null), bytes, code)
}

fn criterion_8(started: Instant) -> Outcome {
    let mut o = Outcome::default();
    let (text, code) = cli(&["normal-order", "S T"]);
    let first = String::from_utf8_lossy(&text)
        .lines()
        .next()
        .unwrap_or_default()
        .to_string();
    o.check(
        first == "T S + 1" && code == Some(0),
        format!("normal-order \"S T\" prints {first:?}"),
    );

    let (r, _, code) = cli_json(&["weights", "--alpha", "2"]);
    let l = &r["result"]["ladder_length"];
    o.check(
        l["n_max"] == 2 && l["dim_N0"] == 3 && code == Some(0),
        format!(
            "weights --alpha 2 reports n_max = {}, dim_N0 = {}",
            l["n_max"], l["dim_N0"]
        ),
    );

    let args = ["uncertainty", "--model", "swanson:0", "--scan", "coherent:5x5"];
    let (r, _, code) = cli_json(&args);
    let gap = r["result"]["scan"]["summary"]["min_ur1_gap"]
        .as_f64()
        .unwrap_or(f64::NAN);
    o.check(
        gap > 0.0 && code == Some(0),
        format!("uncertainty scan min UR1 gap {gap:.3} > 0"),
    );

    let runs: [&[&str]; 3] = [&["normal-order", "S^2 T^2"], &["weights", "--alpha", "2"], &args];
    let deterministic = runs.iter().all(|a| {
        let (_, x, _) = cli_json(a);
        let (_, y, _) = cli_json(a);
        !x.is_empty() && x == y
    });
    o.check(deterministic, "repeated runs give byte-identical JSON reports");

    let t = started.elapsed();
    o.check(
        t < Duration::from_secs(300),
        format!("all acceptance criteria ran in {t:.2?} < 5 min"),
    );
    o
}

fn main() -> ExitCode {
    let started = Instant::now();
    let results = [
        (1, "rewrite identities", criterion_1()),
        (2, "rewrite soundness", criterion_2()),
        (3, "commutation relation chain", criterion_3()),
        (4, "Swanson ladder", criterion_4()),
        (5, "weighted example", criterion_5()),
        (6, "uncertainty examples", criterion_6()),
        (7, "algebraic properties", criterion_7()),
        (8, "command line", criterion_8(started)),
    ];
    let mut all = true;
    for (n, name, o) in &results {
        let passed = o.passed();
        all &= passed;
        println!("{} criterion {n}: {name}", if passed { "PASS" } else { "FAIL" });
        for (ok, what) in &o.checks {
            println!("    [{}] {what}", if *ok { "ok" } else { "FAILED" });
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
