//! Subcommand definitions and the report each one produces.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use weakcr_core::fock_rep::{self, defect_table, weyl_convergence, OperatorPair};
use weakcr_core::ladder::{biorthogonality_gram, eigen_check, intertwiners, ladders, restricted_spectrum};
use weakcr_core::ncpoly::{is_regular, normal_order, safe_block_discrepancy, Bound, PowerProfile};
use weakcr_core::uncertainty::{cross_condition_defect, saturation_scan_with_tol, GridPart, ScanModel, ScanTable};
use weakcr_core::weighted_l2::{
    gaussian_eigen_check, ladder_length, moment, monomial_membership, weak_cr_check, MomentValue, PolyFunc, Weight,
};
use weakcr_core::{ncpoly, GaussRational};

use crate::expr::{parse_operator_expr, ParseError};
use crate::report::{float, to_value, Report, Table};

const AFTER_HELP: &str = "\
Operator expressions use S and T for the generators and an apostrophe for the
adjoint (S' is S-dagger). Juxtaposition and * are products, ^ takes a
nonnegative integer power, and literals are exact: 2, 1/2, 0.25, 3i, (1-2i).

Exit status is 0 when every check passes, 1 when some check fails (the report
lists them under \"failures\"), and 2 on invalid input.";

#[derive(Debug, Parser)]
#[command(name = "weakcr", version, about = "Checks for weak commutation relations [S, T] = 1", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Also write the report to this file (.json, or .csv for scan tables).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides the pass thresholds of the command; for `uncertainty` it is
    /// the saturation tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized test suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Format of the report written to standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weak, quasi-strong and Weyl-form defects of a truncated pair.
    VerifyCr {
        /// `boson` or `swanson:THETA`.
        #[arg(long, default_value = "boson")]
        model: String,
        #[arg(long, default_value_t = fock_rep::DEFAULT_DIM)]
        dim: usize,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        beta: f64,
        /// Truncation sizes for a Weyl-defect convergence series (boson only).
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
    },
    /// Eigenvector ladders, biorthogonality and intertwiners.
    Ladder {
        /// `boson` or `swanson:THETA`.
        #[arg(long, default_value = "swanson:0.3")]
        model: String,
        #[arg(long, default_value_t = 96)]
        dim: usize,
        /// Highest eigenvalue of the ladder.
        #[arg(long, default_value_t = 6)]
        len: usize,
    },
    /// Weak commutation relation on polynomials in a weighted L2 space.
    Weights {
        /// Exponent of the weight (1 + x^4)^(-alpha).
        #[arg(long, required_unless_present = "gaussian", conflicts_with = "gaussian")]
        alpha: Option<f64>,
        /// Use the weight exp(-x^2 / 2).
        #[arg(long)]
        gaussian: bool,
        /// Number of moments to report.
        #[arg(long, default_value_t = 9)]
        moments: usize,
    },
    /// Canonical form of an operator expression.
    NormalOrder {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Admissible powers `m0,m1,...` of S next to T^r, or `inf`.
        #[arg(long)]
        profile: Option<String>,
        /// Truncation used for the matrix soundness check.
        #[arg(long, default_value_t = 64)]
        dim: usize,
    },
    /// Uncertainties and both uncertainty relations over a grid of states.
    Uncertainty {
        /// `swanson:THETA`, `boson`, `boson-rotation` or `matrix2x2:S,Q`.
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 64)]
        dim: usize,
        /// Comma-separated parts: `coherent:NxM`, `fock:K`, `circle:N`.
        #[arg(long)]
        scan: Option<String>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Core(#[from] weakcr_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn to_json(&self) -> serde_json::Value {
        let mut e = json!({ "kind": self.kind(), "message": self.to_string() });
        if let CliError::Parse(p) = self {
            e["line"] = json!(p.line);
            e["column"] = json!(p.column);
        }
        json!({ "schema": crate::report::SCHEMA, "tool": crate::report::TOOL, "error": e })
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "syntax",
            CliError::Core(_) => "domain",
            CliError::Usage(_) => "usage",
        }
    }
}

/// Plain notation for moderate magnitudes, scientific otherwise.
fn num(x: f64) -> String {
    if x == 0.0 || (1e-4..1e6).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Model {
    Boson,
    Swanson(f64),
    BosonRotation,
    Matrix2x2(f64, f64),
}

fn parse_number(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let pi_form = |t: &str| -> Option<f64> {
        let (num, den) = t.split_once('/').unwrap_or((t, "1"));
        let den: f64 = den.trim().parse().ok()?;
        let num = num.trim();
        let coef = match num.strip_suffix("pi") {
            Some("") => 1.0,
            Some(c) => c.trim_end_matches('*').trim().parse().ok()?,
            None => return None,
        };
        Some(coef * PI / den)
    };
    s.parse::<f64>()
        .ok()
        .or_else(|| pi_form(s))
        .filter(|x| x.is_finite())
        .ok_or_else(|| usage(format!("invalid number {s:?}")))
}

/// `boson`, `boson-rotation`, `swanson:THETA` (THETA may be `pi/4`) or
/// `matrix2x2:S,Q`.
pub fn parse_model(s: &str) -> Result<Model, CliError> {
    let (name, arg) = s.split_once(':').unwrap_or((s, ""));
    match (name, arg) {
        ("boson", "") => Ok(Model::Boson),
        ("boson-rotation", "") => Ok(Model::BosonRotation),
        ("swanson", a) if !a.is_empty() => Ok(Model::Swanson(parse_number(a)?)),
        ("matrix2x2", a) => {
            let (s, q) = a
                .split_once(',')
                .ok_or_else(|| usage("matrix2x2 needs two parameters, e.g. matrix2x2:1,1"))?;
            Ok(Model::Matrix2x2(parse_number(s)?, parse_number(q)?))
        }
        _ => Err(usage(format!("unknown model {s:?}"))),
    }
}

/// `coherent:NxM`, `fock:K` and `circle:N`, separated by commas.
pub fn parse_grid(s: &str) -> Result<Vec<GridPart>, CliError> {
    let count = |t: &str| -> Result<usize, CliError> {
        t.trim().parse().map_err(|_| usage(format!("invalid grid size {t:?}")))
    };
    s.split(',')
        .map(|part| {
            let (kind, arg) = part
                .trim()
                .split_once(':')
                .ok_or_else(|| usage(format!("invalid grid part {part:?}")))?;
            match kind {
                "coherent" => {
                    let (a, b) = arg.split_once('x').unwrap_or((arg, arg));
                    Ok(GridPart::Coherent {
                        n_re: count(a)?,
                        n_im: count(b)?,
                    })
                }
                "fock" => Ok(GridPart::Fock { k: count(arg)? }),
                "circle" => Ok(GridPart::Circle { n: count(arg)? }),
                _ => Err(usage(format!("unknown grid kind {kind:?}"))),
            }
        })
        .collect()
}

fn fock_pair(model: Model, dim: usize) -> Result<OperatorPair, CliError> {
    match model {
        Model::Boson => Ok(fock_rep::boson_pair(dim)?),
        Model::Swanson(theta) => Ok(fock_rep::swanson_pair(theta, dim)?),
        Model::BosonRotation => Ok(fock_rep::swanson_pair(PI / 4.0, dim)?),
        Model::Matrix2x2(..) => Err(usage("matrix2x2 is only available for `uncertainty`")),
    }
}

fn model_json(model: Model) -> serde_json::Value {
    match model {
        Model::Boson => json!({ "kind": "boson" }),
        Model::Swanson(theta) => json!({ "kind": "swanson", "theta": theta }),
        Model::BosonRotation => json!({ "kind": "boson_rotation", "theta": PI / 4.0 }),
        Model::Matrix2x2(s, q) => json!({ "kind": "matrix2x2", "s": s, "q": q }),
    }
}

/// Runs a parsed command line. `args` is echoed into the report.
pub fn execute(cli: &Cli, args: Vec<String>) -> Result<Report, CliError> {
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(usage("--tol must be positive"));
        }
    }
    let mut report = match &cli.command {
        Command::VerifyCr {
            model,
            dim,
            alpha,
            beta,
            dims,
        } => verify_cr(parse_model(model)?, *dim, *alpha, *beta, dims, cli.tol)?,
        Command::Ladder { model, dim, len } => ladder(parse_model(model)?, *dim, *len, cli.tol)?,
        Command::Weights {
            alpha,
            gaussian,
            moments,
        } => {
            let w = match (alpha, gaussian) {
                (Some(a), false) => Weight::rational(*a)?,
                (None, true) => Weight::gaussian(),
                _ => return Err(usage("pass exactly one of --alpha and --gaussian")),
            };
            weights(w, *moments, cli.seed, cli.tol)?
        }
        Command::NormalOrder { expr, profile, dim } => normal_order_cmd(expr, profile.as_deref(), *dim, cli.tol)?,
        Command::Uncertainty { model, dim, scan } => uncertainty(parse_model(model)?, *dim, scan.as_deref(), cli.tol)?,
    };
    report.args = args;
    if let Some(path) = &cli.out {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        if ext != "json" && ext != "csv" {
            return Err(usage("--out must end in .json or .csv"));
        }
        if ext == "csv" && report.table.is_none() {
            return Err(usage("CSV output is only available for scan tables"));
        }
    }
    Ok(report)
}

/// Defect table of a truncated pair, with optional Weyl convergence series.
pub fn verify_cr(
    model: Model,
    dim: usize,
    alpha: f64,
    beta: f64,
    dims: &[usize],
    tol: Option<f64>,
) -> Result<Report, CliError> {
    let pair = fock_pair(model, dim)?;
    let mut r = Report::new(
        "verify-cr",
        json!({ "model": model_json(model), "dim": dim, "alpha": alpha, "beta": beta, "dims": dims }),
    );
    let table = defect_table(&pair, alpha, beta)?;
    let t_weak = r.tolerance("weak", tol.unwrap_or(1e-12));
    let t_qs = r.tolerance("quasi_strong", tol.unwrap_or(1e-8));
    let t_weyl = r.tolerance("weyl", tol.unwrap_or(1e-6));
    r.check_below("weak_defect", table.weak, t_weak);
    r.check_below("quasi_strong_defect", table.quasi_strong, t_qs);
    r.check_below("weyl_defect", table.weyl, t_weyl);
    r.headline = vec![
        format!("weak defect: {:e} (band {})", table.weak, table.safe_rank),
        format!(
            "quasi-strong defect: {:e} (band {})",
            table.quasi_strong, table.quasi_strong_band
        ),
        format!("weyl defect: {:e} (band {})", table.weyl, table.weyl_band),
    ];
    let mut result = json!({ "table": to_value(&table) });
    if !dims.is_empty() {
        if model != Model::Boson {
            return Err(usage("--dims is only available for the boson model"));
        }
        let series = weyl_convergence(alpha, beta, dims)?;
        let decreasing = series.windows(2).all(|w| w[1].1 < w[0].1);
        r.check(
            "weyl_decreasing",
            decreasing,
            json!(decreasing),
            "strictly decreasing in N",
        );
        for (n, d) in &series {
            r.headline.push(format!("weyl defect at N = {n}: {d:e}"));
        }
        result["convergence"] = series
            .iter()
            .map(|(n, d)| json!({ "dim": n, "weyl": float(*d) }))
            .collect();
    }
    r.result = result;
    Ok(r)
}

/// Ladders, spectrum, Gram matrix and intertwiners of a Fock pair.
pub fn ladder(model: Model, dim: usize, len: usize, tol: Option<f64>) -> Result<Report, CliError> {
    let pair = fock_pair(model, dim)?;
    let mut r = Report::new("ladder", json!({ "model": model_json(model), "dim": dim, "len": len }));
    let t_eig = r.tolerance("eigen_residual", tol.unwrap_or(1e-8));
    let t_spectrum = r.tolerance("spectrum", tol.unwrap_or(1e-6));
    let t_gram = r.tolerance("gram", tol.unwrap_or(1e-7));
    let t_int = r.tolerance("intertwiner", tol.unwrap_or(1e-6));

    let (xi, eta) = ladders(&pair, len)?;
    let full = xi.len() == len + 1 && eta.len() == len + 1;
    r.check(
        "ladder_length",
        full,
        json!([xi.len(), eta.len()]),
        format!("= {}", len + 1),
    );
    let eig_xi = eigen_check(&pair, &xi)?;
    let eig_eta = eigen_check(&pair.dagger_swapped(), &eta)?;
    let max_res = eig_xi
        .residuals
        .iter()
        .chain(&eig_eta.residuals)
        .copied()
        .fold(0.0, f64::max);
    r.check_below("eigen_residual", max_res, t_eig);
    let spectrum = restricted_spectrum(&pair, &xi, t_spectrum)?;
    r.check_below("spectrum_deviation", spectrum.max_deviation, t_spectrum);
    r.check(
        "spectrum_simple",
        spectrum.min_gap > 2.0 * t_spectrum,
        float(spectrum.min_gap),
        format!("> {:e}", 2.0 * t_spectrum),
    );
    let gram = biorthogonality_gram(&xi, &eta)?;
    r.check_below("gram_defect", gram.defect, t_gram);
    let k = intertwiners(&pair, &xi, &eta)?;
    r.check_below("inverse_defect", k.inverse_defect, t_int);
    r.check_below("intertwining_defect_eta", k.intertwining_defect_eta, t_int);
    r.check_below("intertwining_defect_xi", k.intertwining_defect_xi, t_int);

    r.headline = vec![
        format!("ladder length: {}", xi.len()),
        format!(
            "spectrum: max deviation {:e}, min gap {}",
            spectrum.max_deviation,
            num(spectrum.min_gap)
        ),
        format!("gram defect: {:e}", gram.defect),
        format!(
            "condition numbers: {}, {}",
            num(k.condition_numbers.0),
            num(k.condition_numbers.1)
        ),
    ];
    r.result = json!({
        "xi": { "eigen": to_value(&eig_xi), "stop": to_value(&xi.stop_reason) },
        "eta": { "eigen": to_value(&eig_eta), "stop": to_value(&eta.stop_reason) },
        "spectrum": to_value(&spectrum),
        "gram": to_value(&gram),
        "intertwiners": to_value(&k),
    });
    Ok(r)
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> PolyFunc {
    let deg = rng.gen_range(0..=max_degree);
    let coeffs: Vec<GaussRational> = (0..=deg)
        .map(|_| GaussRational::from_ints(rng.gen_range(-3..=3), rng.gen_range(-3..=3)))
        .collect();
    PolyFunc::new(coeffs)
}

/// Monomials up to degree 5 plus seeded random polynomials up to degree 3.
pub fn polynomial_suite(seed: u64) -> Vec<PolyFunc> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suite: Vec<PolyFunc> = (0..=5).map(PolyFunc::monomial).collect();
    suite.extend((0..6).map(|_| random_poly(&mut rng, 3)));
    suite.retain(|p| !p.is_zero());
    suite
}

/// Moments, ladder length and the weak commutation relation on a suite of
/// polynomials.
pub fn weights(w: Weight, moments: usize, seed: u64, tol: Option<f64>) -> Result<Report, CliError> {
    let mut r = Report::new(
        "weights",
        json!({ "weight": to_value(&w), "moments": moments, "seed": seed }),
    );
    let t_cr = r.tolerance("weak_cr", tol.unwrap_or(1e-8));

    let moment_list: Vec<serde_json::Value> = (0..moments)
        .map(|k| match moment(&w, k) {
            MomentValue::Finite(v) => json!({ "k": k, "value": float(v) }),
            MomentValue::Divergent => json!({ "k": k, "value": "divergent" }),
        })
        .collect();

    let mut max_defect = 0.0f64;
    let (mut admissible, mut skipped) = (0usize, 0usize);
    let suite = polynomial_suite(seed);
    for f in &suite {
        for g in &suite {
            match weak_cr_check(&w, f, g) {
                Ok(d) => {
                    admissible += 1;
                    max_defect = max_defect.max(d);
                }
                Err(weakcr_core::Error::NotAdmissible { .. }) => skipped += 1,
                Err(e) => return Err(e.into()),
            }
        }
    }
    r.check_below("weak_cr_defect", max_defect, t_cr);
    r.headline.push(format!(
        "weak CR defect: {max_defect:e} over {admissible} admissible pairs ({skipped} skipped)"
    ));
    let mut result = json!({
        "moments": moment_list,
        "weak_cr": { "max_defect": float(max_defect), "admissible_pairs": admissible, "skipped_pairs": skipped },
    });

    match w {
        Weight::RationalAlpha { alpha } => {
            let ll = ladder_length(alpha)?;
            let profile = ncpoly::profile_from_membership(monomial_membership(w), 8)?;
            r.headline
                .insert(0, format!("n_max = {}, dim_N0 = {}", ll.n_max, ll.dim_n0));
            if ll.discrepancy {
                r.headline.insert(
                    1,
                    format!(
                        "closed-form dimension {} differs from the constructive value {}",
                        ll.closed_form_dim, ll.dim_n0
                    ),
                );
            }
            r.check(
                "ladder_within_bound",
                (ll.n_max as f64) < ll.strict_bound,
                json!(ll.n_max),
                format!("< {}", ll.strict_bound),
            );
            result["ladder_length"] = to_value(&ll);
            result["profile"] = to_value(&profile);
        }
        Weight::Gaussian => {
            let checks: Vec<_> = (0..=10).map(gaussian_eigen_check).collect();
            let exact = checks.iter().all(|c| c.exact);
            let worst = checks.iter().map(|c| c.quadrature_residual).fold(0.0, f64::max);
            r.check("gaussian_eigen_exact", exact, json!(exact), "exact for k = 0..10");
            r.check_below("gaussian_eigen_quadrature", worst, tol.unwrap_or(1e-10));
            r.tolerance("gaussian_eigen_quadrature", tol.unwrap_or(1e-10));
            r.headline.push(format!("gaussian eigen checks exact: {exact}"));
            result["gaussian_eigen"] = to_value(&checks);
        }
    }
    r.result = result;
    Ok(r)
}

fn parse_profile(s: &str) -> Result<PowerProfile, CliError> {
    if s.trim() == "inf" {
        return Ok(PowerProfile::unbounded());
    }
    let m = s
        .split(',')
        .map(|t| match t.trim() {
            "inf" => Ok(Bound::Unbounded),
            t => t
                .parse::<usize>()
                .map(Bound::Finite)
                .map_err(|_| usage(format!("invalid profile entry {t:?}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PowerProfile::new(Bound::Finite(m.len() - 1), m)?)
}

/// Canonical form, regularity against a power profile, and a matrix check of
/// the rewrite on the truncated boson pair.
pub fn normal_order_cmd(text: &str, profile: Option<&str>, dim: usize, tol: Option<f64>) -> Result<Report, CliError> {
    let p = parse_operator_expr(text)?.lower();
    let canonical = normal_order(&p);
    let prof = match profile {
        Some(s) => parse_profile(s)?,
        None => PowerProfile::unbounded(),
    };
    let reg = is_regular(&p, &prof);
    let dim = dim.max(p.degree() + 16);
    let mut r = Report::new(
        "normal-order",
        json!({ "expr": text, "profile": to_value(&prof), "dim": dim }),
    );
    let t_sound = r.tolerance("soundness", tol.unwrap_or(1e-10));
    let pair = fock_rep::boson_pair(dim)?;
    let scale = 1.0 + p.terms().map(|(_, c)| c.to_complex64().norm()).sum::<f64>();
    let discrepancy = safe_block_discrepancy(&p, &canonical, &pair)?;
    r.check_below("fock_soundness", discrepancy / scale, t_sound);
    r.headline = vec![canonical.to_string()];
    r.headline.push(match &reg.witness {
        None => "regular: yes".to_string(),
        Some(w) => format!("regular: no ({w})"),
    });
    r.result = json!({
        "input": p.to_string(),
        "canonical": canonical.to_string(),
        "degree": canonical.degree(),
        "terms": canonical.len(),
        "regular": reg.regular,
        "witness": reg.witness.map(|w| w.to_string()),
        "soundness": { "dim": dim, "relative_discrepancy": float(discrepancy / scale) },
    });
    Ok(r)
}

fn scan_table(t: &ScanTable) -> Table {
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    Table {
        header: [
            "label",
            "params",
            "ur1_gap",
            "ur1_saturated",
            "ur2_gap",
            "ur2_saturated",
            "c_phi",
            "e_phi",
            "reading_a",
            "reading_b",
            "closed_form_discrepancy",
        ]
        .map(String::from)
        .to_vec(),
        rows: t
            .rows
            .iter()
            .map(|row| {
                vec![
                    row.label.clone(),
                    row.params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(";"),
                    row.ur1_gap.to_string(),
                    row.ur1_saturated.to_string(),
                    row.ur2_gap.to_string(),
                    row.ur2_saturated.to_string(),
                    opt(row.c_phi),
                    opt(row.e_phi),
                    opt(row.reading_a),
                    opt(row.reading_b),
                    row.closed_form_discrepancy.to_string(),
                ]
            })
            .collect(),
    }
}

/// Saturation scan of both uncertainty relations.
pub fn uncertainty(model: Model, dim: usize, scan: Option<&str>, tol: Option<f64>) -> Result<Report, CliError> {
    let (scan_model, default_grid) = match model {
        Model::Boson => (ScanModel::Swanson { theta: 0.0, dim }, "coherent:5x5,fock:5"),
        Model::Swanson(theta) => (ScanModel::Swanson { theta, dim }, "coherent:5x5,fock:5"),
        Model::BosonRotation => (ScanModel::BosonRotation { dim }, "coherent:5x5,fock:5"),
        Model::Matrix2x2(s, q) => (ScanModel::Matrix2x2 { s, q }, "circle:11"),
    };
    let grid = parse_grid(scan.unwrap_or(default_grid))?;
    let mut r = Report::new(
        "uncertainty",
        json!({ "model": model_json(model), "dim": dim, "grid": to_value(&grid) }),
    );
    let t_sat = r.tolerance("saturation", tol.unwrap_or(weakcr_core::uncertainty::SATURATION_TOL));
    let t_valid = r.tolerance("validity", 1e-8);
    let t_closed = r.tolerance("closed_form", 1e-6);
    let table = saturation_scan_with_tol(scan_model, &grid, t_sat)?;
    let s = &table.summary;
    r.check(
        "ur1_holds",
        s.min_ur1_gap >= -t_valid,
        float(s.min_ur1_gap),
        format!(">= {:e}", -t_valid),
    );
    let mut result = json!({ "scan": to_value(&table) });
    if !matches!(model, Model::Matrix2x2(..)) {
        let pair = fock_pair(model, dim)?;
        let defect = cross_condition_defect(&pair);
        r.check_below("ur2_hypothesis", defect, t_valid);
        result["cross_condition_defect"] = float(defect);
    }
    r.check(
        "ur2_holds",
        s.min_ur2_gap >= -t_valid,
        float(s.min_ur2_gap),
        format!(">= {:e}", -t_valid),
    );
    r.check_below("closed_form_agreement", s.max_closed_form_discrepancy, t_closed);
    r.headline = vec![
        format!("states: {}", s.rows),
        format!("min UR1 gap: {}", num(s.min_ur1_gap)),
        format!("min UR2 gap: {}", num(s.min_ur2_gap)),
        format!("UR1 saturated: {} of {}", s.ur1_saturated, s.rows),
        format!("UR2 saturated: {} of {}", s.ur2_saturated, s.rows),
    ];
    r.table = Some(scan_table(&table));
    r.result = result;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn models_and_grids() {
        assert_eq!(parse_model("swanson:pi/4").unwrap(), Model::Swanson(PI / 4.0));
        assert_eq!(parse_model("swanson:0.3").unwrap(), Model::Swanson(0.3));
        assert_eq!(parse_model("matrix2x2:1,2").unwrap(), Model::Matrix2x2(1.0, 2.0));
        assert!(parse_model("fermion").is_err());
        assert_eq!(
            parse_grid("coherent:5x3,fock:4").unwrap(),
            vec![GridPart::Coherent { n_re: 5, n_im: 3 }, GridPart::Fock { k: 4 }]
        );
        assert!(parse_grid("disk:3").is_err());
    }

    #[test]
    fn profiles() {
        assert_eq!(parse_profile("inf").unwrap(), PowerProfile::unbounded());
        assert_eq!(
            parse_profile("2,1,0").unwrap(),
            PowerProfile::finite(&[2, 1, 0]).unwrap()
        );
        assert!(parse_profile("0,1").is_err());
    }
}
