use num_complex::Complex64;
use proptest::prelude::*;
use weakcr_core::fock_rep::{boson_pair, swanson_pair, StateVector};
use weakcr_core::ladder::{
    biorthogonality_gram, commutation_power_check, eigen_check, gram_min_eigenvalue, intertwiners, kernel_vector,
    ladders, normalize_pair, restricted_spectrum, KERNEL_TOL,
};
use weakcr_core::linalg::CMatrix;
use weakcr_core::Error;

/// Kernel of `cos(theta) a + i sin(theta) a+` from the recurrence
/// `c_{n+1} = -i tan(theta) sqrt(n / (n + 1)) c_{n-1}`.
fn swanson_ground_state(theta: f64, n: usize) -> StateVector {
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    c[0] = Complex64::new(1.0, 0.0);
    let t = Complex64::new(0.0, -theta.tan());
    for k in (1..n - 1).step_by(2) {
        c[k + 1] = c[k - 1] * t * (k as f64 / (k + 1) as f64).sqrt();
    }
    StateVector::from_vec(c).unwrap().normalized().unwrap()
}

#[test]
fn kernel_matches_squeezed_vacuum() {
    for theta in [0.0, 0.2, 0.3, 0.5] {
        let pair = swanson_pair(theta, 96).unwrap();
        let xi0 = kernel_vector(&pair.s, KERNEL_TOL).unwrap();
        let overlap = xi0.inner(&swanson_ground_state(theta, 96)).norm();
        assert!((overlap - 1.0).abs() < 1e-12, "theta {theta}: {overlap}");
    }
}

/// `psi_k = a+^k e_0 / sqrt(k!)` is exactly `e_k`, up to the base phase.
#[test]
fn boson_ladder_is_number_basis() {
    let pair = boson_pair(32).unwrap();
    let (xi, _) = ladders(&pair, 6).unwrap();
    let phase = xi.base.components()[0];
    assert!((phase.norm() - 1.0).abs() < 1e-15);
    for (k, v) in xi.vectors.iter().enumerate() {
        let e = StateVector::basis(32, k).unwrap().scale(phase);
        assert!((v.components() - e.components()).norm() < 1e-13, "k = {k}");
    }
}

#[test]
fn swanson_ladder_at_96() {
    let pair = swanson_pair(0.3, 96).unwrap();
    let (xi, eta) = ladders(&pair, 6).unwrap();
    assert_eq!((xi.len(), eta.len()), (7, 7));
    let eig = eigen_check(&pair, &xi).unwrap();
    assert!(eig.residuals.iter().all(|&r| r < 1e-8), "{:?}", eig.residuals);
    let eig_eta = eigen_check(&pair.dagger_swapped(), &eta).unwrap();
    assert!(eig_eta.residuals.iter().all(|&r| r < 1e-8));
    let spectrum = restricted_spectrum(&pair, &xi, 1e-6).unwrap();
    assert!(spectrum.matches && spectrum.max_deviation < 1e-6 && spectrum.min_gap > 0.5);
    for (k, l) in spectrum.eigenvalues.iter().enumerate() {
        assert!((l[0] - k as f64).abs() < 1e-6 && l[1].abs() < 1e-6);
    }
    let gram = biorthogonality_gram(&xi, &eta).unwrap();
    assert!(gram.defect < 1e-7);
    let k = intertwiners(&pair, &xi, &eta).unwrap();
    assert!(k.inverse_defect < 1e-6);
    assert!(k.intertwining_defect_eta < 1e-6 && k.intertwining_defect_xi < 1e-6);
    assert!(k.riesz.k_eta_positive);
}

#[test]
fn ladder_vectors_are_independent() {
    for theta in [0.0, 0.3, 0.5] {
        let pair = swanson_pair(theta, 96).unwrap();
        let (xi, eta) = ladders(&pair, 6).unwrap();
        assert!(gram_min_eigenvalue(&xi) > 0.0);
        assert!(gram_min_eigenvalue(&eta) > 0.0);
    }
}

#[test]
fn gram_is_adjoint_under_swap() {
    let pair = swanson_pair(0.3, 96).unwrap();
    let (xi, eta) = ladders(&pair, 6).unwrap();
    let g1 = biorthogonality_gram(&xi, &eta).unwrap().gram;
    let g2 = biorthogonality_gram(&eta, &xi).unwrap().gram;
    let d = (&g1 - g2.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(d < 1e-12, "{d}");
}

fn span_condition(m: &CMatrix, rank: usize) -> f64 {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s[0] / s[rank - 1]
}

/// Column-relative defect of `K_eta K_xi = 1` and `K_xi K_eta = 1` on the two
/// spans, against `10 cond(K) eps`.
#[test]
fn intertwiners_are_mutually_inverse() {
    for (theta, n, len) in [(0.0, 64, 5), (0.3, 96, 6), (0.3, 64, 3), (1.0, 96, 6)] {
        let pair = swanson_pair(theta, n).unwrap();
        let (xi, eta) = ladders(&pair, len).unwrap();
        let k = intertwiners(&pair, &xi, &eta).unwrap();
        let (eta_n, _) = normalize_pair(&xi, &eta).unwrap();
        let (x, h) = (xi.matrix(), eta_n.matrix());
        let mut rel = 0.0f64;
        for j in 0..xi.len() {
            let a = (&k.k_eta * &k.k_xi * h.column(j) - h.column(j)).norm() / h.column(j).norm();
            let b = (&k.k_xi * &k.k_eta * x.column(j) - x.column(j)).norm() / x.column(j).norm();
            rel = rel.max(a).max(b);
        }
        let cond = span_condition(&k.k_eta, xi.len()).max(span_condition(&k.k_xi, xi.len()));
        assert!(
            rel <= 10.0 * cond * f64::EPSILON,
            "theta {theta}: {rel:e} vs cond {cond:e}"
        );
    }
}

#[test]
fn mismatched_families_are_not_biorthogonal() {
    let (xi, _) = ladders(&swanson_pair(0.3, 96).unwrap(), 6).unwrap();
    let (_, eta) = ladders(&swanson_pair(0.0, 96).unwrap(), 6).unwrap();
    assert!(biorthogonality_gram(&xi, &eta).unwrap().defect > 0.1);
}

#[test]
fn orthogonal_bases_are_rejected() {
    let pair = boson_pair(16).unwrap();
    let (xi, _) = ladders(&pair, 3).unwrap();
    let shifted = ladders(&pair, 4).unwrap().0;
    let mut other = shifted.clone();
    other.vectors.remove(0);
    other.base = other.vectors[0].clone();
    assert!(matches!(
        biorthogonality_gram(&xi, &other),
        Err(Error::NonNormalizable { .. })
    ));
}

#[test]
fn commutation_powers() {
    let pair = swanson_pair(0.3, 96).unwrap();
    let (xi, _) = ladders(&pair, 0).unwrap();
    for k in 1..=4 {
        assert!(commutation_power_check(&pair, &xi.base, k).unwrap() < 1e-8);
    }
    let edge = StateVector::basis(96, 93).unwrap();
    assert!(matches!(
        commutation_power_check(&pair, &edge, 4),
        Err(Error::SafeBandExhausted { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn spectrum_is_the_ladder(theta in -0.35f64..0.35, len in 1usize..6) {
        let pair = swanson_pair(theta, 96).unwrap();
        let (xi, _) = ladders(&pair, len).unwrap();
        prop_assert_eq!(xi.len(), len + 1);
        let spectrum = restricted_spectrum(&pair, &xi, 1e-6).unwrap();
        prop_assert!(spectrum.matches, "{:?}", spectrum.eigenvalues);
        prop_assert_eq!(spectrum.eigenvalues.len(), len + 1);
    }

    #[test]
    fn monotone_flag_matches_residuals(theta in -0.5f64..0.5) {
        let pair = swanson_pair(theta, 80).unwrap();
        let (xi, _) = ladders(&pair, 5).unwrap();
        let eig = eigen_check(&pair, &xi).unwrap();
        let monotone = eig.residuals.windows(2).all(|w| w[1] >= w[0]);
        prop_assert_eq!(eig.monotone, monotone);
    }
}
