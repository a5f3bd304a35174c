//! Eigenvector ladders `xi_k = T^k xi_0 / sqrt(k!)` built on a vector with
//! `S xi_0 = 0`, the companion ladder `eta_r = (S+)^r eta_0 / sqrt(r!)`, and
//! the intertwining operators between their spans.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock_rep::{check_dim, OperatorPair, StateVector, TruncatedOperator};
use crate::linalg::{self, CMatrix, CVector, ONE};

/// Default tolerance on the smallest singular value in [`kernel_vector`].
pub const KERNEL_TOL: f64 = 1e-8;
/// Relative tail mass beyond the safe band tolerated by [`tail_membership`].
pub const TAIL_TOL: f64 = 1e-8;
const CONDITION_LIMIT: f64 = 1e12;

fn fix_phase(v: CVector) -> CVector {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    match v.iter().find(|z| z.norm() > 1e-12 * max) {
        Some(&z) => {
            let phase = z.conj() / z.norm();
            v * phase
        }
        None => v,
    }
}

/// Unit vector spanning the numerical kernel of `a`.
///
/// A truncated lowering-type matrix can have a second tiny singular value
/// whose vector lives at the top of the Fock basis. When several singular
/// values fall below `tol`, the unit vector of that subspace with the least
/// weight `sum n |c_n|^2` is returned. The first non-negligible component is
/// made positive real.
pub fn kernel_vector(a: &TruncatedOperator, tol: f64) -> Result<StateVector> {
    let n = a.dim();
    let svd = a.matrix().clone().svd(false, true);
    let v_t = svd.v_t.ok_or(Error::Numerical("SVD did not return right vectors"))?;
    let sigma = svd.singular_values;
    let sigma_min = sigma.iter().copied().fold(f64::INFINITY, f64::min);
    let null: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i] <= tol).collect();
    if null.is_empty() {
        return Err(Error::NoKernel { sigma_min, tol });
    }
    let mut q = CMatrix::zeros(n, null.len());
    for (c, &i) in null.iter().enumerate() {
        for r in 0..n {
            q[(r, c)] = v_t[(i, r)].conj();
        }
    }
    let v = if null.len() == 1 {
        q.column(0).into_owned()
    } else {
        let number = CMatrix::from_diagonal(&CVector::from_iterator(
            n,
            (0..n).map(|k| Complex64::new(k as f64, 0.0)),
        ));
        let m = q.adjoint() * number * &q;
        let eig = m.symmetric_eigen();
        let (imin, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &l)| if l < acc.1 { (i, l) } else { acc });
        &q * eig.eigenvectors.column(imin)
    };
    StateVector::new(fix_phase(v))?.normalized()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum StopReason {
    ReachedMax,
    MembershipFailed { k: usize },
}

#[derive(Clone, Debug)]
pub struct LadderFamily {
    pub base: StateVector,
    pub vectors: Vec<StateVector>,
    pub ladder_op_label: String,
    pub eigen_residuals: Vec<f64>,
    pub stop_reason: StopReason,
}

impl LadderFamily {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Columns `psi_0, psi_1, ...`.
    pub fn matrix(&self) -> CMatrix {
        let cols: Vec<CVector> = self.vectors.iter().map(|v| v.components().clone()).collect();
        CMatrix::from_columns(&cols)
    }

    pub fn scaled(&self, c: Complex64) -> LadderFamily {
        LadderFamily {
            base: self.base.scale(c),
            vectors: self.vectors.iter().map(|v| v.scale(c)).collect(),
            ladder_op_label: self.ladder_op_label.clone(),
            eigen_residuals: self.eigen_residuals.clone(),
            stop_reason: self.stop_reason.clone(),
        }
    }
}

/// Matrix-model stand-in for domain membership: the relative mass beyond
/// `safe_rank` must stay below [`TAIL_TOL`].
pub fn tail_membership(safe_rank: usize) -> impl Fn(&StateVector) -> bool {
    move |v| v.tail_fraction(safe_rank) < TAIL_TOL
}

/// Applies `t` repeatedly, `psi_k = t psi_{k-1} / sqrt(k)`, until `n_max`
/// steps are done or `member` rejects a new vector.
pub fn build_ladder(
    t: &TruncatedOperator,
    xi0: &StateVector,
    n_max: usize,
    member: impl Fn(&StateVector) -> bool,
) -> Result<LadderFamily> {
    check_dim(t.dim(), xi0.dim())?;
    if xi0.norm() == 0.0 {
        return Err(Error::NotNormalized { norm: 0.0 });
    }
    let mut vectors = vec![xi0.clone()];
    let mut stop_reason = StopReason::ReachedMax;
    for k in 1..=n_max {
        let next = t
            .apply(vectors.last().expect("nonempty"))?
            .scale(Complex64::new(1.0 / (k as f64).sqrt(), 0.0));
        if !member(&next) {
            stop_reason = StopReason::MembershipFailed { k };
            break;
        }
        vectors.push(next);
    }
    Ok(LadderFamily {
        base: xi0.clone(),
        vectors,
        ladder_op_label: t.label().to_string(),
        eigen_residuals: Vec::new(),
        stop_reason,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenReport {
    /// `||T S psi_k - k psi_k|| / ||psi_k||`.
    pub residuals: Vec<f64>,
    /// `||S psi_k - sqrt(k) psi_{k-1}|| / ||psi_k||`.
    pub lowering_residuals: Vec<f64>,
    /// Truncation diagnostic: residuals nondecreasing in `k`.
    pub monotone: bool,
}

/// Checks `T S psi_k = k psi_k` and `S psi_k = sqrt(k) psi_{k-1}` on a ladder
/// built from `pair.t`.
pub fn eigen_check(pair: &OperatorPair, fam: &LadderFamily) -> Result<EigenReport> {
    let s = pair.s.matrix();
    let t = pair.t.matrix();
    let mut residuals = Vec::with_capacity(fam.len());
    let mut lowering_residuals = Vec::with_capacity(fam.len());
    for (k, psi) in fam.vectors.iter().enumerate() {
        check_dim(pair.dim(), psi.dim())?;
        let v = psi.components();
        let norm = psi.norm();
        let sv = s * v;
        let r = (t * &sv - v * Complex64::new(k as f64, 0.0)).norm() / norm;
        residuals.push(r);
        let low = if k == 0 {
            sv.norm() / norm
        } else {
            let prev = fam.vectors[k - 1].components();
            (sv - prev * Complex64::new((k as f64).sqrt(), 0.0)).norm() / norm
        };
        lowering_residuals.push(low);
    }
    let monotone = residuals.windows(2).all(|w| w[1] >= w[0]);
    Ok(EigenReport {
        residuals,
        lowering_residuals,
        monotone,
    })
}

/// Runs [`eigen_check`] and stores its residuals on the family.
pub fn with_eigen_residuals(pair: &OperatorPair, mut fam: LadderFamily) -> Result<LadderFamily> {
    fam.eigen_residuals = eigen_check(pair, &fam)?.residuals;
    Ok(fam)
}

fn support_end(v: &StateVector) -> usize {
    let max = v.components().iter().map(|z| z.norm()).fold(0.0, f64::max);
    v.components().iter().rposition(|z| z.norm() > 1e-14 * max).unwrap_or(0)
}

/// `||S T^k xi - T^k S xi - k T^(k-1) xi||`.
pub fn commutation_power_check(pair: &OperatorPair, xi: &StateVector, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain {
            name: "k",
            value: 0.0,
            reason: "power must be at least 1",
        });
    }
    check_dim(pair.dim(), xi.dim())?;
    let needed = support_end(xi) + k + 1;
    if needed > pair.safe_rank() {
        return Err(Error::SafeBandExhausted {
            needed,
            available: pair.safe_rank(),
        });
    }
    let s = pair.s.matrix();
    let t = pair.t.matrix();
    let v = xi.components();
    let mut tk1 = v.clone();
    for _ in 0..k - 1 {
        tk1 = t * tk1;
    }
    let tk = t * &tk1;
    let mut tks = s * v;
    for _ in 0..k {
        tks = t * tks;
    }
    let r = s * tk - tks - tk1 * Complex64::new(k as f64, 0.0);
    Ok(r.norm())
}

#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    #[serde(skip)]
    pub gram: CMatrix,
    /// Factor applied to the second family so that `<xi_0, eta_0> = 1`.
    pub scale: [f64; 2],
    /// `max |G - I|`.
    pub defect: f64,
}

/// Rescales `eta` so that `<xi_0, eta_0> = 1`.
pub fn normalize_pair(xi: &LadderFamily, eta: &LadderFamily) -> Result<(LadderFamily, Complex64)> {
    let overlap = xi.base.inner(&eta.base);
    if overlap.norm() < 1e-14 {
        return Err(Error::NonNormalizable {
            overlap: overlap.norm(),
        });
    }
    let c = ONE / overlap.conj();
    Ok((eta.scaled(c), c))
}

/// `G_ij = <xi_i, eta_j>` after normalizing `eta`.
pub fn biorthogonality_gram(xi: &LadderFamily, eta: &LadderFamily) -> Result<GramReport> {
    let (eta, c) = normalize_pair(xi, eta)?;
    let g = CMatrix::from_fn(xi.len(), eta.len(), |i, j| xi.vectors[i].inner(&eta.vectors[j]));
    let defect = linalg::max_abs(&(&g - CMatrix::identity(xi.len(), eta.len())));
    Ok(GramReport {
        gram: g,
        scale: [c.re, c.im],
        defect,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RieszDiagnostics {
    pub xi_singular_values: Vec<f64>,
    pub eta_singular_values: Vec<f64>,
    pub k_eta_positive: bool,
    pub k_eta_min_eigenvalue: f64,
    /// `max |<e_i, e_j> - delta_ij|` for `e_j = K_eta^(1/2) xi_j`; absent when
    /// `K_eta` is not positive.
    pub orthonormality_defect: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntertwinerPair {
    #[serde(skip)]
    pub k_xi: CMatrix,
    #[serde(skip)]
    pub k_eta: CMatrix,
    pub condition_numbers: (f64, f64),
    /// `max(||K_eta K_xi eta_j - eta_j||, ||K_xi K_eta xi_j - xi_j||)`.
    pub inverse_defect: f64,
    /// `max_j ||K_eta T S xi_j - S+ T+ K_eta xi_j||`.
    pub intertwining_defect_eta: f64,
    /// `max_j ||K_xi S+ T+ eta_j - T S K_xi eta_j||`.
    pub intertwining_defect_xi: f64,
    pub riesz: RieszDiagnostics,
}

fn condition(m: &CMatrix) -> (Vec<f64>, f64) {
    let sv: Vec<f64> = m.singular_values().iter().copied().collect();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    (sv, if min > 0.0 { max / min } else { f64::INFINITY })
}

fn max_col_norm(m: &CMatrix) -> f64 {
    m.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `K_xi = Xi (Xi^H H)^-1 Xi^H` and `K_eta = H (H^H Xi)^-1 H^H`, so that
/// `K_xi eta_j = xi_j` and `K_eta xi_j = eta_j` on the two spans.
pub fn intertwiners(pair: &OperatorPair, xi: &LadderFamily, eta: &LadderFamily) -> Result<IntertwinerPair> {
    if xi.len() != eta.len() {
        return Err(Error::DimensionMismatch {
            expected: xi.len(),
            found: eta.len(),
        });
    }
    let (eta, _) = normalize_pair(xi, eta)?;
    let x = xi.matrix();
    let h = eta.matrix();
    let (xi_sv, cond_xi) = condition(&x);
    let (eta_sv, cond_eta) = condition(&h);
    let cond = cond_xi.max(cond_eta);
    if cond.is_nan() || cond >= CONDITION_LIMIT {
        return Err(Error::Conditioning { cond });
    }
    let inv = |m: CMatrix| -> Result<CMatrix> { m.try_inverse().ok_or(Error::Conditioning { cond: f64::INFINITY }) };
    let k_xi = &x * inv(hermitian_part(&(x.adjoint() * &h)))? * x.adjoint();
    let k_eta = &h * inv(hermitian_part(&(h.adjoint() * &x)))? * h.adjoint();

    let inverse_defect = max_col_norm(&(&k_eta * &k_xi * &h - &h)).max(max_col_norm(&(&k_xi * &k_eta * &x - &x)));

    let s = pair.s.matrix();
    let t = pair.t.matrix();
    let ts = t * s;
    let sdtd = s.adjoint() * t.adjoint();
    let intertwining_defect_eta = max_col_norm(&(&k_eta * &ts * &x - &sdtd * &k_eta * &x));
    let intertwining_defect_xi = max_col_norm(&(&k_xi * &sdtd * &h - &ts * &k_xi * &h));

    let eig = hermitian_part(&k_eta).symmetric_eigen();
    let min_eig = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let positive = min_eig >= -1e-10;
    let orthonormality_defect = positive.then(|| {
        let roots = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
        let sqrt_k = &eig.eigenvectors * CMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint();
        let e = sqrt_k * &x;
        let g = e.adjoint() * &e;
        linalg::max_abs(&(g - linalg::identity(xi.len())))
    });

    Ok(IntertwinerPair {
        k_xi,
        k_eta,
        condition_numbers: (cond_xi, cond_eta),
        inverse_defect,
        intertwining_defect_eta,
        intertwining_defect_xi,
        riesz: RieszDiagnostics {
            xi_singular_values: xi_sv,
            eta_singular_values: eta_sv,
            k_eta_positive: positive,
            k_eta_min_eigenvalue: min_eig,
            orthonormality_defect,
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    /// Eigenvalues sorted by real part.
    pub eigenvalues: Vec<[f64; 2]>,
    /// `max_k |lambda_k - k|`.
    pub max_deviation: f64,
    /// Smallest distance between two eigenvalues.
    pub min_gap: f64,
    pub matches: bool,
}

/// Eigenvalues of `T S` restricted to the span of the ladder, in the ladder
/// basis: `M = Xi^+ (T S Xi)`.
pub fn restricted_spectrum(pair: &OperatorPair, fam: &LadderFamily, tol: f64) -> Result<SpectrumReport> {
    let x = fam.matrix();
    let ts = pair.t.matrix() * pair.s.matrix();
    let pinv = x
        .clone()
        .pseudo_inverse(1e-13)
        .map_err(|_| Error::Numerical("pseudo-inverse failed"))?;
    let m = pinv * ts * &x;
    let (_, tri) = m.schur().unpack();
    let mut eigs: Vec<Complex64> = tri.diagonal().iter().copied().collect();
    eigs.sort_by(|a, b| a.re.total_cmp(&b.re));
    let max_deviation = eigs
        .iter()
        .enumerate()
        .map(|(k, l)| (l - Complex64::new(k as f64, 0.0)).norm())
        .fold(0.0, f64::max);
    let mut min_gap = f64::INFINITY;
    for i in 0..eigs.len() {
        for j in i + 1..eigs.len() {
            min_gap = min_gap.min((eigs[i] - eigs[j]).norm());
        }
    }
    Ok(SpectrumReport {
        eigenvalues: eigs.iter().map(|z| [z.re, z.im]).collect(),
        max_deviation,
        min_gap,
        matches: max_deviation <= tol && min_gap > 2.0 * tol,
    })
}

/// Smallest eigenvalue of the family's Gram matrix `Xi^H Xi`.
pub fn gram_min_eigenvalue(fam: &LadderFamily) -> f64 {
    let x = fam.matrix();
    (x.adjoint() * x)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Both ladders of a pair: `xi` from `ker S` raised by `T`, `eta` from
/// `ker T+` raised by `S+`, each of `len + 1` vectors at most.
pub fn ladders(pair: &OperatorPair, len: usize) -> Result<(LadderFamily, LadderFamily)> {
    let xi0 = kernel_vector(&pair.s, KERNEL_TOL)?;
    let xi = build_ladder(&pair.t, &xi0, len, tail_membership(pair.safe_rank()))?;
    let xi = with_eigen_residuals(pair, xi)?;
    let swapped = pair.dagger_swapped();
    let eta0 = kernel_vector(&swapped.s, KERNEL_TOL)?;
    let eta = build_ladder(&swapped.t, &eta0, len, tail_membership(pair.safe_rank()))?;
    let eta = with_eigen_residuals(&swapped, eta)?;
    Ok((xi, eta))
}
