//! Truncated Fock-space models of operator pairs and the numerical defects of
//! the weak, quasi-strong and Weyl forms of `[S,T] = 1`.
//!
//! All defects are evaluated on a *safe band*: the leading basis indices on
//! which truncating the Fock space does not change the quantity being
//! checked. A degree-`d` word leaks `d` indices; semigroups additionally spread
//! by roughly `10 alpha sqrt(N)` indices, see [`semigroup_margin`].

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extended::{self, DdComplex, SparseDd};
use crate::linalg::{self, CMatrix, CVector, ONE};

pub const DEFAULT_DIM: usize = 128;

/// Finite stand-in for an element of `L+(D, H)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedOperator {
    label: String,
    entries: CMatrix,
    precise: Option<SparseDd>,
}

impl TruncatedOperator {
    pub fn new(label: impl Into<String>, entries: CMatrix) -> Result<Self> {
        let dim = entries.nrows();
        if dim == 0 {
            return Err(Error::InvalidDimension { dim, min: 1 });
        }
        if entries.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: entries.ncols(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical("operator entries must be finite"));
        }
        Ok(Self {
            label: label.into(),
            entries,
            precise: None,
        })
    }

    /// Attaches double-double entries, used where f64 rounding of the
    /// entries would dominate a defect.
    pub fn with_precise(mut self, precise: SparseDd) -> Result<Self> {
        check_dim(self.dim(), precise.dim())?;
        self.precise = Some(precise);
        Ok(self)
    }

    /// Double-double entries: the attached ones, else the f64 entries widened.
    pub fn precise(&self) -> SparseDd {
        match &self.precise {
            Some(p) => p.clone(),
            None => SparseDd::from_dense(&self.entries),
        }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new("I", linalg::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    /// Conjugate transpose; the label gains or loses a trailing `'`.
    pub fn adjoint(&self) -> Self {
        let label = match self.label.strip_suffix('\'') {
            Some(base) => base.to_string(),
            None => format!("{}'", self.label),
        };
        Self {
            label,
            entries: self.entries.adjoint(),
            precise: self.precise.as_ref().map(SparseDd::adjoint),
        }
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        check_dim(self.dim(), v.dim())?;
        Ok(StateVector {
            components: &self.entries * &v.components,
        })
    }

    pub fn compose(&self, other: &TruncatedOperator) -> Result<TruncatedOperator> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self {
            label: format!("{}{}", self.label, other.label),
            entries: &self.entries * &other.entries,
            precise: None,
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            label: self.label.clone(),
            entries: &self.entries * c,
            precise: self.precise.as_ref().map(|p| p.scale(DdComplex::from_c64(c))),
        }
    }

    pub fn exp(&self, t: f64) -> CMatrix {
        linalg::expm(&(&self.entries * Complex64::new(t, 0.0)))
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    components: CVector,
}

impl StateVector {
    pub fn new(components: CVector) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidDimension { dim: 0, min: 1 });
        }
        if components.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical("state components must be finite"));
        }
        Ok(Self { components })
    }

    pub fn from_vec(v: Vec<Complex64>) -> Result<Self> {
        Self::new(CVector::from_vec(v))
    }

    /// Fock basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidDimension { dim, min: k + 1 });
        }
        let mut v = CVector::zeros(dim);
        v[k] = ONE;
        Ok(Self { components: v })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &CVector {
        &self.components
    }

    pub fn norm(&self) -> f64 {
        self.components.norm()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::NotNormalized { norm: 0.0 });
        }
        Ok(Self {
            components: &self.components / Complex64::new(n, 0.0),
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            components: &self.components * c,
        }
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        linalg::inner(&self.components, &other.components)
    }

    /// Relative mass on indices `>= from`.
    pub fn tail_fraction(&self, from: usize) -> f64 {
        let total = self.norm();
        if total == 0.0 {
            return 0.0;
        }
        let tail: f64 = self
            .components
            .iter()
            .skip(from)
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        tail / total
    }
}

/// The pair `(S, T)` together with the safe rank of its truncation.
#[derive(Clone, Debug)]
pub struct OperatorPair {
    pub s: TruncatedOperator,
    pub t: TruncatedOperator,
    safe_rank: usize,
}

impl OperatorPair {
    pub fn new(s: TruncatedOperator, t: TruncatedOperator, safe_rank: usize) -> Result<Self> {
        check_dim(s.dim(), t.dim())?;
        if safe_rank == 0 || safe_rank >= s.dim() {
            return Err(Error::SafeBandExhausted {
                needed: safe_rank.max(1),
                available: s.dim().saturating_sub(1),
            });
        }
        Ok(Self { s, t, safe_rank })
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn safe_rank(&self) -> usize {
        self.safe_rank
    }

    pub fn s_dagger(&self) -> TruncatedOperator {
        self.s.adjoint()
    }

    pub fn t_dagger(&self) -> TruncatedOperator {
        self.t.adjoint()
    }

    /// The pair `(T+, S+)`, which satisfies the same relation.
    pub fn dagger_swapped(&self) -> Self {
        Self {
            s: self.t.adjoint(),
            t: self.s.adjoint(),
            safe_rank: self.safe_rank,
        }
    }
}

fn ladder_matrix(n: usize, lower: bool) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n - 1 {
        let v = Complex64::new(((j + 1) as f64).sqrt(), 0.0);
        if lower {
            m[(j, j + 1)] = v;
        } else {
            m[(j + 1, j)] = v;
        }
    }
    m
}

fn ladder_precise(n: usize, lower: bool) -> SparseDd {
    SparseDd::from_triplets(
        n,
        (0..n - 1).map(|j| {
            let v = DdComplex::from_real(twofloat::TwoFloat::from((j + 1) as f64).sqrt());
            if lower {
                (j, j + 1, v)
            } else {
                (j + 1, j, v)
            }
        }),
    )
}

/// Annihilation operator `a` on the first `n` Fock states.
pub fn lowering(n: usize) -> Result<TruncatedOperator> {
    if n < 2 {
        return Err(Error::InvalidDimension { dim: n, min: 2 });
    }
    TruncatedOperator::new("a", ladder_matrix(n, true))?.with_precise(ladder_precise(n, true))
}

/// Creation operator `a+`, the adjoint of [`lowering`].
pub fn raising(n: usize) -> Result<TruncatedOperator> {
    if n < 2 {
        return Err(Error::InvalidDimension { dim: n, min: 2 });
    }
    TruncatedOperator::new("a'", ladder_matrix(n, false))?.with_precise(ladder_precise(n, false))
}

/// The canonical pair `(a, a+)`.
pub fn boson_pair(n: usize) -> Result<OperatorPair> {
    OperatorPair::new(lowering(n)?, raising(n)?, n - 1)
}

/// `S = cos(theta) a + i sin(theta) a+`, `T = cos(theta) a+ + i sin(theta) a`.
pub fn swanson_pair(theta: f64, n: usize) -> Result<OperatorPair> {
    let a = lowering(n)?;
    let ad = raising(n)?;
    let c = Complex64::new(theta.cos(), 0.0);
    let is = Complex64::new(0.0, theta.sin());
    let (cd, isd) = (DdComplex::from_c64(c), DdComplex::from_c64(is));
    let (ap, adp) = (a.precise(), ad.precise());
    let s = TruncatedOperator::new("S", a.matrix() * c + ad.matrix() * is)?.with_precise(ap.combine(cd, &adp, isd))?;
    let t = TruncatedOperator::new("T", ad.matrix() * c + a.matrix() * is)?.with_precise(adp.combine(cd, &ap, isd))?;
    OperatorPair::new(s, t, n - 1)
}

pub const COHERENT_TAIL_LIMIT: f64 = 1e-12;

/// `sum_{n >= N} |z|^{2n} / n!`, summed in log space.
pub fn coherent_tail_mass(z: Complex64, n: usize) -> f64 {
    let r2 = z.norm_sqr();
    if r2 == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let ln_r2 = r2.ln();
    let mut ln_term = 0.0f64;
    for k in 1..=n {
        ln_term += ln_r2 - (k as f64).ln();
    }
    let mut tail = 0.0f64;
    let mut k = n;
    loop {
        let term = ln_term.exp();
        tail += term;
        k += 1;
        ln_term += ln_r2 - (k as f64).ln();
        if k > n && (k as f64) > 2.0 * r2 && ln_term.exp() < 1e-20 * tail.max(f64::MIN_POSITIVE) {
            break;
        }
        if k > n + 100_000 {
            break;
        }
    }
    tail
}

/// Normalized coherent state `Phi(z)` truncated to `n` components.
pub fn coherent_state(z: Complex64, n: usize) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::InvalidDimension { dim: 0, min: 1 });
    }
    let tail = coherent_tail_mass(z, n);
    if tail >= COHERENT_TAIL_LIMIT {
        return Err(Error::TruncationTooSmall {
            tail_mass: tail,
            limit: COHERENT_TAIL_LIMIT,
        });
    }
    let mut v = CVector::zeros(n);
    v[0] = ONE;
    for k in 1..n {
        v[k] = v[k - 1] * z / (k as f64).sqrt();
    }
    StateVector::new(v)?.normalized()
}

/// Number of indices the semigroup safe band loses: `ceil(10 alpha sqrt(N))`.
pub fn semigroup_margin(alpha: f64, n: usize) -> usize {
    (10.0 * alpha * (n as f64).sqrt()).ceil() as usize
}

fn semigroup_band(pair: &OperatorPair, param: f64) -> Result<usize> {
    let margin = semigroup_margin(param, pair.dim());
    if margin >= pair.safe_rank() {
        return Err(Error::SafeBandExhausted {
            needed: margin + 1,
            available: pair.safe_rank(),
        });
    }
    Ok(pair.safe_rank() - margin)
}

fn check_nonnegative(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            reason: "semigroup parameter must be >= 0",
        })
    }
}

/// Max over safe basis pairs of `|<T e_i, S+ e_j> - <S e_i, T+ e_j> - delta_ij|`.
///
/// With `<x, y> = y^H x` the bracket is the `(j, i)` entry of `ST - TS - 1`.
pub fn weak_defect(pair: &OperatorPair) -> f64 {
    let s = pair.s.matrix();
    let t = pair.t.matrix();
    let k = pair.safe_rank();
    let comm = s * t - t * s - linalg::identity(pair.dim());
    linalg::max_abs_block(&comm, k, k)
}

/// Max over the reduced safe band of
/// `|<V T e_i, e_j> - <V e_i, T+ e_j> - alpha <V e_i, e_j>|`, `V = exp(alpha S)`.
pub fn quasi_strong_defect(pair: &OperatorPair, alpha: f64) -> Result<f64> {
    check_nonnegative("alpha", alpha)?;
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let band = semigroup_band(pair, alpha)?;
    let v = pair.s.exp(alpha);
    let t = pair.t.matrix();
    let d = &v * t - t * &v - &v * Complex64::new(alpha, 0.0);
    Ok(linalg::max_abs_block(&d, band, band))
}

/// Spectral norm of `V_S(alpha) V_T(beta) - e^{alpha beta} V_T(beta) V_S(alpha)`
/// restricted to the reduced safe band.
///
/// The products are formed column by column in double-double arithmetic, so
/// the truncation error stays visible well below `1e-16`.
pub fn weyl_defect(pair: &OperatorPair, alpha: f64, beta: f64) -> Result<f64> {
    check_nonnegative("alpha", alpha)?;
    check_nonnegative("beta", beta)?;
    if alpha == 0.0 || beta == 0.0 {
        return Ok(0.0);
    }
    let band = semigroup_band(pair, alpha.max(beta))?;
    let n = pair.dim();
    let s = pair.s.precise();
    let t = pair.t.precise();
    let ab = twofloat::TwoFloat::new_mul(alpha, beta);
    let factor = extended::dd_exp(ab);

    let mut block = CMatrix::zeros(band, band);
    for j in 0..band {
        let e = extended::unit(n, j);
        let st = s.exp_apply(alpha, &t.exp_apply(beta, &e)?)?;
        let ts = t.exp_apply(beta, &s.exp_apply(alpha, &e)?)?;
        for i in 0..band {
            let d: DdComplex = st[i] - ts[i].scale(factor);
            block[(i, j)] = d.to_c64();
        }
    }
    Ok(linalg::spectral_norm(&block))
}

/// `weyl_defect` of the boson pair across several truncation sizes.
pub fn weyl_convergence(alpha: f64, beta: f64, dims: &[usize]) -> Result<Vec<(usize, f64)>> {
    dims.iter()
        .map(|&n| Ok((n, weyl_defect(&boson_pair(n)?, alpha, beta)?)))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectTable {
    pub dim: usize,
    pub safe_rank: usize,
    pub weak: f64,
    pub alpha: f64,
    pub beta: f64,
    pub quasi_strong: f64,
    pub quasi_strong_band: usize,
    pub weyl: f64,
    pub weyl_band: usize,
}

pub fn defect_table(pair: &OperatorPair, alpha: f64, beta: f64) -> Result<DefectTable> {
    Ok(DefectTable {
        dim: pair.dim(),
        safe_rank: pair.safe_rank(),
        weak: weak_defect(pair),
        alpha,
        beta,
        quasi_strong: quasi_strong_defect(pair, alpha)?,
        quasi_strong_band: semigroup_band(pair, alpha)?,
        weyl: weyl_defect(pair, alpha, beta)?,
        weyl_band: semigroup_band(pair, alpha.max(beta))?,
    })
}

/// `(a, a)`: a pair violating every form of the relation.
pub fn degenerate_pair(n: usize) -> Result<OperatorPair> {
    let a = lowering(n)?;
    OperatorPair::new(a.clone(), a, n - 1)
}
