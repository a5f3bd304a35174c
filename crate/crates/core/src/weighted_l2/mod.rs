//! `S = d/dx` and `T = x` on polynomials in `L2(R, w dx)` for the weights
//! `w_alpha(x) = (1 + x^4)^(-alpha)` and `w(x) = exp(-x^2 / 2)`.
//!
//! Polynomials carry exact coefficients; integrals are numerical. Whether an
//! integral converges is decided by power counting before any quadrature
//! runs: `x^p w_alpha` is integrable iff `p < 4 alpha - 1`.
//!
//! Rational-weight integrals are split at `|x| = 1`. The outer pieces are
//! mapped to `[0, 1]` by `x = 1/t`, which turns `x^p w_alpha` into
//! `t^(4 alpha - 2 - p) (1 + t^4)^(-alpha)`. Functions therefore expose both
//! their values and their *tail form* `t^g f(1/t)`, where `g` is the growth
//! exponent.

pub mod quadrature;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::GaussRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyFunc {
    coeffs: Vec<GaussRational>,
}

impl PolyFunc {
    /// Coefficients `c_0, ..., c_d` of `sum c_k x^k`; trailing zeros dropped.
    pub fn new(mut coeffs: Vec<GaussRational>) -> Self {
        while coeffs.last().is_some_and(GaussRational::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussRational::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::new(vec![c])
    }

    /// `u_k(x) = x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![GaussRational::zero(); k + 1];
        c[k] = GaussRational::one();
        Self { coeffs: c }
    }

    pub fn coeffs(&self) -> &[GaussRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> GaussRational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &PolyFunc) -> PolyFunc {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &PolyFunc) -> PolyFunc {
        self.add(&other.scale(&GaussRational::from_int(-1)))
    }

    pub fn scale(&self, c: &GaussRational) -> PolyFunc {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    fn horner(coeffs: impl DoubleEndedIterator<Item = Complex64>, x: f64) -> Complex64 {
        coeffs.rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        Self::horner(self.coeffs.iter().map(GaussRational::to_complex64), x)
    }

    /// `t^d p(1/t)`: the polynomial with reversed coefficients.
    pub fn eval_reversed(&self, t: f64) -> Complex64 {
        Self::horner(self.coeffs.iter().rev().map(GaussRational::to_complex64), t)
    }
}

/// `(S f)(x) = f'(x)`, exact.
pub fn apply_s(f: &PolyFunc) -> PolyFunc {
    PolyFunc::new(
        f.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale_int(k as i64))
            .collect(),
    )
}

/// `(T f)(x) = x f(x)`, exact.
pub fn apply_t(f: &PolyFunc) -> PolyFunc {
    if f.is_zero() {
        return PolyFunc::zero();
    }
    let mut c = Vec::with_capacity(f.coeffs.len() + 1);
    c.push(GaussRational::zero());
    c.extend(f.coeffs.iter().cloned());
    PolyFunc::new(c)
}

impl fmt::Display for PolyFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c} x")?,
                _ => write!(f, "{c} x^{k}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    RationalAlpha { alpha: f64 },
    Gaussian,
}

impl Weight {
    /// `(1 + x^4)^(-alpha)`, defined for `alpha > 3/4`.
    pub fn rational(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.75 {
            return Err(Error::Domain {
                name: "alpha",
                value: alpha,
                reason: "rational weight needs alpha > 3/4",
            });
        }
        Ok(Weight::RationalAlpha { alpha })
    }

    /// `exp(-x^2 / 2)`.
    pub fn gaussian() -> Self {
        Weight::Gaussian
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        match *self {
            Weight::RationalAlpha { alpha } => (1.0 + x.powi(4)).powf(-alpha),
            Weight::Gaussian => (-0.5 * x * x).exp(),
        }
    }

    /// `w'(x) / w(x)`.
    pub fn log_derivative(&self, x: f64) -> f64 {
        match *self {
            Weight::RationalAlpha { alpha } => -4.0 * alpha * x.powi(3) / (1.0 + x.powi(4)),
            Weight::Gaussian => -x,
        }
    }

    /// Tail decay power `4 alpha`; `None` when every moment is finite.
    pub fn decay_exponent(&self) -> Option<f64> {
        match *self {
            Weight::RationalAlpha { alpha } => Some(4.0 * alpha),
            Weight::Gaussian => None,
        }
    }

    /// Whether `|x|^p w(x)` is integrable.
    pub fn integrable_power(&self, p: i64) -> bool {
        match self.decay_exponent() {
            Some(d) => (p as f64) < d - 1.0,
            None => true,
        }
    }
}

/// A function that can be paired against a weight by quadrature.
pub trait WeightedFn {
    fn eval(&self, x: f64) -> Complex64;
    /// Exponent `g` with `f(x) = O(|x|^g)`; `None` for the zero function.
    fn growth(&self) -> Option<i64>;
    /// `t^g f(1/t)` for `0 < |t| <= 1`, continuous at `t = 0`.
    fn eval_tail(&self, t: f64) -> Complex64;
}

impl WeightedFn for PolyFunc {
    fn eval(&self, x: f64) -> Complex64 {
        PolyFunc::eval(self, x)
    }

    fn growth(&self) -> Option<i64> {
        self.degree().map(|d| d as i64)
    }

    fn eval_tail(&self, t: f64) -> Complex64 {
        self.eval_reversed(t)
    }
}

/// `h = -g' - g w'/w`, the action of the adjoint of `d/dx` on `g`.
#[derive(Clone, Debug)]
pub struct SdaggerFn {
    g: PolyFunc,
    dg: PolyFunc,
    weight: Weight,
}

pub fn sdagger_pair(g: &PolyFunc, w: &Weight) -> SdaggerFn {
    SdaggerFn {
        g: g.clone(),
        dg: apply_s(g),
        weight: *w,
    }
}

impl SdaggerFn {
    /// For the Gaussian weight `h` is the polynomial `x g - g'`.
    pub fn as_polynomial(&self) -> Option<PolyFunc> {
        match self.weight {
            Weight::Gaussian => Some(apply_t(&self.g).sub(&self.dg)),
            Weight::RationalAlpha { .. } => None,
        }
    }
}

impl WeightedFn for SdaggerFn {
    fn eval(&self, x: f64) -> Complex64 {
        -self.dg.eval(x) - self.g.eval(x) * self.weight.log_derivative(x)
    }

    fn growth(&self) -> Option<i64> {
        let d = self.g.degree()? as i64;
        Some(match self.weight {
            Weight::RationalAlpha { .. } => d - 1,
            Weight::Gaussian => d + 1,
        })
    }

    fn eval_tail(&self, t: f64) -> Complex64 {
        match self.weight {
            // t^(d-1) h(1/t) = -rev(g')(t) + 4 alpha rev(g)(t) / (1 + t^4)
            Weight::RationalAlpha { alpha } => {
                -self.dg.eval_reversed(t) + self.g.eval_reversed(t) * (4.0 * alpha / (1.0 + t.powi(4)))
            }
            Weight::Gaussian => self.as_polynomial().map(|p| p.eval_reversed(t)).unwrap_or_default(),
        }
    }
}

/// `int f(x) conj(g(x)) w(x) dx` over the real line.
pub fn integrate_pair(f: &dyn WeightedFn, g: &dyn WeightedFn, w: &Weight) -> Result<Complex64> {
    let (Some(gf), Some(gg)) = (f.growth(), g.growth()) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    match *w {
        Weight::Gaussian => Ok(quadrature::gauss_hermite(|x| f.eval(x) * g.eval(x).conj())),
        Weight::RationalAlpha { alpha } => {
            let p = gf + gg;
            if !w.integrable_power(p) {
                return Err(Error::NotAdmissible {
                    degree: p.max(0) as usize,
                    decay: 4.0 * alpha,
                });
            }
            let head = quadrature::tanh_sinh(|x| {
                (f.eval(x) * g.eval(x).conj() + f.eval(-x) * g.eval(-x).conj()) * w.evaluate(x)
            });
            let sign = if p.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let tail = quadrature::singular_at_zero(4.0 * alpha - 2.0 - p as f64, |t| {
                let r = f.eval_tail(t) * g.eval_tail(t).conj() + f.eval_tail(-t) * g.eval_tail(-t).conj() * sign;
                r * (1.0 + t.powi(4)).powf(-alpha)
            });
            Ok(head + tail)
        }
    }
}

/// A moment value or the divergence marker.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentValue {
    Finite(f64),
    Divergent,
}

impl MomentValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            MomentValue::Finite(v) => Some(v),
            MomentValue::Divergent => None,
        }
    }
}

/// `mu_k = int x^k w dx`. Odd moments are `0` when `|x|^k w` is integrable
/// and divergent otherwise.
pub fn moment(w: &Weight, k: usize) -> MomentValue {
    if !w.integrable_power(k as i64) {
        return MomentValue::Divergent;
    }
    if k % 2 == 1 {
        return MomentValue::Finite(0.0);
    }
    let v = integrate_pair(&PolyFunc::monomial(k), &PolyFunc::from_ints(&[1]), w).expect("integrability checked above");
    MomentValue::Finite(v.re)
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentTable {
    pub weight: Weight,
    values: BTreeMap<usize, MomentValue>,
}

impl MomentTable {
    pub fn new(weight: Weight, k_max: usize) -> Self {
        let values = (0..=k_max).map(|k| (k, moment(&weight, k))).collect();
        Self { weight, values }
    }

    pub fn get(&mut self, k: usize) -> MomentValue {
        let w = self.weight;
        *self.values.entry(k).or_insert_with(|| moment(&w, k))
    }

    pub fn values(&self) -> &BTreeMap<usize, MomentValue> {
        &self.values
    }
}

/// `<f, g> = sum_{i,j} f_i conj(g_j) mu_{i+j}`.
pub fn inner_product(f: &PolyFunc, g: &PolyFunc, w: &Weight) -> Result<Complex64> {
    let mut table = MomentTable::new(*w, 0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, fi) in f.coeffs().iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        for (j, gj) in g.coeffs().iter().enumerate() {
            if gj.is_zero() {
                continue;
            }
            let mu = table.get(i + j).finite().ok_or(Error::NotInL2 { power: i + j })?;
            acc += fi.to_complex64() * gj.to_complex64().conj() * mu;
        }
    }
    Ok(acc)
}

/// `|<T f, S+ g> - <S f, T+ g> - <f, g>|` with `T+ = T`, all by quadrature.
pub fn weak_cr_check(w: &Weight, f: &PolyFunc, g: &PolyFunc) -> Result<f64> {
    let tf = apply_t(f);
    let sf = apply_s(f);
    let tg = apply_t(g);
    let sdg = sdagger_pair(g, w);
    let a = integrate_pair(&tf, &sdg, w)?;
    let b = integrate_pair(&sf, &tg, w)?;
    let c = integrate_pair(f, g, w)?;
    Ok((a - b - c).norm())
}

/// Whether `x^n` lies in `D = D(q) ∩ D(p)`: `x^n`, `x^(n+1)` and `n x^(n-1)`
/// are all square integrable.
pub fn monomial_in_domain(w: &Weight, n: usize) -> bool {
    let ok = |k: usize| w.integrable_power(2 * k as i64);
    ok(n) && ok(n + 1) && (n == 0 || ok(n - 1))
}

/// Domain condition of `T^r S^k` on the monomial family: `x^(r+k)` in `D`.
pub fn monomial_membership(w: Weight) -> impl Fn(usize, usize) -> bool {
    move |r, k| monomial_in_domain(&w, r + k)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderLength {
    pub alpha: f64,
    pub n_max: usize,
    #[serde(rename = "dim_N0")]
    pub dim_n0: usize,
    /// `2 alpha - 3/2`; every admissible `n` lies strictly below it.
    pub strict_bound: f64,
    /// `floor(2 alpha - 3/2) + 1`.
    pub closed_form_dim: usize,
    pub discrepancy: bool,
}

/// Length of the ladder `x^n = T^n u_0` inside `D` for `w_alpha`.
pub fn ladder_length(alpha: f64) -> Result<LadderLength> {
    let w = Weight::rational(alpha)?;
    let mut n_max = 0;
    while monomial_in_domain(&w, n_max + 1) {
        n_max += 1;
    }
    let strict_bound = 2.0 * alpha - 1.5;
    let closed_form_dim = strict_bound.floor() as usize + 1;
    let dim_n0 = n_max + 1;
    Ok(LadderLength {
        alpha,
        n_max,
        dim_n0,
        strict_bound,
        closed_form_dim,
        discrepancy: closed_form_dim != dim_n0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaussianEigenCheck {
    pub k: usize,
    pub exact: bool,
    pub symbolic_residual: f64,
    pub quadrature_residual: f64,
}

/// `T S u_k = k u_k` for `u_k = x^k`: exactly on coefficients, then against
/// `x^j`, `j <= k + 2`, by Gauss-Hermite quadrature, relative to
/// `||T S u_k|| ||x^j||`.
pub fn gaussian_eigen_check(k: usize) -> GaussianEigenCheck {
    let u = PolyFunc::monomial(k);
    let tsu = apply_t(&apply_s(&u));
    let diff = tsu.sub(&u.scale(&GaussRational::from_int(k as i64)));
    let symbolic_residual = diff
        .coeffs()
        .iter()
        .map(|c| c.to_complex64().norm())
        .fold(0.0, f64::max);
    let w = Weight::gaussian();
    let mut quadrature_residual = 0.0f64;
    for j in 0..=k + 2 {
        let xj = PolyFunc::monomial(j);
        let lhs = integrate_pair(&tsu, &xj, &w).expect("gaussian pairings converge");
        let rhs = integrate_pair(&u, &xj, &w).expect("gaussian pairings converge") * k as f64;
        let norms = integrate_pair(&tsu, &tsu, &w)
            .expect("gaussian pairings converge")
            .norm()
            * integrate_pair(&xj, &xj, &w).expect("gaussian pairings converge").norm();
        let scale = norms.sqrt().max(1.0);
        quadrature_residual = quadrature_residual.max((lhs - rhs).norm() / scale);
    }
    GaussianEigenCheck {
        k,
        exact: diff.is_zero(),
        symbolic_residual,
        quadrature_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> PolyFunc {
        PolyFunc::from_ints(c)
    }

    #[test]
    fn derivative_and_shift() {
        assert_eq!(apply_s(&PolyFunc::monomial(3)), poly(&[0, 0, 3]));
        assert_eq!(apply_t(&PolyFunc::monomial(3)), PolyFunc::monomial(4));
        let f = poly(&[2, 0, 5]);
        assert_eq!(apply_s(&apply_t(&f)).sub(&apply_t(&apply_s(&f))), f);
    }

    #[test]
    fn canonical_trailing_coefficient() {
        assert_eq!(poly(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(poly(&[0, 0]).is_zero());
    }

    #[test]
    fn rational_weight_domain() {
        assert!(Weight::rational(0.75).is_err());
        assert!(Weight::rational(0.76).is_ok());
    }

    #[test]
    fn power_counting() {
        let w = Weight::rational(2.0).unwrap();
        assert_eq!(moment(&w, 8), MomentValue::Divergent);
        assert!(moment(&w, 6).finite().is_some());
        assert_eq!(moment(&w, 3), MomentValue::Finite(0.0));
        let w1 = Weight::rational(1.0).unwrap();
        let x3 = PolyFunc::monomial(3);
        assert_eq!(inner_product(&x3, &x3, &w1), Err(Error::NotInL2 { power: 6 }));
    }

    #[test]
    fn sdagger_examples() {
        let one = poly(&[1]);
        let h = sdagger_pair(&one, &Weight::gaussian());
        assert!((h.eval(1.7) - Complex64::new(1.7, 0.0)).norm() < 1e-15);
        let h = sdagger_pair(&one, &Weight::rational(1.5).unwrap());
        let x: f64 = 0.9;
        let want = 6.0 * x.powi(3) / (1.0 + x.powi(4));
        assert!((h.eval(x).re - want).abs() < 1e-15);
    }

    #[test]
    fn sdagger_tail_form_matches_values() {
        let g = poly(&[1, -2, 3]);
        let h = sdagger_pair(&g, &Weight::rational(2.0).unwrap());
        for &t in &[0.5, -0.25, 0.9] {
            let direct = h.eval(1.0 / t) * t.powi(h.growth().unwrap() as i32);
            assert!((direct - h.eval_tail(t)).norm() < 1e-12);
        }
    }

    #[test]
    fn ladder_lengths() {
        let l = ladder_length(2.0).unwrap();
        assert_eq!((l.n_max, l.dim_n0, l.closed_form_dim, l.discrepancy), (2, 3, 3, false));
        let l = ladder_length(0.8).unwrap();
        assert_eq!((l.n_max, l.dim_n0), (0, 1));
        let l = ladder_length(1.75).unwrap();
        assert_eq!((l.n_max, l.dim_n0, l.closed_form_dim, l.discrepancy), (1, 2, 3, true));
        assert!(ladder_length(0.75).is_err());
    }

    #[test]
    fn gaussian_eigen_small() {
        let c = gaussian_eigen_check(0);
        assert!(c.exact && c.symbolic_residual == 0.0);
        let c = gaussian_eigen_check(3);
        assert!(c.exact);
        assert!(gaussian_eigen_check(4).quadrature_residual < 1e-10);
    }

    #[test]
    fn weak_cr_examples() {
        let w2 = Weight::rational(2.0).unwrap();
        assert!(weak_cr_check(&w2, &poly(&[1]), &poly(&[1])).unwrap() < 1e-8);
        let wg = Weight::gaussian();
        assert!(weak_cr_check(&wg, &poly(&[0, 1]), &poly(&[0, 0, 1])).unwrap() < 1e-10);
        let w08 = Weight::rational(0.8).unwrap();
        assert!(weak_cr_check(&w08, &poly(&[1]), &poly(&[1])).unwrap() < 1e-8);
    }

    #[test]
    fn weak_cr_rejects_divergent_pairings() {
        let w = Weight::rational(1.0).unwrap();
        let err = weak_cr_check(&w, &PolyFunc::monomial(2), &PolyFunc::monomial(2)).unwrap_err();
        assert!(matches!(err, Error::NotAdmissible { .. }));
    }
}
