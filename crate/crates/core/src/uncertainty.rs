//! Uncertainties `(Delta A)_xi(z) = ||(A - z) xi||` and the two uncertainty
//! relations for a pair with `[S, T] = 1`:
//!
//! ```text
//! UR1:  |<xi, C xi>| <= 2 max(dS, dS+) max(dT, dT+)
//! UR2:  |Re <xi, C xi>| <= (dS + dS+)(dT + dT+)
//! ```
//!
//! with `C = 1` by default. UR2 assumes `[S+, T] = [S, T+]`; the defect of
//! that assumption is reported alongside the result.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock_rep::{self, check_dim, coherent_state, OperatorPair, StateVector, TruncatedOperator};
use crate::linalg::{self, CMatrix, CVector};
use crate::ncpoly::{fock_eval, NCPoly};

pub const SATURATION_TOL: f64 = 1e-6;
pub const NORM_TOL: f64 = 1e-10;
pub const CROSS_CONDITION_TOL: f64 = 1e-8;

fn pair_of(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn check_normalized(xi: &StateVector) -> Result<()> {
    let norm = xi.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

fn delta_matrix(a: &CMatrix, v: &CVector, z: Complex64) -> f64 {
    (a * v - v * z).norm()
}

/// `||(A - z) xi||` for a unit vector `xi`.
pub fn delta(a: &TruncatedOperator, xi: &StateVector, z: Complex64) -> Result<f64> {
    check_dim(a.dim(), xi.dim())?;
    check_normalized(xi)?;
    Ok(delta_matrix(a.matrix(), xi.components(), z))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeltaReport {
    pub d_s: f64,
    pub d_sd: f64,
    pub d_t: f64,
    pub d_td: f64,
    pub z: [f64; 2],
    pub w: [f64; 2],
    pub state_norm: f64,
}

impl DeltaReport {
    pub fn max_abs_diff(&self, other: &DeltaReport) -> f64 {
        [
            self.d_s - other.d_s,
            self.d_sd - other.d_sd,
            self.d_t - other.d_t,
            self.d_td - other.d_td,
        ]
        .iter()
        .map(|d| d.abs())
        .fold(0.0, f64::max)
    }
}

/// Centers `z` for `S` (and `conj z` for `S+`), `w` for `T` (and `conj w`
/// for `T+`). `None` selects the expectation value.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Centers {
    pub z: Option<Complex64>,
    pub w: Option<Complex64>,
}

fn deltas_of(s: &CMatrix, t: &CMatrix, v: &CVector, centers: Centers) -> DeltaReport {
    let z = centers.z.unwrap_or_else(|| linalg::expectation(s, v));
    let w = centers.w.unwrap_or_else(|| linalg::expectation(t, v));
    DeltaReport {
        d_s: delta_matrix(s, v, z),
        d_sd: delta_matrix(&s.adjoint(), v, z.conj()),
        d_t: delta_matrix(t, v, w),
        d_td: delta_matrix(&t.adjoint(), v, w.conj()),
        z: pair_of(z),
        w: pair_of(w),
        state_norm: v.norm(),
    }
}

/// The four uncertainties of a pair in the unit vector `xi`.
pub fn deltas(pair: &OperatorPair, xi: &StateVector, centers: Centers) -> Result<DeltaReport> {
    check_dim(pair.dim(), xi.dim())?;
    check_normalized(xi)?;
    Ok(deltas_of(pair.s.matrix(), pair.t.matrix(), xi.components(), centers))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum URKind {
    UR1,
    UR2,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct URResult {
    pub kind: URKind,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; nonnegative when the inequality holds.
    pub gap: f64,
    pub saturated: bool,
    pub tolerance: f64,
    pub deltas: DeltaReport,
    /// `<xi, C xi>`.
    pub c_expectation: [f64; 2],
    pub cross_condition_defect: Option<f64>,
    pub hypothesis_violated: Option<bool>,
}

impl URResult {
    fn new(kind: URKind, lhs: f64, rhs: f64, deltas: DeltaReport, c: Complex64) -> Self {
        let gap = rhs - lhs;
        Self {
            kind,
            lhs,
            rhs,
            gap,
            saturated: gap.abs() <= SATURATION_TOL,
            tolerance: SATURATION_TOL,
            deltas,
            c_expectation: pair_of(c),
            cross_condition_defect: None,
            hypothesis_violated: None,
        }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self.saturated = self.gap.abs() <= tol;
        self
    }
}

fn ur1_from(d: DeltaReport, c: Complex64) -> URResult {
    let rhs = 2.0 * d.d_s.max(d.d_sd) * d.d_t.max(d.d_td);
    URResult::new(URKind::UR1, c.norm(), rhs, d, c)
}

fn ur2_from(d: DeltaReport, c: Complex64) -> URResult {
    let rhs = (d.d_s + d.d_sd) * (d.d_t + d.d_td);
    URResult::new(URKind::UR2, c.re.abs(), rhs, d, c)
}

/// `<xi, C xi>` with `C = 1` when absent.
fn c_expectation(pair: &OperatorPair, xi: &StateVector, c: Option<&NCPoly>) -> Result<Complex64> {
    match c {
        None => Ok(xi.inner(xi)),
        Some(p) => {
            let m = fock_eval(p, pair)?;
            Ok(linalg::inner(xi.components(), &(m.matrix() * xi.components())))
        }
    }
}

pub fn ur1_check(pair: &OperatorPair, xi: &StateVector, centers: Centers, c: Option<&NCPoly>) -> Result<URResult> {
    let d = deltas(pair, xi, centers)?;
    Ok(ur1_from(d, c_expectation(pair, xi, c)?))
}

/// Max-abs entry of `[S+, T] - [S, T+]` on the leading `dim - 2` block.
pub fn cross_condition_defect(pair: &OperatorPair) -> f64 {
    let s = pair.s.matrix();
    let t = pair.t.matrix();
    let sd = s.adjoint();
    let td = t.adjoint();
    let m = (&sd * t - t * &sd) - (s * &td - &td * s);
    let band = pair.dim().saturating_sub(2);
    linalg::max_abs_block(&m, band, band)
}

/// UR2 at expectation centers. `alpha_s`, `alpha_t` only scale intermediate
/// operators of the derivation and do not change the result.
pub fn ur2_check(
    pair: &OperatorPair,
    xi: &StateVector,
    alpha_s: f64,
    alpha_t: f64,
    c: Option<&NCPoly>,
) -> Result<URResult> {
    if !alpha_s.is_finite() || !alpha_t.is_finite() {
        return Err(Error::Domain {
            name: "alpha",
            value: if alpha_s.is_finite() { alpha_t } else { alpha_s },
            reason: "scaffolding constants must be finite",
        });
    }
    let d = deltas(pair, xi, Centers::default())?;
    let mut r = ur2_from(d, c_expectation(pair, xi, c)?);
    let defect = cross_condition_defect(pair);
    r.cross_condition_defect = Some(defect);
    r.hypothesis_violated = Some(defect > CROSS_CONDITION_TOL);
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SwansonMoments {
    /// `<a+ a> - |<a>|^2`.
    pub c_phi: f64,
    /// `Im(<a+^2> - <a+>^2)`.
    pub e_phi: f64,
}

/// `C_phi` and `E_phi` with `<X> = <X phi, phi>`.
pub fn swanson_moments(phi: &StateVector) -> Result<SwansonMoments> {
    check_normalized(phi)?;
    let n = phi.dim();
    let a = fock_rep::lowering(n)?.into_matrix();
    let ad = a.adjoint();
    let v = phi.components();
    let ex = |m: &CMatrix| linalg::expectation(m, v);
    let mean_a = ex(&a);
    let mean_ad = ex(&ad);
    let c_phi = ex(&(&ad * &a)).re - mean_a.norm_sqr();
    let e_phi = (ex(&(&ad * &ad)) - mean_ad * mean_ad).im;
    Ok(SwansonMoments { c_phi, e_phi })
}

#[derive(Clone, Debug, Serialize)]
pub struct SwansonReport {
    pub theta: f64,
    pub moments: SwansonMoments,
    pub closed_form: DeltaReport,
    pub matrix: DeltaReport,
    pub max_discrepancy: f64,
}

/// Squared uncertainties of the Swanson pair from `C_phi`, `E_phi`:
///
/// ```text
/// dS^2  = C + sin^2 - sin(2 theta) E      dT^2  = C + cos^2 + sin(2 theta) E
/// dS+^2 = C + cos^2 - sin(2 theta) E      dT+^2 = C + sin^2 + sin(2 theta) E
/// ```
pub fn swanson_closed_form(theta: f64, phi: &StateVector) -> Result<SwansonReport> {
    let m = swanson_moments(phi)?;
    let (s2, c2) = (theta.sin().powi(2), theta.cos().powi(2));
    let x = (2.0 * theta).sin() * m.e_phi;
    let root = |what: &'static str, v: f64| -> Result<f64> {
        if v < -1e-12 {
            return Err(Error::Inconsistent { what, value: v });
        }
        Ok(v.max(0.0).sqrt())
    };
    let pair = fock_rep::swanson_pair(theta, phi.dim())?;
    let matrix = deltas(&pair, phi, Centers::default())?;
    let closed_form = DeltaReport {
        d_s: root("dS^2", m.c_phi + s2 - x)?,
        d_sd: root("dS+^2", m.c_phi + c2 - x)?,
        d_t: root("dT^2", m.c_phi + c2 + x)?,
        d_td: root("dT+^2", m.c_phi + s2 + x)?,
        ..matrix
    };
    Ok(SwansonReport {
        theta,
        moments: m,
        max_discrepancy: closed_form.max_abs_diff(&matrix),
        closed_form,
        matrix,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Matrix2x2Report {
    pub s: f64,
    pub q: f64,
    pub closed_form: DeltaReport,
    pub matrix: DeltaReport,
    pub max_discrepancy: f64,
    pub ur1: URResult,
    pub ur2: URResult,
}

/// `S = [[0, s], [0, 0]]`, `T = [[0, 0], [q, 0]]` in the state `(phi1, phi2)`,
/// with `C = [S, T] = diag(s q, -s q)` in both relations.
pub fn matrix2x2_report(s: f64, q: f64, phi1: Complex64, phi2: Complex64) -> Result<Matrix2x2Report> {
    let norm = (phi1.norm_sqr() + phi2.norm_sqr()).sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let zero = Complex64::new(0.0, 0.0);
    let sm = CMatrix::from_row_slice(2, 2, &[zero, Complex64::new(s, 0.0), zero, zero]);
    let tm = CMatrix::from_row_slice(2, 2, &[zero, zero, Complex64::new(q, 0.0), zero]);
    let v = CVector::from_vec(vec![phi1, phi2]);
    let matrix = deltas_of(&sm, &tm, &v, Centers::default());
    let (p1, p2) = (phi1.norm_sqr(), phi2.norm_sqr());
    let closed_form = DeltaReport {
        d_s: s.abs() * p2,
        d_sd: s.abs() * p1,
        d_t: q.abs() * p1,
        d_td: q.abs() * p2,
        ..matrix
    };
    let comm = &sm * &tm - &tm * &sm;
    let c = linalg::inner(&v, &(comm * &v));
    Ok(Matrix2x2Report {
        s,
        q,
        max_discrepancy: closed_form.max_abs_diff(&matrix),
        ur1: ur1_from(matrix, c),
        ur2: ur2_from(matrix, c),
        closed_form,
        matrix,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ScanModel {
    Swanson {
        theta: f64,
        dim: usize,
    },
    Matrix2x2 {
        s: f64,
        q: f64,
    },
    /// The Swanson pair at `theta = pi/4`.
    BosonRotation {
        dim: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "grid", rename_all = "snake_case")]
pub enum GridPart {
    /// Coherent states `Phi(x + i y)` for `x, y` on `n_re x n_im` evenly
    /// spaced points of `[-1/sqrt 2, 1/sqrt 2]`, so `|z| <= 1`.
    Coherent { n_re: usize, n_im: usize },
    /// Fock states `e_0 .. e_{k-1}`.
    Fock { k: usize },
    /// `phi = (sqrt t, sqrt(1 - t))` for `n` evenly spaced `t` in `[0, 1]`.
    Circle { n: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub label: String,
    pub params: Vec<f64>,
    pub ur1_gap: f64,
    pub ur1_saturated: bool,
    pub ur2_gap: f64,
    pub ur2_saturated: bool,
    pub c_phi: Option<f64>,
    pub e_phi: Option<f64>,
    /// `sqrt((C + 1/2)^2 - E^2)`, when the radicand is nonnegative.
    pub reading_a: Option<f64>,
    /// `sqrt((C + 1/2) - E^2)`, when the radicand is nonnegative.
    pub reading_b: Option<f64>,
    /// Largest difference between closed-form and matrix uncertainties.
    pub closed_form_discrepancy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSummary {
    pub rows: usize,
    pub min_ur1_gap: f64,
    pub min_ur2_gap: f64,
    pub ur1_saturated: usize,
    pub ur2_saturated: usize,
    pub min_reading_a: Option<f64>,
    pub min_reading_b: Option<f64>,
    pub max_closed_form_discrepancy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanTable {
    pub model: ScanModel,
    pub tolerance: f64,
    pub grid: Vec<GridPart>,
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn readings(m: &SwansonMoments) -> (Option<f64>, Option<f64>) {
    let c = m.c_phi + 0.5;
    let a = c * c - m.e_phi * m.e_phi;
    let b = c - m.e_phi * m.e_phi;
    ((a >= 0.0).then(|| a.sqrt()), (b >= 0.0).then(|| b.sqrt()))
}

fn swanson_row(
    pair: &OperatorPair,
    theta: f64,
    tol: f64,
    label: String,
    params: Vec<f64>,
    phi: &StateVector,
) -> Result<ScanRow> {
    let u1 = ur1_check(pair, phi, Centers::default(), None)?.with_tolerance(tol);
    let u2 = ur2_check(pair, phi, 1.0, 1.0, None)?.with_tolerance(tol);
    let closed = swanson_closed_form(theta, phi)?;
    let m = closed.moments;
    let (reading_a, reading_b) = readings(&m);
    Ok(ScanRow {
        label,
        params,
        ur1_gap: u1.gap,
        ur1_saturated: u1.saturated,
        ur2_gap: u2.gap,
        ur2_saturated: u2.saturated,
        c_phi: Some(m.c_phi),
        e_phi: Some(m.e_phi),
        reading_a,
        reading_b,
        closed_form_discrepancy: closed.max_discrepancy,
    })
}

fn swanson_rows(theta: f64, dim: usize, grid: &[GridPart], tol: f64) -> Result<Vec<ScanRow>> {
    let pair = fock_rep::swanson_pair(theta, dim)?;
    let mut rows = Vec::new();
    for part in grid {
        match *part {
            GridPart::Coherent { n_re, n_im } => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                for &x in &linspace(-r, r, n_re) {
                    for &y in &linspace(-r, r, n_im) {
                        let phi = coherent_state(Complex64::new(x, y), dim)?;
                        rows.push(swanson_row(
                            &pair,
                            theta,
                            tol,
                            format!("coherent({x:.6},{y:.6})"),
                            vec![x, y],
                            &phi,
                        )?);
                    }
                }
            }
            GridPart::Fock { k } => {
                for j in 0..k {
                    let phi = StateVector::basis(dim, j)?;
                    rows.push(swanson_row(
                        &pair,
                        theta,
                        tol,
                        format!("fock({j})"),
                        vec![j as f64],
                        &phi,
                    )?);
                }
            }
            GridPart::Circle { n } => {
                for &t in &linspace(0.0, 1.0, n) {
                    let mut v = CVector::zeros(dim);
                    v[0] = Complex64::new(t.sqrt(), 0.0);
                    v[1] = Complex64::new((1.0 - t).sqrt(), 0.0);
                    let phi = StateVector::new(v)?;
                    rows.push(swanson_row(
                        &pair,
                        theta,
                        tol,
                        format!("circle({t:.6})"),
                        vec![t],
                        &phi,
                    )?);
                }
            }
        }
    }
    Ok(rows)
}

fn matrix2x2_rows(s: f64, q: f64, grid: &[GridPart], tol: f64) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    for part in grid {
        let states: Vec<(String, Vec<f64>, Complex64, Complex64)> = match *part {
            GridPart::Circle { n } => linspace(0.0, 1.0, n)
                .into_iter()
                .map(|t| {
                    (
                        format!("circle({t:.6})"),
                        vec![t],
                        Complex64::new(t.sqrt(), 0.0),
                        Complex64::new((1.0 - t).sqrt(), 0.0),
                    )
                })
                .collect(),
            GridPart::Fock { k } => (0..k.min(2))
                .map(|j| {
                    let (a, b) = if j == 0 { (1.0, 0.0) } else { (0.0, 1.0) };
                    (
                        format!("fock({j})"),
                        vec![j as f64],
                        Complex64::new(a, 0.0),
                        Complex64::new(b, 0.0),
                    )
                })
                .collect(),
            GridPart::Coherent { .. } => {
                return Err(Error::Domain {
                    name: "grid",
                    value: 0.0,
                    reason: "coherent grids need a Fock-space model",
                })
            }
        };
        for (label, params, p1, p2) in states {
            let r = matrix2x2_report(s, q, p1, p2)?;
            let (u1, u2) = (r.ur1.with_tolerance(tol), r.ur2.with_tolerance(tol));
            rows.push(ScanRow {
                label,
                params,
                ur1_gap: u1.gap,
                ur1_saturated: u1.saturated,
                ur2_gap: u2.gap,
                ur2_saturated: u2.saturated,
                c_phi: None,
                e_phi: None,
                reading_a: None,
                reading_b: None,
                closed_form_discrepancy: r.max_discrepancy,
            });
        }
    }
    Ok(rows)
}

fn min_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(f64::INFINITY, f64::min)
}

fn min_opt(it: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    it.flatten().reduce(f64::min)
}

/// Evaluates both relations over a grid of states.
pub fn saturation_scan(model: ScanModel, grid: &[GridPart]) -> Result<ScanTable> {
    saturation_scan_with_tol(model, grid, SATURATION_TOL)
}

pub fn saturation_scan_with_tol(model: ScanModel, grid: &[GridPart], tol: f64) -> Result<ScanTable> {
    let rows = match model {
        ScanModel::Swanson { theta, dim } => swanson_rows(theta, dim, grid, tol)?,
        ScanModel::BosonRotation { dim } => swanson_rows(std::f64::consts::FRAC_PI_4, dim, grid, tol)?,
        ScanModel::Matrix2x2 { s, q } => matrix2x2_rows(s, q, grid, tol)?,
    };
    let summary = ScanSummary {
        rows: rows.len(),
        min_ur1_gap: min_of(rows.iter().map(|r| r.ur1_gap)),
        min_ur2_gap: min_of(rows.iter().map(|r| r.ur2_gap)),
        ur1_saturated: rows.iter().filter(|r| r.ur1_saturated).count(),
        ur2_saturated: rows.iter().filter(|r| r.ur2_saturated).count(),
        min_reading_a: min_opt(rows.iter().map(|r| r.reading_a)),
        min_reading_b: min_opt(rows.iter().map(|r| r.reading_b)),
        max_closed_form_discrepancy: rows.iter().map(|r| r.closed_form_discrepancy).fold(0.0, f64::max),
    };
    Ok(ScanTable {
        model,
        tolerance: tol,
        grid: grid.to_vec(),
        rows,
        summary,
    })
}
