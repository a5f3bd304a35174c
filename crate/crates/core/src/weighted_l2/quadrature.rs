//! Quadrature rules for integrals against the two even weights.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussHermite;
use num_complex::Complex64;

const TS_MAX_LEVEL: u32 = 12;
const TS_SPAN: f64 = 6.5;
const TS_REL_TOL: f64 = 1e-14;

fn ts_node(s: f64) -> Option<(f64, f64)> {
    // t = 1 / (1 + e), e = exp(-pi sinh s); both t and 1 - t stay accurate.
    let e = (-std::f64::consts::PI * s.sinh()).exp();
    if !e.is_finite() {
        return None;
    }
    let t = 1.0 / (1.0 + e);
    let one_minus_t = e / (1.0 + e);
    if t == 0.0 || one_minus_t == 0.0 {
        return None;
    }
    let dt = std::f64::consts::PI * s.cosh() * t * one_minus_t;
    Some((t, dt))
}

/// Tanh-sinh quadrature of `f` over `[0, 1]`, refined by halving the step
/// until successive levels agree to about `1e-14`.
pub fn tanh_sinh<F: Fn(f64) -> Complex64>(f: F) -> Complex64 {
    let mut h = 0.5f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut k = -((TS_SPAN / h) as i64);
    while (k as f64) * h <= TS_SPAN {
        if let Some((t, dt)) = ts_node(k as f64 * h) {
            sum += f(t) * dt;
        }
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 1..TS_MAX_LEVEL {
        h /= 2.0;
        let mut k = -((TS_SPAN / h) as i64) | 1;
        while (k as f64) * h <= TS_SPAN {
            if let Some((t, dt)) = ts_node(k as f64 * h) {
                sum += f(t) * dt;
            }
            k += 2;
        }
        let next = sum * h;
        let change = (next - estimate).norm();
        estimate = next;
        if change <= TS_REL_TOL * estimate.norm() || change < 1e-300 {
            break;
        }
    }
    estimate
}

/// `int_0^1 t^p g(t) dt` for `p > -1` and smooth `g`, with the endpoint
/// term `g(0) / (p + 1)` integrated exactly.
pub fn singular_at_zero<G: Fn(f64) -> Complex64>(p: f64, g: G) -> Complex64 {
    let g0 = g(0.0);
    let rest = tanh_sinh(|t| (g(t) - g0) * t.powf(p));
    g0 / (p + 1.0) + rest
}

const GH_NODES: usize = 40;

fn hermite_rule() -> &'static GaussHermite {
    static RULE: OnceLock<GaussHermite> = OnceLock::new();
    RULE.get_or_init(|| GaussHermite::new(NonZeroUsize::new(GH_NODES).expect("nonzero")))
}

/// `int f(x) exp(-x^2 / 2) dx` over the real line; exact for polynomials of
/// degree below `2 * 40`, via `x = sqrt(2) y`.
pub fn gauss_hermite<F: Fn(f64) -> Complex64>(f: F) -> Complex64 {
    let r2 = std::f64::consts::SQRT_2;
    hermite_rule()
        .as_node_weight_pairs()
        .iter()
        .map(|&(y, w)| f(r2 * y) * w)
        .sum::<Complex64>()
        * r2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn smooth_integrals() {
        let v = tanh_sinh(|t| re(t.exp()));
        assert!((v.re - (1f64.exp() - 1.0)).abs() < 1e-14);
        let v = tanh_sinh(|t| re(1.0 / (1.0 + t * t)));
        assert!((v.re - std::f64::consts::FRAC_PI_4).abs() < 1e-14);
    }

    #[test]
    fn algebraic_endpoint_singularity() {
        // int_0^1 t^{-0.8} dt = 5
        let v = singular_at_zero(-0.8, |_| re(1.0));
        assert!((v.re - 5.0).abs() < 1e-13);
        // int_0^1 t^{-1/2} / (1 + t) dt = pi / 2
        let v = singular_at_zero(-0.5, |t| re(1.0 / (1.0 + t)));
        assert!((v.re - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn hermite_moments() {
        let s2pi = (2.0 * std::f64::consts::PI).sqrt();
        let mut dfact = 1.0;
        for k in 0..12 {
            if k > 0 {
                dfact *= (2 * k - 1) as f64;
            }
            let v = gauss_hermite(|x| re(x.powi(2 * k)));
            assert!((v.re - s2pi * dfact).abs() < 1e-11 * s2pi * dfact, "k={k}");
        }
    }
}
