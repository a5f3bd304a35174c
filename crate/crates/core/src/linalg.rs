//! Dense complex linear algebra helpers shared by the numerical modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// `<x, y> = sum_i x_i conj(y_i)`: linear in the first slot.
pub fn inner(x: &CVector, y: &CVector) -> Complex64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// Expectation `<A xi, xi> = xi^H A xi`.
pub fn expectation(a: &CMatrix, xi: &CVector) -> Complex64 {
    inner(&(a * xi), xi)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Largest entry modulus over the leading `rows x cols` block.
pub fn max_abs_block(m: &CMatrix, rows: usize, cols: usize) -> f64 {
    let mut best = 0.0f64;
    for j in 0..cols.min(m.ncols()) {
        for i in 0..rows.min(m.nrows()) {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

pub fn max_abs(m: &CMatrix) -> f64 {
    max_abs_block(m, m.nrows(), m.ncols())
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

pub fn one_norm(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

// Pade(13) coefficients b_0..b_13.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with the degree-13 Pade approximant.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 0 {
        return a.clone();
    }
    let norm = one_norm(a);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a * Complex64::new(0.5f64.powi(s), 0.0);
    let b = |k: usize| Complex64::new(PADE13[k], 0.0);
    let eye = identity(n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * b(13) + &a4 * b(11) + &a2 * b(9);
    let u = &scaled * (&a6 * u_inner + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &eye * b(1));
    let v_inner = &a6 * b(12) + &a4 * b(10) + &a2 * b(8);
    let v = &a6 * v_inner + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &eye * b(0);

    let num = &v + &u;
    let den = &v - &u;
    let mut r = den
        .lu()
        .solve(&num)
        .expect("Pade denominator is nonsingular for scaled arguments");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_diagonal() {
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 0)] = Complex64::new(1.0, 0.0);
        a[(1, 1)] = Complex64::new(-2.0, 0.5);
        a[(2, 2)] = Complex64::new(7.0, 0.0);
        let e = expm(&a);
        for k in 0..3 {
            let want = a[(k, k)].exp();
            assert!((e[(k, k)] - want).norm() < 1e-12 * want.norm());
        }
    }

    #[test]
    fn expm_of_rotation_generator() {
        // exp([[0, -t], [t, 0]]) is a rotation by t.
        let t = 2.5;
        let a = CMatrix::from_row_slice(2, 2, &[ZERO, Complex64::new(-t, 0.0), Complex64::new(t, 0.0), ZERO]);
        let e = expm(&a);
        assert!((e[(0, 0)].re - t.cos()).abs() < 1e-13);
        assert!((e[(1, 0)].re - t.sin()).abs() < 1e-13);
    }

    #[test]
    fn inner_is_linear_in_first_slot() {
        let x = CVector::from_vec(vec![I, ONE]);
        let y = CVector::from_vec(vec![ONE, ONE]);
        assert_eq!(inner(&(x.clone() * I), &y), I * inner(&x, &y));
        assert_eq!(inner(&x, &(y.clone() * I)), -I * inner(&x, &y));
    }
}
