//! Double-double complex arithmetic for semigroup products whose defects sit
//! below the f64 round-off floor.
//!
//! Only the action `v -> exp(t A) v` of a sparse operator is needed, so the
//! exponential is summed as a Taylor series on vectors rather than formed as
//! a dense matrix.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DdComplex {
    pub re: TwoFloat,
    pub im: TwoFloat,
}

impl DdComplex {
    pub const ZERO: Self = Self {
        re: TwoFloat::from_f64(0.0),
        im: TwoFloat::from_f64(0.0),
    };

    pub fn from_c64(z: Complex64) -> Self {
        Self {
            re: TwoFloat::from(z.re),
            im: TwoFloat::from(z.im),
        }
    }

    pub fn from_real(x: TwoFloat) -> Self {
        Self {
            re: x,
            im: TwoFloat::from(0.0),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.hi() + self.re.lo(), self.im.hi() + self.im.lo())
    }

    #[inline]
    pub fn scale(self, x: TwoFloat) -> Self {
        Self {
            re: self.re * x,
            im: self.im * x,
        }
    }

    pub fn conj(self) -> Self {
        Self {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn abs_hi(self) -> f64 {
        self.re.hi().hypot(self.im.hi())
    }
}

impl Add for DdComplex {
    type Output = Self;

    #[inline]
    fn add(self, o: Self) -> Self {
        Self {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for DdComplex {
    type Output = Self;

    #[inline]
    fn sub(self, o: Self) -> Self {
        Self {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for DdComplex {
    type Output = Self;

    #[inline]
    fn mul(self, o: Self) -> Self {
        Self {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

/// `e^x` in double-double: Taylor series after halving `x` below 1/8.
pub fn dd_exp(x: TwoFloat) -> TwoFloat {
    let mut halvings = 0;
    let mut r = x;
    while r.hi().abs() > 0.125 {
        r /= 2.0;
        halvings += 1;
    }
    let mut sum = TwoFloat::from(1.0);
    let mut term = TwoFloat::from(1.0);
    for k in 1..40 {
        term = term * r / (k as f64);
        sum += term;
        if term.hi().abs() < 1e-36 * sum.hi().abs() {
            break;
        }
    }
    for _ in 0..halvings {
        sum = sum * sum;
    }
    sum
}

/// Compressed-row copy of a complex matrix, keeping exact nonzeros only.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseDd {
    dim: usize,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<DdComplex>,
}

impl SparseDd {
    pub fn from_dense(m: &CMatrix) -> Self {
        let dim = m.nrows();
        let mut row_start = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for i in 0..dim {
            row_start.push(cols.len());
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                if z.re != 0.0 || z.im != 0.0 {
                    cols.push(j);
                    vals.push(DdComplex::from_c64(z));
                }
            }
        }
        row_start.push(cols.len());
        Self {
            dim,
            row_start,
            cols,
            vals,
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, DdComplex)>) -> Self {
        let mut map: BTreeMap<(usize, usize), DdComplex> = BTreeMap::new();
        for (i, j, v) in triplets {
            let e = map.entry((i, j)).or_insert(DdComplex::ZERO);
            *e = *e + v;
        }
        let mut row_start = Vec::with_capacity(dim + 1);
        let mut cols = Vec::with_capacity(map.len());
        let mut vals = Vec::with_capacity(map.len());
        let mut row = 0;
        row_start.push(0);
        for ((i, j), v) in map {
            while row < i {
                row_start.push(cols.len());
                row += 1;
            }
            cols.push(j);
            vals.push(v);
        }
        while row_start.len() < dim + 1 {
            row_start.push(cols.len());
        }
        Self {
            dim,
            row_start,
            cols,
            vals,
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, DdComplex)> + '_ {
        (0..self.dim)
            .flat_map(move |i| (self.row_start[i]..self.row_start[i + 1]).map(move |k| (i, self.cols[k], self.vals[k])))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.dim, self.triplets().map(|(i, j, v)| (j, i, v.conj())))
    }

    /// `ca * self + cb * other`.
    pub fn combine(&self, ca: DdComplex, other: &SparseDd, cb: DdComplex) -> Self {
        let a = self.triplets().map(|(i, j, v)| (i, j, ca * v));
        let b = other.triplets().map(|(i, j, v)| (i, j, cb * v));
        Self::from_triplets(self.dim, a.chain(b))
    }

    pub fn scale(&self, c: DdComplex) -> Self {
        Self::from_triplets(self.dim, self.triplets().map(|(i, j, v)| (i, j, c * v)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, v: &[DdComplex]) -> Vec<DdComplex> {
        (0..self.dim)
            .map(|i| {
                let mut acc = DdComplex::ZERO;
                for idx in self.row_start[i]..self.row_start[i + 1] {
                    acc = acc + self.vals[idx] * v[self.cols[idx]];
                }
                acc
            })
            .collect()
    }

    /// `exp(t A) v` by Taylor summation; stops once terms fall below
    /// `1e-34` of the running sum.
    pub fn exp_apply(&self, t: f64, v: &[DdComplex]) -> Result<Vec<DdComplex>> {
        let t = TwoFloat::from(t);
        let mut sum: Vec<DdComplex> = v.to_vec();
        let mut term: Vec<DdComplex> = v.to_vec();
        let vmax = max_abs(v);
        if vmax == 0.0 || t.hi() == 0.0 {
            return Ok(sum);
        }
        for k in 1..4000usize {
            let factor = t / (k as f64);
            term = self.apply(&term).into_iter().map(|z| z.scale(factor)).collect();
            for (s, x) in sum.iter_mut().zip(&term) {
                *s = *s + *x;
            }
            let tmax = max_abs(&term);
            if tmax <= 1e-34 * max_abs(&sum).max(vmax) {
                return Ok(sum);
            }
            if !tmax.is_finite() {
                break;
            }
        }
        Err(Error::Numerical("Taylor series for exp(tA)v did not converge"))
    }
}

pub fn max_abs(v: &[DdComplex]) -> f64 {
    v.iter().map(|z| z.abs_hi()).fold(0.0, f64::max)
}

pub fn unit(dim: usize, j: usize) -> Vec<DdComplex> {
    let mut v = vec![DdComplex::ZERO; dim];
    v[j] = DdComplex::from_c64(Complex64::new(1.0, 0.0));
    v
}
