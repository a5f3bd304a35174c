use std::fmt;

use serde::Serialize;

use super::{normal_order, Gen, NCPoly, Word};
use crate::error::{Error, Result};

/// A natural number or the unbounded marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Bound {
    Finite(usize),
    Unbounded,
}

impl Bound {
    pub fn admits(self, k: usize) -> bool {
        match self {
            Bound::Finite(m) => k <= m,
            Bound::Unbounded => true,
        }
    }

    fn at_least(self, other: Bound) -> bool {
        match (self, other) {
            (Bound::Unbounded, _) => true,
            (Bound::Finite(_), Bound::Unbounded) => false,
            (Bound::Finite(a), Bound::Finite(b)) => a >= b,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(m) => write!(f, "{m}"),
            Bound::Unbounded => f.write_str("inf"),
        }
    }
}

/// Largest admissible power `m_r` of `S` next to `T^r`, for `r = 0..=n0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerProfile {
    n0: Bound,
    m: Vec<Bound>,
}

impl PowerProfile {
    /// With a finite `n0` the list must hold exactly `n0 + 1` entries; with an
    /// unbounded `n0` the last entry repeats forever.
    pub fn new(n0: Bound, m: Vec<Bound>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidProfile("empty m list".into()));
        }
        if let Bound::Finite(n) = n0 {
            if m.len() != n + 1 {
                return Err(Error::InvalidProfile(format!(
                    "n0 = {n} needs {} entries, got {}",
                    n + 1,
                    m.len()
                )));
            }
        }
        for r in 1..m.len() {
            if !m[r - 1].at_least(m[r]) {
                return Err(Error::InvalidProfile(format!(
                    "m_{} = {} exceeds m_{} = {}",
                    r,
                    m[r],
                    r - 1,
                    m[r - 1]
                )));
            }
        }
        Ok(Self { n0, m })
    }

    /// Every monomial admissible.
    pub fn unbounded() -> Self {
        Self {
            n0: Bound::Unbounded,
            m: vec![Bound::Unbounded],
        }
    }

    /// Profile with `n0 = m.len() - 1`.
    pub fn finite(m: &[usize]) -> Result<Self> {
        Self::new(
            Bound::Finite(m.len().saturating_sub(1)),
            m.iter().map(|&k| Bound::Finite(k)).collect(),
        )
    }

    pub fn n0(&self) -> Bound {
        self.n0
    }

    pub fn m(&self) -> &[Bound] {
        &self.m
    }

    /// `m_r`, or `None` when `r > n0`.
    pub fn m_at(&self, r: usize) -> Option<Bound> {
        if !self.n0.admits(r) {
            return None;
        }
        Some(self.m.get(r).copied().unwrap_or(*self.m.last().expect("nonempty")))
    }

    /// Whether `T^r S^k` (or its daggered twin) is admissible.
    pub fn admits(&self, r: usize, k: usize) -> bool {
        self.m_at(r).is_some_and(|m| m.admits(k))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularity {
    pub regular: bool,
    pub witness: Option<Word>,
}

/// Splits a canonical pure-family word `T^r S^k` into `(r, k)`.
fn ladder_powers(w: &Word) -> Option<(usize, usize)> {
    let daggered = w.family()?;
    let (t, s) = if daggered { (Gen::Td, Gen::Sd) } else { (Gen::T, Gen::S) };
    let g = w.gens();
    let r = g.iter().take_while(|&&x| x == t).count();
    if g[r..].iter().all(|&x| x == s) {
        Some((r, g.len() - r))
    } else {
        None
    }
}

/// Membership in the regular part: after normal ordering every word must be
/// `T^r S^k` or `T+^r S+^k` with `r <= n0` and `k <= m_r`. The first
/// offending word in canonical order is returned as witness.
pub fn is_regular(p: &NCPoly, profile: &PowerProfile) -> Regularity {
    let canonical = normal_order(p);
    for (w, _) in canonical.terms() {
        let ok = ladder_powers(w).is_some_and(|(r, k)| profile.admits(r, k));
        if !ok {
            return Regularity {
                regular: false,
                witness: Some(w.clone()),
            };
        }
    }
    Regularity {
        regular: true,
        witness: None,
    }
}

/// Builds a profile from `member(r, k)`, the domain condition of `T^r S^k`.
///
/// `n0` is the largest `r <= cap` with `member(r, 0)`; `m_r` is the largest
/// `k <= cap` such that `member(r, j)` holds for all `j <= k`, and `0` when
/// `member(r, 0)` already fails.
pub fn profile_from_membership(member: impl Fn(usize, usize) -> bool, cap: usize) -> Result<PowerProfile> {
    let n0 = (0..=cap).rev().find(|&r| member(r, 0)).unwrap_or(0);
    let mut m = Vec::with_capacity(n0 + 1);
    for r in 0..=n0 {
        let mr = (0..=cap).take_while(|&k| member(r, k)).last().unwrap_or(0);
        if let Some(&prev) = m.last() {
            if mr > prev {
                return Err(Error::InconsistentOracle {
                    r,
                    value: mr,
                    prev_r: r - 1,
                    prev,
                });
            }
        }
        m.push(mr);
    }
    PowerProfile::finite(&m)
}

/// Box-product tree over regular leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoxExpr {
    Leaf(NCPoly),
    Box(Box<BoxExpr>, Box<BoxExpr>),
}

impl BoxExpr {
    pub fn leaf(p: NCPoly) -> Self {
        BoxExpr::Leaf(p)
    }

    pub fn boxed(l: BoxExpr, r: BoxExpr) -> Self {
        BoxExpr::Box(Box::new(l), Box::new(r))
    }

    pub fn depth(&self) -> usize {
        match self {
            BoxExpr::Leaf(_) => 0,
            BoxExpr::Box(l, r) => l.depth().max(r.depth()) + 1,
        }
    }

    pub fn leaves(&self) -> Vec<&NCPoly> {
        match self {
            BoxExpr::Leaf(p) => vec![p],
            BoxExpr::Box(l, r) => {
                let mut v = l.leaves();
                v.extend(r.leaves());
                v
            }
        }
    }

    /// Free-algebra product of the leaves, left to right.
    pub fn flatten(&self) -> NCPoly {
        self.leaves().into_iter().fold(NCPoly::one(), |acc, p| acc.multiply(p))
    }

    /// Mirror image with adjoint leaves.
    pub fn adjoint(&self) -> Self {
        match self {
            BoxExpr::Leaf(p) => BoxExpr::Leaf(p.adjoint()),
            BoxExpr::Box(l, r) => BoxExpr::boxed(r.adjoint(), l.adjoint()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxLevel {
    pub level: usize,
    pub effective_level: usize,
    pub flattened: NCPoly,
}

/// Tree depth, plus level 0 when the flattened product is already regular.
pub fn box_level(e: &BoxExpr, profile: &PowerProfile) -> Result<BoxLevel> {
    for leaf in e.leaves() {
        let reg = is_regular(leaf, profile);
        if !reg.regular {
            let word = reg.witness.map(|w| w.to_string()).unwrap_or_default();
            return Err(Error::NonRegularLeaf { word });
        }
    }
    let level = e.depth();
    let flattened = normal_order(&e.flatten());
    let effective_level = if is_regular(&flattened, profile).regular {
        0
    } else {
        level
    };
    Ok(BoxLevel {
        level,
        effective_level,
        flattened,
    })
}
