//! Noncommutative polynomials in `S`, `T`, `S+`, `T+` with exact
//! Gaussian-rational coefficients.
//!
//! The algebra is free except for the two rewrite rules applied by
//! [`normal_order`]:
//!
//! ```text
//! S  T  ->  T  S  + 1
//! S+ T+ ->  T+ S+ - 1
//! ```
//!
//! Adjacent generators from different families (`S T+`, `T+ S`, ...) carry no
//! relation and are left as they are. Canonical words therefore consist of
//! pure-family blocks of the shape `T^a S^b` or `T+^a S+^b`.
//!
//! Text rendering lists terms by decreasing degree, then lexicographically
//! with `T < S < T' < S'`; the apostrophe marks the adjoint.

mod eval;
mod regular;
mod rewrite;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use crate::scalar::GaussRational;

pub use eval::{fock_eval, safe_block_discrepancy};
pub use regular::{box_level, is_regular, profile_from_membership, Bound, BoxExpr, BoxLevel, PowerProfile, Regularity};
pub use rewrite::{normal_order, normal_order_with, normal_order_word, Strategy};

/// A generator. The derived order `T < S < Td < Sd` is the rendering order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    T,
    S,
    Td,
    Sd,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::T, Gen::S, Gen::Td, Gen::Sd];

    pub fn dagger(self) -> Gen {
        match self {
            Gen::S => Gen::Sd,
            Gen::Sd => Gen::S,
            Gen::T => Gen::Td,
            Gen::Td => Gen::T,
        }
    }

    pub fn is_daggered(self) -> bool {
        matches!(self, Gen::Sd | Gen::Td)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Gen::S => "S",
            Gen::T => "T",
            Gen::Sd => "S'",
            Gen::Td => "T'",
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A finite product of generators; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Gen>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(gens: Vec<Gen>) -> Self {
        Self(gens)
    }

    pub fn gen(g: Gen) -> Self {
        Self(vec![g])
    }

    pub fn power(g: Gen, k: usize) -> Self {
        Self(vec![g; k])
    }

    pub fn gens(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Reversed, with every generator daggered.
    pub fn adjoint(&self) -> Word {
        Word(self.0.iter().rev().map(|g| g.dagger()).collect())
    }

    /// `Some(false)` for `{S, T}` words, `Some(true)` for `{S+, T+}` words,
    /// `None` for mixed words. The empty word counts as undaggered.
    pub fn family(&self) -> Option<bool> {
        let mut fam = None;
        for g in &self.0 {
            match fam {
                None => fam = Some(g.is_daggered()),
                Some(d) if d != g.is_daggered() => return None,
                _ => {}
            }
        }
        Some(fam.unwrap_or(false))
    }

    /// Run-length form, e.g. `T T S` becomes `[(T, 2), (S, 1)]`.
    pub fn runs(&self) -> Vec<(Gen, usize)> {
        let mut out: Vec<(Gen, usize)> = Vec::new();
        for &g in &self.0 {
            match out.last_mut() {
                Some((h, n)) if *h == g => *n += 1,
                _ => out.push((g, 1)),
            }
        }
        out
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for (idx, (g, n)) in self.runs().into_iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            if n == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{n}")?;
            }
        }
        Ok(())
    }
}

/// Finite linear combination of words; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NCPoly {
    terms: BTreeMap<Word, GaussRational>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(GaussRational::one())
    }

    pub fn scalar(c: GaussRational) -> Self {
        Self::monomial(c, Word::empty())
    }

    pub fn gen(g: Gen) -> Self {
        Self::monomial(GaussRational::one(), Word::gen(g))
    }

    pub fn word(w: Word) -> Self {
        Self::monomial(GaussRational::one(), w)
    }

    pub fn monomial(c: GaussRational, w: Word) -> Self {
        let mut p = Self::zero();
        p.add_term(w, &c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, GaussRational)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, &c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending word order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &GaussRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> GaussRational {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, a)| (w.clone(), a * c)))
    }

    /// Free-algebra product: bilinear extension of concatenation.
    pub fn multiply(&self, other: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), &(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> NCPoly {
        let mut out = NCPoly::one();
        for _ in 0..k {
            out = out.multiply(self);
        }
        out
    }

    /// Involution: reverse words, dagger generators, conjugate coefficients.
    pub fn adjoint(&self) -> NCPoly {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.adjoint(), c.conj())))
    }
}

impl From<Gen> for NCPoly {
    fn from(g: Gen) -> Self {
        NCPoly::gen(g)
    }
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Add for NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: NCPoly) -> NCPoly {
        &self + &rhs
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())))
    }
}

impl Neg for NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        -&self
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        self + &(-rhs)
    }
}

impl Sub for NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: NCPoly) -> NCPoly {
        &self - &rhs
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        self.multiply(rhs)
    }
}

impl Mul for NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: NCPoly) -> NCPoly {
        self.multiply(&rhs)
    }
}

/// Splits a coefficient into a sign and a magnitude that prints without a
/// leading minus, when that is possible.
fn split_sign(c: &GaussRational) -> (bool, GaussRational) {
    let negative = if c.is_real() {
        c.re.is_negative()
    } else if num_traits::Zero::is_zero(&c.re) {
        c.im.is_negative()
    } else {
        false
    };
    if negative {
        (true, -c.clone())
    } else {
        (false, c.clone())
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut ordered: Vec<(&Word, &GaussRational)> = self.terms.iter().collect();
        ordered.sort_by(|(a, _), (b, _)| b.len().cmp(&a.len()).then_with(|| a.gens().cmp(b.gens())));
        for (idx, (w, c)) in ordered.into_iter().enumerate() {
            let (negative, mag) = split_sign(c);
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = mag == GaussRational::one();
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if unit {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag} {w}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(g: Gen) -> NCPoly {
        NCPoly::gen(g)
    }

    #[test]
    fn product_is_concatenation() {
        let st = &p(Gen::S) * &p(Gen::T);
        assert_eq!(st, NCPoly::word(Word::new(vec![Gen::S, Gen::T])));
    }

    #[test]
    fn bilinearity_without_reordering() {
        let lhs = &(&p(Gen::S) + &p(Gen::T)) * &(&p(Gen::S) - &p(Gen::T));
        let w = |a, b| NCPoly::word(Word::new(vec![a, b]));
        let rhs = &(&(&w(Gen::S, Gen::S) - &w(Gen::S, Gen::T)) + &w(Gen::T, Gen::S)) - &w(Gen::T, Gen::T);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjoint_examples() {
        let st = &p(Gen::S) * &p(Gen::T);
        assert_eq!(st.adjoint(), NCPoly::word(Word::new(vec![Gen::Td, Gen::Sd])));
        let is = p(Gen::S).scale(&GaussRational::i());
        assert_eq!(is.adjoint(), p(Gen::Sd).scale(&GaussRational::from_ints(0, -1)));
    }

    #[test]
    fn cancellation_removes_terms() {
        let q = &p(Gen::S) - &p(Gen::S);
        assert!(q.is_zero());
        assert_eq!(q.to_string(), "0");
    }

    #[test]
    fn word_order_is_degree_then_lex() {
        let a = Word::new(vec![Gen::Sd]);
        let b = Word::new(vec![Gen::T, Gen::T]);
        assert!(a < b);
        assert!(Word::gen(Gen::T) < Word::gen(Gen::S));
        assert!(Word::gen(Gen::S) < Word::gen(Gen::Td));
        assert!(Word::gen(Gen::Td) < Word::gen(Gen::Sd));
    }

    #[test]
    fn rendering() {
        let ts = NCPoly::word(Word::new(vec![Gen::T, Gen::S]));
        assert_eq!((&ts + &NCPoly::one()).to_string(), "T S + 1");
        let t2s2 = NCPoly::word(Word::new(vec![Gen::T, Gen::T, Gen::S, Gen::S]));
        let q = &(&t2s2 + &ts.scale(&GaussRational::from_int(4))) + &NCPoly::scalar(GaussRational::from_int(2));
        assert_eq!(q.to_string(), "T^2 S^2 + 4 T S + 2");
        let r = &p(Gen::Sd).scale(&GaussRational::from_int(-2)) + &p(Gen::Td).scale(&GaussRational::from_ints(1, -1));
        assert_eq!(r.to_string(), "(1-i) T' - 2 S'");
        assert_eq!((-&p(Gen::S)).to_string(), "-S");
        assert_eq!(p(Gen::T).scale(&GaussRational::from_ratio(1, 2)).to_string(), "1/2 T");
    }

    #[test]
    fn families() {
        assert_eq!(Word::new(vec![Gen::T, Gen::S]).family(), Some(false));
        assert_eq!(Word::new(vec![Gen::Td, Gen::Sd]).family(), Some(true));
        assert_eq!(Word::new(vec![Gen::S, Gen::Td]).family(), None);
        assert_eq!(Word::empty().family(), Some(false));
    }
}
