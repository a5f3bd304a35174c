use super::{Gen, NCPoly};
use crate::error::Result;
use crate::fock_rep::{OperatorPair, TruncatedOperator};
use crate::linalg::{self, CMatrix};

fn generator_matrix(pair: &OperatorPair, g: Gen) -> CMatrix {
    match g {
        Gen::S => pair.s.matrix().clone(),
        Gen::T => pair.t.matrix().clone(),
        Gen::Sd => pair.s.matrix().adjoint(),
        Gen::Td => pair.t.matrix().adjoint(),
    }
}

/// Substitutes the pair's matrices (and their adjoints) for the generators.
pub fn fock_eval(p: &NCPoly, pair: &OperatorPair) -> Result<TruncatedOperator> {
    let n = pair.dim();
    let mats: Vec<CMatrix> = Gen::ALL.iter().map(|&g| generator_matrix(pair, g)).collect();
    let index = |g: Gen| Gen::ALL.iter().position(|&h| h == g).expect("generator");
    let mut total = CMatrix::zeros(n, n);
    for (w, c) in p.terms() {
        let mut m = linalg::identity(n);
        for &g in w.gens() {
            m = &m * &mats[index(g)];
        }
        total += m * c.to_complex64();
    }
    TruncatedOperator::new(p.to_string(), total)
}

/// Max-abs difference of `fock_eval(p)` and `fock_eval(q)` on the leading
/// block of size `dim - max(deg p, deg q)`, where truncation cannot interfere.
pub fn safe_block_discrepancy(p: &NCPoly, q: &NCPoly, pair: &OperatorPair) -> Result<f64> {
    let d = p.degree().max(q.degree());
    let band = pair.dim().saturating_sub(d);
    let a = fock_eval(p, pair)?;
    let b = fock_eval(q, pair)?;
    Ok(linalg::max_abs_block(&(a.matrix() - b.matrix()), band, band))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_rep::boson_pair;
    use crate::ncpoly::{normal_order, Word};

    #[test]
    fn commutator_is_identity_on_safe_block() {
        let pair = boson_pair(12).unwrap();
        let st = NCPoly::word(Word::new(vec![Gen::S, Gen::T]));
        let ts = NCPoly::word(Word::new(vec![Gen::T, Gen::S]));
        let m = fock_eval(&(&st - &ts), &pair).unwrap();
        let diff = m.matrix() - linalg::identity(12);
        assert!(linalg::max_abs_block(&diff, 11, 11) < 1e-14);
    }

    #[test]
    fn adjoint_matches_matrix_adjoint() {
        let pair = crate::fock_rep::swanson_pair(0.4, 10).unwrap();
        let p = &NCPoly::word(Word::new(vec![Gen::S, Gen::Td, Gen::T]))
            + &NCPoly::gen(Gen::Sd).scale(&crate::GaussRational::from_ints(2, 1));
        let a = fock_eval(&p.adjoint(), &pair).unwrap();
        let b = fock_eval(&p, &pair).unwrap();
        assert!(linalg::max_abs(&(a.matrix() - b.matrix().adjoint())) < 1e-12);
    }

    #[test]
    fn rewrite_is_sound_for_s2t2() {
        let pair = boson_pair(20).unwrap();
        let p = NCPoly::word(Word::new(vec![Gen::S, Gen::S, Gen::T, Gen::T]));
        assert!(safe_block_discrepancy(&p, &normal_order(&p), &pair).unwrap() < 1e-10);
    }
}
