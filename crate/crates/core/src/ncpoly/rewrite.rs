use std::collections::BTreeMap;

use super::{Gen, NCPoly, Word};
use crate::scalar::GaussRational;

/// Which redex is contracted first when several are present.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

fn redex_sign(a: Gen, b: Gen) -> Option<i64> {
    match (a, b) {
        (Gen::S, Gen::T) => Some(1),
        (Gen::Sd, Gen::Td) => Some(-1),
        _ => None,
    }
}

fn find_redex(w: &[Gen], strategy: Strategy) -> Option<(usize, i64)> {
    let mut it = (0..w.len().saturating_sub(1)).filter_map(|i| redex_sign(w[i], w[i + 1]).map(|s| (i, s)));
    match strategy {
        Strategy::Leftmost => it.next(),
        Strategy::Rightmost => it.next_back(),
    }
}

/// Rewrites to canonical form, contracting one redex at a time.
///
/// Pending words are kept in a map so that equal intermediate words merge
/// their coefficients instead of being expanded twice.
pub fn normal_order_with(p: &NCPoly, strategy: Strategy) -> NCPoly {
    let mut pending: BTreeMap<Word, GaussRational> = p.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
    let mut done = NCPoly::zero();
    while let Some((w, c)) = pending.pop_last() {
        if c.is_zero() {
            continue;
        }
        match find_redex(w.gens(), strategy) {
            None => done.add_term(w, &c),
            Some((i, sign)) => {
                let g = w.gens();
                let mut swapped = g.to_vec();
                swapped.swap(i, i + 1);
                let mut shorter = g[..i].to_vec();
                shorter.extend_from_slice(&g[i + 2..]);
                push(&mut pending, Word::new(swapped), c.clone());
                push(&mut pending, Word::new(shorter), c.scale_int(sign));
            }
        }
    }
    done
}

fn push(map: &mut BTreeMap<Word, GaussRational>, w: Word, c: GaussRational) {
    let e = map.entry(w).or_default();
    *e += &c;
}

pub fn normal_order(p: &NCPoly) -> NCPoly {
    normal_order_with(p, Strategy::Leftmost)
}

pub fn normal_order_word(w: &Word) -> NCPoly {
    normal_order(&NCPoly::word(w.clone()))
}
