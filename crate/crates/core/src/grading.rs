//! The single place where chain (homological) and cochain gradings meet.
//!
//! A chain complex `… → C_n → C_{n−1} → …` is read as the cochain complex with
//! `K^{−n} = C_n`. Every module converts through these functions so that index
//! negation happens exactly once.

use crate::cochain::{Cochain, Term};
use crate::complexes::ChainComplex;
use crate::group::{AbMap, FgAbGroup};
use crate::matrix::IntMatrix;

#[inline]
pub fn cochain_degree(chain_degree: i64) -> i64 {
    -chain_degree
}

#[inline]
pub fn chain_degree(cochain_degree: i64) -> i64 {
    -cochain_degree
}

pub fn chain_to_cochain(c: &ChainComplex) -> Cochain {
    if c.is_empty() {
        return Cochain::empty();
    }
    let terms = (c.lo()..=c.hi())
        .rev()
        .map(|n| {
            let g = c.group(n);
            let d = if n > c.lo() { c.differential(n).columns() } else { Vec::new() };
            Term::from_group(&g, d)
        })
        .collect();
    Cochain::new(cochain_degree(c.hi()), terms)
}

pub fn cochain_to_chain(k: &Cochain) -> ChainComplex {
    if k.terms.is_empty() {
        return ChainComplex::empty();
    }
    let lo = chain_degree(k.hi());
    let hi = chain_degree(k.lo);
    let groups: Vec<FgAbGroup> = (lo..=hi).map(|n| k.term(cochain_degree(n)).expect("in range").group()).collect();
    let differentials = (lo + 1..=hi)
        .map(|n| {
            let t = k.term(cochain_degree(n)).expect("in range");
            let src = &groups[(n - lo) as usize];
            let tgt = &groups[(n - 1 - lo) as usize];
            AbMap::new(src.clone(), tgt.clone(), IntMatrix::from_columns(tgt.generators(), &t.d))
                .expect("differential respects relations")
        })
        .collect();
    ChainComplex::new(lo, groups, differentials).expect("cochain complex squares to zero")
}
