//! Bounded cochain complexes in ambient coordinates and the long exact
//! cohomology sequence of a short exact sequence of such complexes.
//!
//! This is the common engine behind homology of chain complexes, derived
//! limits, total complexes and the Tor sequences. Every term is `Z^dim` modulo
//! a relation lattice; differentials are integer matrices stored by column.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Canonical, FgAbGroup};
use crate::lattice::{apply_columns, solve, Lattice};
use crate::sparse::SparseVec;
use crate::subquotient::{exact_at, homology_subquotient, images_under, Subquotient};

#[derive(Clone, Debug)]
pub struct Term {
    pub dim: usize,
    pub relations: Lattice,
    /// Images of the ambient basis vectors in the next term.
    pub d: Vec<SparseVec>,
}

impl Term {
    pub fn from_group(g: &FgAbGroup, d: Vec<SparseVec>) -> Term {
        Term { dim: g.generators(), relations: g.relation_lattice().clone(), d }
    }

    pub fn free(dim: usize, d: Vec<SparseVec>) -> Term {
        Term { dim, relations: Lattice::zero(dim), d }
    }

    pub fn zero() -> Term {
        Term::free(0, Vec::new())
    }

    pub fn group(&self) -> FgAbGroup {
        FgAbGroup::from_relators(self.dim, self.relations.basis())
    }
}

/// Term `k` sits in degree `lo + k`; the differential raises degree by one.
#[derive(Clone, Debug)]
pub struct Cochain {
    pub lo: i64,
    pub terms: Vec<Term>,
}

impl Cochain {
    pub fn new(lo: i64, terms: Vec<Term>) -> Cochain {
        Cochain { lo, terms }
    }

    pub fn empty() -> Cochain {
        Cochain { lo: 0, terms: Vec::new() }
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn term(&self, n: i64) -> Option<&Term> {
        if n < self.lo {
            return None;
        }
        self.terms.get((n - self.lo) as usize)
    }

    pub fn dim(&self, n: i64) -> usize {
        self.term(n).map_or(0, |t| t.dim)
    }

    fn relations(&self, n: i64) -> Lattice {
        self.term(n).map_or(Lattice::zero(0), |t| t.relations.clone())
    }

    fn outgoing(&self, n: i64) -> Vec<SparseVec> {
        match self.term(n) {
            Some(t) if self.term(n + 1).is_some() => t.d.clone(),
            Some(t) => vec![SparseVec::zero(); t.dim],
            None => Vec::new(),
        }
    }

    /// Degrees where `d∘d` fails, or where a differential does not respect relations.
    pub fn check(&self) -> Result<()> {
        for n in self.lo..=self.hi() {
            let t = self.term(n).expect("in range");
            let Some(next) = self.term(n + 1) else { continue };
            if t.d.len() != t.dim || t.d.iter().any(|c| c.support_end() > next.dim) {
                return Err(Error::DimensionMismatch(format!("differential out of degree {n}")));
            }
            if t.relations.basis().iter().any(|r| !next.relations.contains(&apply_columns(&t.d, r))) {
                return Err(Error::Invalid(format!("differential out of degree {n} is not well defined")));
            }
            if let Some(after) = self.term(n + 2) {
                let bad = t.d.iter().any(|c| !after.relations.contains(&apply_columns(&next.d, c)));
                if bad {
                    return Err(Error::DifferentialSquareNonzero { degree: n });
                }
            }
        }
        Ok(())
    }

    /// `H^n` as a subquotient of the degree-`n` ambient lattice.
    pub fn cohomology(&self, n: i64) -> Subquotient {
        let Some(t) = self.term(n) else { return Subquotient::zero(0) };
        let incoming = match self.term(n - 1) {
            Some(prev) => prev.d.clone(),
            None => Vec::new(),
        };
        homology_subquotient(t.dim, &t.relations, &self.outgoing(n), &self.relations(n + 1), &incoming)
    }

    pub fn cohomology_group(&self, n: i64) -> FgAbGroup {
        self.cohomology(n).to_group().clone()
    }
}

/// A degree-preserving map of cochain complexes, by columns in each degree.
#[derive(Clone, Debug)]
pub struct CochainMap {
    pub lo: i64,
    pub maps: Vec<Vec<SparseVec>>,
}

impl CochainMap {
    pub fn at(&self, n: i64) -> &[SparseVec] {
        if n < self.lo {
            return &[];
        }
        self.maps.get((n - self.lo) as usize).map_or(&[], Vec::as_slice)
    }

    /// Verifies `f∘d = d∘f` modulo the target relations.
    pub fn check(&self, source: &Cochain, target: &Cochain) -> Result<()> {
        for n in source.lo..=source.hi() {
            let f = self.at(n);
            let s = source.term(n).expect("in range");
            if f.len() != s.dim {
                return Err(Error::DimensionMismatch(format!("chain map in degree {n}")));
            }
            let Some(tn1) = target.term(n + 1) else { continue };
            let f1 = self.at(n + 1);
            for (k, col) in f.iter().enumerate() {
                let via_target = match target.term(n) {
                    Some(tn) if !tn.d.is_empty() => apply_columns(&tn.d, col),
                    _ => SparseVec::zero(),
                };
                let via_source = match source.term(n + 1) {
                    Some(_) => apply_columns(f1, &s.d[k]),
                    None => SparseVec::zero(),
                };
                if !tn1.relations.contains(&via_target.sub(&via_source)) {
                    return Err(Error::NotChainMap { degree: n, context: String::new() });
                }
            }
        }
        Ok(())
    }
}

/// One node of a long exact sequence check.
#[derive(Clone, Debug, Serialize)]
pub struct LesNode {
    pub label: String,
    pub degree: i64,
    pub group: Canonical,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LesReport {
    pub nodes: Vec<LesNode>,
    pub exact: bool,
}

impl LesReport {
    pub fn from_nodes(nodes: Vec<LesNode>) -> LesReport {
        let exact = nodes.iter().all(|n| n.exact);
        LesReport { nodes, exact }
    }
}

/// A short exact sequence `0 → A --f--> B --g--> C → 0` of cochain complexes.
#[derive(Clone, Debug)]
pub struct CochainSes {
    pub a: Cochain,
    pub b: Cochain,
    pub c: Cochain,
    pub f: CochainMap,
    pub g: CochainMap,
}

impl CochainSes {
    /// Checks the chain map conditions and degreewise short exactness; on failure
    /// returns the offending degree.
    pub fn check(&self) -> std::result::Result<(), i64> {
        self.f.check(&self.a, &self.b).map_err(|_| self.a.lo)?;
        self.g.check(&self.b, &self.c).map_err(|_| self.b.lo)?;
        let lo = self.a.lo.min(self.b.lo).min(self.c.lo);
        let hi = self.a.hi().max(self.b.hi()).max(self.c.hi());
        for n in lo..=hi {
            let sq = |x: &Cochain| match x.term(n) {
                Some(t) => Subquotient::new(Lattice::full(t.dim), t.relations.clone()),
                None => Subquotient::zero(0),
            };
            let (a, b, c) = (sq(&self.a), sq(&self.b), sq(&self.c));
            let f = images_under(&a, self.f.at(n));
            let g = images_under(&b, self.g.at(n));
            let mono = exact_at(&a, &[], &b, &f);
            let middle = exact_at(&b, &f, &c, &g);
            let epi = c.quo().add_generators(g.iter().cloned()) == Lattice::full(c.dim());
            if !(mono && middle && epi) {
                return Err(n);
            }
        }
        Ok(())
    }

    /// Connecting homomorphism on an ambient cocycle of `C` in degree `n`:
    /// lift through `g`, apply `d`, pull back through `f`.
    pub fn connecting(&self, n: i64, z: &SparseVec) -> SparseVec {
        let cn = self.c.term(n).expect("degree in range");
        let gcols = self.g.at(n);
        let mut gens: Vec<SparseVec> = gcols.to_vec();
        gens.extend(cn.relations.basis().iter().cloned());
        let x = solve(&gens, cn.dim, z).expect("g is surjective modulo relations");
        let b = x.slice(0, gcols.len());
        let Some(bn1) = self.b.term(n + 1) else { return SparseVec::zero() };
        let db = apply_columns(&self.b.term(n).expect("in range").d, &b);
        let fcols = self.f.at(n + 1);
        let mut gens: Vec<SparseVec> = fcols.to_vec();
        gens.extend(bn1.relations.basis().iter().cloned());
        let y = solve(&gens, bn1.dim, &db).expect("d of a lift lies in the image of f");
        y.slice(0, fcols.len())
    }

    /// Checks exactness of `… → H^n A → H^n B → H^n C → H^{n+1} A → …` over `[lo, hi]`.
    pub fn les(&self, lo: i64, hi: i64) -> LesReport {
        let ha: Vec<Subquotient> = (lo..=hi + 1).map(|n| self.a.cohomology(n)).collect();
        let hb: Vec<Subquotient> = (lo..=hi).map(|n| self.b.cohomology(n)).collect();
        let hc: Vec<Subquotient> = (lo - 1..=hi).map(|n| self.c.cohomology(n)).collect();
        let mut nodes = Vec::new();
        for (k, n) in (lo..=hi).enumerate() {
            let (a, b, c) = (&ha[k], &hb[k], &hc[k + 1]);
            let f_img = images_under(a, self.f.at(n));
            let g_img = images_under(b, self.g.at(n));
            let delta: Vec<SparseVec> = c.generators().iter().map(|z| self.connecting(n, z)).collect();
            let delta_in: Vec<SparseVec> = hc[k].generators().iter().map(|z| self.connecting(n - 1, z)).collect();
            let next_a = &ha[k + 1];
            nodes.push(LesNode {
                label: "A".into(),
                degree: n,
                group: a.to_group().canonical().clone(),
                exact: exact_at(a, &delta_in, b, &f_img),
            });
            nodes.push(LesNode {
                label: "B".into(),
                degree: n,
                group: b.to_group().canonical().clone(),
                exact: exact_at(b, &f_img, c, &g_img),
            });
            nodes.push(LesNode {
                label: "C".into(),
                degree: n,
                group: c.to_group().canonical().clone(),
                exact: exact_at(c, &g_img, next_a, &delta),
            });
        }
        LesReport::from_nodes(nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> SparseVec {
        SparseVec::from_i64(x)
    }

    #[test]
    fn cohomology_of_times_two() {
        let c = Cochain::new(0, vec![Term::free(1, vec![v(&[2])]), Term::free(1, vec![])]);
        c.check().unwrap();
        assert!(c.cohomology_group(0).is_trivial());
        assert_eq!(c.cohomology_group(1).to_string(), "Z/2");
    }

    #[test]
    fn les_of_bockstein_sequence() {
        // 0 → Z --2--> Z → Z/2 → 0 in degree 0, each complex concentrated there.
        let a = Cochain::new(0, vec![Term::free(1, vec![])]);
        let b = a.clone();
        let z2 = FgAbGroup::cyclic(2);
        let c = Cochain::new(0, vec![Term::from_group(&z2, vec![])]);
        let ses = CochainSes {
            a,
            b,
            c,
            f: CochainMap { lo: 0, maps: vec![vec![v(&[2])]] },
            g: CochainMap { lo: 0, maps: vec![vec![v(&[1])]] },
        };
        ses.check().unwrap();
        assert!(ses.les(0, 0).exact);
    }
}
