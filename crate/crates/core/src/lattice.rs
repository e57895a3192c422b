//! Integer lattices (subgroups of Z^n) in row echelon form.
//!
//! Every lattice is stored as a basis in echelon form: pivots strictly
//! increase, pivot entries are positive, and entries above a pivot are reduced
//! into `[0, pivot)`. Because of the reduction, two lattices are equal exactly
//! when their stored bases coincide.

use std::collections::BTreeMap;

use crate::integer::Integer;
use crate::sparse::SparseVec;

#[derive(Clone, Debug)]
struct Row {
    main: SparseVec,
    track: SparseVec,
}

/// Incremental echelon reduction with optional transform tracking.
///
/// Each inserted vector carries a "track" recording which combination of the
/// inserted generators it is. Vectors that reduce to zero leave behind their
/// track as a relation among the generators; the set of such relations is a
/// basis of the relation module, because every step is unimodular.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: BTreeMap<usize, Row>,
    syzygies: Vec<SparseVec>,
    inserted: usize,
    tracking: bool,
}

impl Echelon {
    pub fn new(dim: usize, tracking: bool) -> Echelon {
        Echelon { dim, rows: BTreeMap::new(), syzygies: Vec::new(), inserted: 0, tracking }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts the next generator, returning its generator index.
    pub fn push(&mut self, v: SparseVec) -> usize {
        debug_assert!(v.support_end() <= self.dim);
        let idx = self.inserted;
        self.inserted += 1;
        let track = if self.tracking { SparseVec::unit(idx) } else { SparseVec::zero() };
        self.insert(v, track);
        idx
    }

    fn insert(&mut self, mut main: SparseVec, mut track: SparseVec) {
        loop {
            let (p, vp) = match main.leading() {
                None => {
                    if self.tracking && !track.is_zero() {
                        self.syzygies.push(track);
                    }
                    return;
                }
                Some((p, vp)) => (p, vp.clone()),
            };
            match self.rows.get_mut(&p) {
                None => {
                    if vp.is_negative() {
                        main = main.neg();
                        track = track.neg();
                    }
                    self.rows.insert(p, Row { main, track });
                    return;
                }
                Some(row) => {
                    let bp = row.main.leading().expect("pivot row is nonzero").1.clone();
                    if let Some(q) = vp.div_exact(&bp) {
                        let mq = -q;
                        main = main.add_scaled(&mq, &row.main);
                        if self.tracking {
                            track = track.add_scaled(&mq, &row.track);
                        }
                    } else {
                        let (g, x, y) = bp.ext_gcd(&vp);
                        let a = vp.div_exact(&g).expect("gcd divides");
                        let b = -bp.div_exact(&g).expect("gcd divides");
                        let new_main = row.main.combine(&x, &main, &y);
                        let rest_main = row.main.combine(&a, &main, &b);
                        if self.tracking {
                            let new_track = row.track.combine(&x, &track, &y);
                            track = row.track.combine(&a, &track, &b);
                            row.track = new_track;
                        }
                        row.main = new_main;
                        main = rest_main;
                    }
                }
            }
        }
    }

    /// Basis rows in pivot order.
    pub fn basis(&self) -> Vec<SparseVec> {
        self.rows.values().map(|r| r.main.clone()).collect()
    }

    pub fn syzygies(&self) -> &[SparseVec] {
        &self.syzygies
    }

    /// Coordinates of `v` with respect to the basis rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<Integer>> {
        let mut rest = v.clone();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (p, row) in &self.rows {
            let vp = rest.get(*p);
            if vp.is_zero() {
                coords.push(Integer::ZERO);
                continue;
            }
            if let Some((lead, _)) = rest.leading() {
                if lead < *p {
                    return None;
                }
            }
            let q = vp.div_exact(row.main.leading().expect("nonzero").1)?;
            rest = rest.add_scaled(&-&q, &row.main);
            coords.push(q);
        }
        if rest.is_zero() {
            Some(coords)
        } else {
            None
        }
    }

    /// Coefficients over the inserted generators expressing `v`, if possible.
    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        assert!(self.tracking, "solve requires a tracking echelon");
        let coords = self.coordinates(v)?;
        let mut acc = SparseVec::zero();
        for (c, row) in coords.iter().zip(self.rows.values()) {
            if !c.is_zero() {
                acc = acc.add_scaled(c, &row.track);
            }
        }
        Some(acc)
    }

    pub fn into_lattice(self) -> Lattice {
        Lattice::from_echelon_rows(self.dim, self.rows.into_values().map(|r| r.main).collect())
    }
}

/// A subgroup of Z^dim.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<SparseVec>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Lattice {
        Lattice { dim, basis: Vec::new() }
    }

    pub fn full(dim: usize) -> Lattice {
        Lattice { dim, basis: (0..dim).map(SparseVec::unit).collect() }
    }

    pub fn from_generators(dim: usize, gens: impl IntoIterator<Item = SparseVec>) -> Lattice {
        let mut e = Echelon::new(dim, false);
        for g in gens {
            e.push(g);
        }
        e.into_lattice()
    }

    fn from_echelon_rows(dim: usize, mut basis: Vec<SparseVec>) -> Lattice {
        // Top-down: adding row k only touches columns at or after its pivot.
        for k in 0..basis.len() {
            let (p, piv) = {
                let (p, v) = basis[k].leading().expect("nonzero row");
                (p, v.clone())
            };
            for i in 0..k {
                let e = basis[i].get(p);
                if !e.is_zero() {
                    let (q, _) = e.div_mod_floor(&piv);
                    if !q.is_zero() {
                        basis[i] = basis[i].add_scaled(&-q, &basis[k]);
                    }
                }
            }
        }
        Lattice { dim, basis }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.leading().expect("nonzero").0).collect()
    }

    /// Coordinates of `v` in the stored basis.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<Integer>> {
        let mut rest = v.clone();
        let mut coords = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let (p, piv) = b.leading().expect("nonzero");
            if let Some((lead, _)) = rest.leading() {
                if lead < p {
                    return None;
                }
            }
            let vp = rest.get(p);
            if vp.is_zero() {
                coords.push(Integer::ZERO);
                continue;
            }
            let q = vp.div_exact(piv)?;
            rest = rest.add_scaled(&-&q, b);
            coords.push(q);
        }
        if rest.is_zero() {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.coordinates(v).is_some()
    }

    /// Whether `other` is a sublattice of `self`.
    pub fn includes(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        if other.is_zero() {
            return self.clone();
        }
        Lattice::from_generators(self.dim, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn add_generators(&self, gens: impl IntoIterator<Item = SparseVec>) -> Lattice {
        Lattice::from_generators(self.dim, self.basis.iter().cloned().chain(gens))
    }

    pub fn intersection(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        let coeffs = preimage(&self.basis, other);
        Lattice::from_generators(
            self.dim,
            coeffs.basis.iter().map(|c| apply_columns(&self.basis, c)),
        )
    }

    /// Image of the lattice under the linear map whose columns are `cols`.
    pub fn image(&self, cols: &[SparseVec], target_dim: usize) -> Lattice {
        Lattice::from_generators(target_dim, self.basis.iter().map(|v| apply_columns(cols, v)))
    }

    /// Intersection with the coordinate block `[lo, hi)`, re-based to start at zero.
    ///
    /// Only valid for trailing blocks (`hi == dim`), where echelon rows with a
    /// pivot in the block already span the intersection.
    pub fn trailing_block(&self, lo: usize) -> Lattice {
        let rows = self
            .basis
            .iter()
            .filter(|b| b.leading().expect("nonzero").0 >= lo)
            .map(|b| b.slice(lo, self.dim))
            .collect();
        Lattice { dim: self.dim - lo, basis: rows }
    }
}

/// `Σ v_j cols[j]`.
pub fn apply_columns(cols: &[SparseVec], v: &SparseVec) -> SparseVec {
    let mut acc = SparseVec::zero();
    for (j, c) in v.iter() {
        acc = acc.add_scaled(c, &cols[*j]);
    }
    acc
}

/// Basis of the kernel of the map `Z^cols.len() → Z^n` with the given columns.
pub fn kernel_of_columns(cols: &[SparseVec], target_dim: usize) -> Lattice {
    let mut e = Echelon::new(target_dim, true);
    for c in cols {
        e.push(c.clone());
    }
    Lattice::from_generators(cols.len(), e.syzygies().iter().cloned())
}

/// `{x ∈ Z^cols.len() : Σ x_j cols[j] ∈ target}`.
pub fn preimage(cols: &[SparseVec], target: &Lattice) -> Lattice {
    let m = cols.len();
    let mut e = Echelon::new(target.dim(), true);
    for c in cols {
        e.push(c.clone());
    }
    for b in target.basis() {
        e.push(b.clone());
    }
    Lattice::from_generators(m, e.syzygies().iter().map(|s| s.slice(0, m)))
}

/// Expresses `v` as an integer combination of `gens`, if possible.
pub fn solve(gens: &[SparseVec], dim: usize, v: &SparseVec) -> Option<SparseVec> {
    let mut e = Echelon::new(dim, true);
    for g in gens {
        e.push(g.clone());
    }
    e.solve(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> SparseVec {
        SparseVec::from_i64(x)
    }

    #[test]
    fn echelon_is_canonical() {
        let a = Lattice::from_generators(2, vec![v(&[2, 4]), v(&[6, 8])]);
        let b = Lattice::from_generators(2, vec![v(&[2, 0]), v(&[0, 4])]);
        assert_eq!(a, b);
        assert_eq!(a.rank(), 2);
        assert!(a.contains(&v(&[4, 4])));
        assert!(!a.contains(&v(&[1, 0])));
    }

    #[test]
    fn reduction_reaches_every_pivot_column() {
        let a = Lattice::from_generators(
            5,
            vec![v(&[1, 0, 0, -460, 920]), v(&[0, 1, 0, -220, 440]), v(&[0, 0, 1, 17, -29]), v(&[0, 0, 0, 20, -40])],
        );
        let b = Lattice::from_generators(
            5,
            vec![v(&[1, 0, 0, 0, 0]), v(&[0, 1, 0, 0, 0]), v(&[0, 0, 1, 17, -29]), v(&[0, 0, 0, 20, -40])],
        );
        assert_eq!(a, b);
        let c = Lattice::from_generators(3, vec![v(&[1, 3, 5]), v(&[0, 2, 7]), v(&[0, 0, 3])]);
        assert_eq!(c.basis(), &[v(&[1, 1, 1]), v(&[0, 2, 1]), v(&[0, 0, 3])]);
    }

    #[test]
    fn kernel_and_preimage() {
        // columns (1,1), (2,2), (0,1)
        let cols = vec![v(&[1, 1]), v(&[2, 2]), v(&[0, 1])];
        let k = kernel_of_columns(&cols, 2);
        assert_eq!(k.rank(), 1);
        assert!(k.contains(&v(&[2, -1, 0])));
        let pre = preimage(&[v(&[3])], &Lattice::from_generators(1, vec![v(&[6])]));
        assert_eq!(pre, Lattice::from_generators(1, vec![v(&[2])]));
    }

    #[test]
    fn solve_returns_certificate() {
        let gens = vec![v(&[2, 6]), v(&[4, 8])];
        let x = solve(&gens, 2, &v(&[2, 6])).unwrap();
        assert_eq!(apply_columns(&gens, &x), v(&[2, 6]));
        assert!(solve(&gens, 2, &v(&[1, 0])).is_none());
    }

    #[test]
    fn intersection_of_multiples() {
        let a = Lattice::from_generators(1, vec![v(&[4])]);
        let b = Lattice::from_generators(1, vec![v(&[6])]);
        assert_eq!(a.intersection(&b), Lattice::from_generators(1, vec![v(&[12])]));
        assert_eq!(a.sum(&b), Lattice::from_generators(1, vec![v(&[2])]));
    }
}
