//! Finite truncations of the sphere-cluster towers and the triangular matrices
//! that obstruct uniform row bounds.
//!
//! Stage `j` of a cluster tower is the cellular complex of a wedge of `j + 1`
//! spheres of dimension `k` with coefficients in `G`: `Z` in degree 0 and
//! `G^{j+1}` in degree `k`, with zero differentials.

use serde::Serialize;

use crate::complexes::{uct_verify, ChainComplex, ChainMap};
use crate::diagram::{ComplexDiagram, Diagram, GroupDiagram, NerveModel};
use crate::error::{Error, Result};
use crate::group::{AbMap, Canonical, FgAbGroup};
use crate::holim::{holim_complex_with, homology_diagram};
use crate::integer::Integer;
use crate::matrix::IntMatrix;
use crate::poset::FinitePoset;
use crate::sparse::SparseVec;

#[derive(Clone, Debug)]
pub struct ClusterTower {
    pub k: usize,
    pub n: usize,
    pub g: FgAbGroup,
    pub diagram: ComplexDiagram,
}

fn stage(k: usize, g: &FgAbGroup, j: usize) -> ChainComplex {
    let mut groups = vec![FgAbGroup::trivial(); k + 1];
    groups[0] = FgAbGroup::free(1);
    groups[k] = g.power(j + 1);
    let differentials = (1..=k).map(|m| AbMap::zero(&groups[m], &groups[m - 1])).collect();
    ChainComplex::new(0, groups, differentials).expect("zero differentials")
}

/// `[I | 0]`: the projection `G^{j+2} → G^{j+1}` deleting the last summand.
fn drop_last(g: &FgAbGroup, j: usize) -> IntMatrix {
    let w = g.generators();
    let mut m = IntMatrix::zeros(w * (j + 1), w * (j + 2));
    for r in 0..w * (j + 1) {
        m[(r, r)] = Integer::ONE;
    }
    m
}

pub fn cluster_tower(k: usize, n: usize, g: &FgAbGroup) -> Result<ClusterTower> {
    if k < 2 {
        return Err(Error::Invalid(format!("sphere dimension must be at least 2, got {k}")));
    }
    let poset = FinitePoset::chain(n);
    let stages: Vec<ChainComplex> = (0..=n).map(|j| stage(k, g, j)).collect();
    let maps = (0..n)
        .map(|j| {
            let mut comps = vec![IntMatrix::zeros(0, 0); k + 1];
            comps[0] = IntMatrix::identity(1);
            comps[k] = drop_last(g, j);
            ChainMap::new(stages[j + 1].clone(), stages[j].clone(), comps).expect("commutes with zero differentials")
        })
        .collect();
    let diagram = Diagram::new(poset, stages, maps)?;
    Ok(ClusterTower { k, n, g: g.clone(), diagram })
}

/// `G ← G² ← … ← G^{n+1}` with the projections deleting the last summand.
pub fn truncated_p(g: &FgAbGroup, n: usize) -> GroupDiagram {
    let groups: Vec<FgAbGroup> = (0..=n).map(|j| g.power(j + 1)).collect();
    let maps = (0..n)
        .map(|j| AbMap::new(groups[j + 1].clone(), groups[j].clone(), drop_last(g, j)).expect("projection"))
        .collect();
    Diagram::new(FinitePoset::chain(n), groups, maps).expect("projections compose")
}

/// Whether `H_k` of the tower has the groups and bonding matrices of the truncated `P(G)`.
pub fn matches_truncated_p(t: &ClusterTower) -> bool {
    let h = homology_diagram(&t.diagram, t.k as i64);
    let p = truncated_p(&t.g, t.n);
    let levels = (0..=t.n).all(|j| h.object(j).relation_lattice() == p.object(j).relation_lattice());
    let maps = h.generating().iter().zip(p.generating()).all(|(a, b)| a.matrix().to_rows() == b.matrix().to_rows());
    levels && maps
}

/// `H_deg` of the homotopy limit of the truncated tower, through the model
/// with one column per stage and one per bonding map.
pub fn truncated_strong_homology(t: &ClusterTower, deg: i64) -> FgAbGroup {
    holim_complex_with(&t.diagram, NerveModel::Hasse).expect("chains are free on their covering relations").homology(deg)
}

/// `lim^s H_deg` of the tower for `s = 0, 1`.
pub fn tower_lims(t: &ClusterTower, deg: i64) -> Vec<FgAbGroup> {
    homology_diagram(&t.diagram, deg).lims_with(NerveModel::Hasse, 1).expect("chains are free on their covering relations")
}

#[derive(Clone, Debug)]
pub struct TriangularWitness {
    pub n: usize,
    pub b: FgAbGroup,
    pub c: SparseVec,
}

impl TriangularWitness {
    /// `b_{ij} = c` for `i ≤ j`, zero otherwise.
    pub fn entry(&self, i: usize, j: usize) -> SparseVec {
        if i <= j {
            self.c.clone()
        } else {
            SparseVec::zero()
        }
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        (0..self.n).all(|j| self.b.is_zero_element(&self.entry(i, j)))
    }
}

pub fn interchange_witness(n: usize, b: &FgAbGroup, c: SparseVec) -> Result<TriangularWitness> {
    if c.support_end() > b.generators() || b.is_zero_element(&c) {
        return Err(Error::Invalid("the witness entry must be a nonzero element of B".into()));
    }
    Ok(TriangularWitness { n, b: b.clone(), c })
}

/// Whether every row with index at least `s` vanishes.
pub fn bounded_image_test(w: &TriangularWitness, s: usize) -> bool {
    (s..w.n).all(|i| w.row_is_zero(i))
}

#[derive(Clone, Debug, Serialize)]
pub struct StageUct {
    pub stage: usize,
    pub homology: Vec<Canonical>,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct UctGapReport {
    pub k: usize,
    pub n: usize,
    pub coefficients: Canonical,
    pub stages: Vec<StageUct>,
    pub stagewise_exact: bool,
    pub failing_bounds: Vec<usize>,
    pub first_passing_bound: Option<usize>,
}

/// Stagewise universal coefficient checks for the integral cluster stages with
/// coefficients in a free `G`, next to the row bounds the witness defeats.
pub fn uct_gap_report(k: usize, n: usize, g: &FgAbGroup) -> Result<UctGapReport> {
    if !g.is_free() || g.is_trivial() {
        return Err(Error::Invalid("coefficients must be a nonzero free group".into()));
    }
    let integral = cluster_tower(k, n, &FgAbGroup::free(1))?;
    let mut stages = Vec::new();
    for j in 0..=n {
        let c = integral.diagram.object(j);
        let mut exact = true;
        let mut homology = Vec::new();
        for deg in 0..=k as i64 + 1 {
            let rep = uct_verify(c, g, deg)?;
            exact &= rep.sequence_exact;
            homology.push(rep.middle.clone());
        }
        stages.push(StageUct { stage: j, homology, exact });
    }
    let w = interchange_witness(n, g, SparseVec::unit(0))?;
    let failing_bounds: Vec<usize> = (0..=n).filter(|&s| !bounded_image_test(&w, s)).collect();
    let first_passing_bound = (0..=n).find(|&s| bounded_image_test(&w, s));
    Ok(UctGapReport {
        k,
        n,
        coefficients: g.canonical().clone(),
        stagewise_exact: stages.iter().all(|s| s.exact),
        stages,
        failing_bounds,
        first_passing_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cluster_shapes() {
        let t = cluster_tower(2, 0, &FgAbGroup::free(1)).unwrap();
        assert_eq!(t.diagram.object(0).homology(2).to_string(), "Z");
        let t = cluster_tower(2, 3, &FgAbGroup::free(1)).unwrap();
        assert!(matches_truncated_p(&t));
        let t = cluster_tower(2, 2, &FgAbGroup::cyclic(2)).unwrap();
        assert!(matches_truncated_p(&t));
        let h = homology_diagram(&t.diagram, 2);
        assert_eq!(h.object(2).to_string(), "Z/2 + Z/2 + Z/2");
        assert!(cluster_tower(1, 2, &FgAbGroup::free(1)).is_err());
    }

    #[test]
    fn strong_homology_of_truncations() {
        let t = cluster_tower(2, 3, &FgAbGroup::free(1)).unwrap();
        assert_eq!(truncated_strong_homology(&t, 2).to_string(), "Z^4");
        assert!(truncated_strong_homology(&t, 1).is_trivial());
        assert_eq!(truncated_strong_homology(&t, 0).to_string(), "Z");
        let lims = tower_lims(&t, 2);
        assert_eq!(lims[0].to_string(), "Z^4");
        assert!(lims[1].is_trivial());
    }

    #[test]
    fn row_bounds() {
        let z = FgAbGroup::free(1);
        let w = interchange_witness(4, &z, SparseVec::unit(0)).unwrap();
        assert!(!bounded_image_test(&w, 2));
        assert!(bounded_image_test(&w, 4));
        let w1 = interchange_witness(1, &z, SparseVec::unit(0)).unwrap();
        assert!(!bounded_image_test(&w1, 0));
        assert!(interchange_witness(3, &FgAbGroup::cyclic(2), SparseVec::from_i64(&[2])).is_err());
    }

    #[test]
    fn gap_reports() {
        let rep = uct_gap_report(2, 4, &FgAbGroup::free(2)).unwrap();
        assert!(rep.stagewise_exact);
        assert_eq!(rep.failing_bounds, vec![0, 1, 2, 3]);
        assert_eq!(rep.first_passing_bound, Some(4));
        let rep = uct_gap_report(2, 0, &FgAbGroup::free(1)).unwrap();
        assert!(rep.stagewise_exact);
        assert!(rep.failing_bounds.is_empty());
    }
}
