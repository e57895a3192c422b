//! Finitely generated abelian groups given by presentations, and maps between them.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integer::Integer;
use crate::lattice::{apply_columns, preimage, Lattice};
use crate::matrix::IntMatrix;
use crate::snf::elementary_divisors;
use crate::sparse::SparseVec;
use crate::subquotient::Subquotient;

/// Invariant-factor form `Z^free_rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_k` with `d₁ | d₂ | …` and every `dᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Canonical {
    pub free_rank: usize,
    pub invariant_factors: Vec<Integer>,
}

impl Canonical {
    pub fn trivial() -> Canonical {
        Canonical { free_rank: 0, invariant_factors: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn torsion_order(&self) -> Integer {
        self.invariant_factors.iter().cloned().product()
    }

    /// Builds the canonical form of `Z^free_rank ⊕ ⊕ Z/orders[i]`; orders 0 count as
    /// free summands and orders ±1 vanish.
    pub fn from_cyclic(free_rank: usize, orders: &[Integer]) -> Canonical {
        FgAbGroup::from_cyclic(free_rank, orders).canonical().clone()
    }
}

impl fmt::Display for Canonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// The cokernel of a relation matrix: `generators` rows, one column per relator.
#[derive(Clone)]
pub struct FgAbGroup {
    generators: usize,
    relations: IntMatrix,
    canonical: OnceLock<Canonical>,
    lattice: OnceLock<Lattice>,
}

impl FgAbGroup {
    pub fn new(generators: usize, relations: IntMatrix) -> Result<FgAbGroup> {
        if relations.rows() != generators {
            return Err(Error::DimensionMismatch(format!(
                "relation matrix has {} rows for {generators} generators",
                relations.rows()
            )));
        }
        Ok(FgAbGroup::from_parts(generators, relations))
    }

    fn from_parts(generators: usize, relations: IntMatrix) -> FgAbGroup {
        FgAbGroup { generators, relations, canonical: OnceLock::new(), lattice: OnceLock::new() }
    }

    /// `Z^generators / span(relators)`.
    pub fn from_relators(generators: usize, relators: &[SparseVec]) -> FgAbGroup {
        FgAbGroup::from_parts(generators, IntMatrix::from_columns(generators, relators))
    }

    pub fn free(rank: usize) -> FgAbGroup {
        FgAbGroup::from_parts(rank, IntMatrix::zeros(rank, 0))
    }

    pub fn trivial() -> FgAbGroup {
        FgAbGroup::free(0)
    }

    /// `Z/m`; `m = 0` gives `Z`.
    pub fn cyclic(m: impl Into<Integer>) -> FgAbGroup {
        let m = m.into();
        if m.is_zero() {
            FgAbGroup::free(1)
        } else {
            FgAbGroup::from_parts(1, IntMatrix::diagonal(1, 1, &[m]))
        }
    }

    pub fn from_cyclic(free_rank: usize, orders: &[Integer]) -> FgAbGroup {
        let n = free_rank + orders.len();
        let relators: Vec<SparseVec> = orders
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(k, d)| SparseVec::from_pairs([(free_rank + k, d.clone())]))
            .collect();
        FgAbGroup::from_relators(n, &relators)
    }

    pub fn from_canonical(c: &Canonical) -> FgAbGroup {
        let g = FgAbGroup::from_cyclic(c.free_rank, &c.invariant_factors);
        let _ = g.canonical.set(c.clone());
        g
    }

    #[inline]
    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn relation_lattice(&self) -> &Lattice {
        self.lattice
            .get_or_init(|| Lattice::from_generators(self.generators, self.relations.columns()))
    }

    pub fn canonical(&self) -> &Canonical {
        self.canonical.get_or_init(|| {
            let lat = self.relation_lattice();
            let rank = lat.rank();
            let basis = IntMatrix::from_columns(self.generators, lat.basis());
            let divisors = elementary_divisors(&basis);
            debug_assert_eq!(divisors.len(), rank);
            Canonical {
                free_rank: self.generators - rank,
                invariant_factors: divisors.into_iter().filter(|d| !d.is_one()).collect(),
            }
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.relation_lattice().rank() == self.generators && self.canonical().is_trivial()
    }

    /// Torsion-free up to isomorphism.
    pub fn is_free(&self) -> bool {
        self.canonical().invariant_factors.is_empty()
    }

    /// Presented with no nonzero relations.
    pub fn is_free_presentation(&self) -> bool {
        self.relation_lattice().is_zero()
    }

    pub fn is_isomorphic(&self, other: &FgAbGroup) -> bool {
        self.canonical() == other.canonical()
    }

    /// Whether `v` (a generator combination) is zero in the group.
    pub fn is_zero_element(&self, v: &SparseVec) -> bool {
        self.relation_lattice().contains(v)
    }

    pub fn as_subquotient(&self) -> Subquotient {
        Subquotient::new(Lattice::full(self.generators), self.relation_lattice().clone())
    }

    /// Direct sum with the canonical injections and projections.
    pub fn direct_sum(parts: &[FgAbGroup]) -> DirectSum {
        let blocks: Vec<&IntMatrix> = parts.iter().map(|g| &g.relations).collect();
        let sum = FgAbGroup::from_parts(
            parts.iter().map(|g| g.generators).sum(),
            IntMatrix::block_diagonal(&blocks),
        );
        let mut injections = Vec::new();
        let mut projections = Vec::new();
        let mut offset = 0;
        for g in parts {
            let mut inj = IntMatrix::zeros(sum.generators, g.generators);
            for k in 0..g.generators {
                inj[(offset + k, k)] = Integer::ONE;
            }
            projections.push(AbMap::unchecked(sum.clone(), g.clone(), inj.transpose()));
            injections.push(AbMap::unchecked(g.clone(), sum.clone(), inj));
            offset += g.generators;
        }
        DirectSum { sum, injections, projections }
    }

    /// `G^k`.
    pub fn power(&self, k: usize) -> FgAbGroup {
        FgAbGroup::direct_sum(&vec![self.clone(); k]).sum
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self.canonical(), f)
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({} gens, {} relators ≅ {})", self.generators, self.relations.cols(), self)
    }
}

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub sum: FgAbGroup,
    pub injections: Vec<AbMap>,
    pub projections: Vec<AbMap>,
}

/// A homomorphism given on generators: column `j` is the image of source generator `j`.
#[derive(Clone, Debug)]
pub struct AbMap {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl AbMap {
    /// Checks shapes and that every source relator maps to a target relation.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<AbMap> {
        if matrix.rows() != target.generators || matrix.cols() != source.generators {
            return Err(Error::DimensionMismatch(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generators,
                source.generators
            )));
        }
        let map = AbMap { source, target, matrix };
        if let Some(relator) = map.violated_relator() {
            return Err(Error::IllDefinedMap { relator });
        }
        Ok(map)
    }

    pub(crate) fn unchecked(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> AbMap {
        debug_assert_eq!((matrix.rows(), matrix.cols()), (target.generators, source.generators));
        AbMap { source, target, matrix }
    }

    /// Index of a source relator whose image is not a target relation.
    pub fn violated_relator(&self) -> Option<usize> {
        let lat = self.target.relation_lattice();
        let rel = &self.source.relations;
        (0..rel.cols()).find(|&k| !lat.contains(&self.matrix.apply(&rel.column(k))))
    }

    pub fn identity(g: &FgAbGroup) -> AbMap {
        AbMap::unchecked(g.clone(), g.clone(), IntMatrix::identity(g.generators))
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> AbMap {
        AbMap::unchecked(source.clone(), target.clone(), IntMatrix::zeros(target.generators, source.generators))
    }

    /// Multiplication by an integer.
    pub fn scalar(g: &FgAbGroup, c: impl Into<Integer>) -> AbMap {
        AbMap::unchecked(g.clone(), g.clone(), IntMatrix::identity(g.generators).scale(&c.into()))
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        self.matrix.columns()
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        self.matrix.apply(v)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AbMap) -> Result<AbMap> {
        if other.source.generators != self.target.generators {
            return Err(Error::DimensionMismatch("composition of incompatible maps".into()));
        }
        Ok(AbMap::unchecked(self.source.clone(), other.target.clone(), other.matrix.mul(&self.matrix)?))
    }

    pub fn add(&self, other: &AbMap) -> Result<AbMap> {
        Ok(AbMap::unchecked(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix)?))
    }

    pub fn neg(&self) -> AbMap {
        AbMap::unchecked(self.source.clone(), self.target.clone(), self.matrix.neg())
    }

    pub fn is_zero(&self) -> bool {
        let lat = self.target.relation_lattice();
        (0..self.matrix.cols()).all(|j| lat.contains(&self.matrix.column(j)))
    }

    /// Equality as homomorphisms (generator images agree modulo relations).
    pub fn equals(&self, other: &AbMap) -> bool {
        self.matrix.rows() == other.matrix.rows()
            && self.matrix.cols() == other.matrix.cols()
            && self.matrix.sub(&other.matrix).map(|d| {
                let lat = self.target.relation_lattice();
                (0..d.cols()).all(|j| lat.contains(&d.column(j)))
            }) == Ok(true)
    }

    /// `{x : f(x) ∈ relations}` as a lattice in source generator coordinates.
    pub fn kernel_lattice(&self) -> Lattice {
        preimage(&self.columns(), self.target.relation_lattice())
    }

    /// Image plus target relations, in target generator coordinates.
    pub fn image_lattice(&self) -> Lattice {
        self.target.relation_lattice().add_generators(self.columns())
    }

    pub fn kernel(&self) -> (FgAbGroup, AbMap) {
        let sq = Subquotient::new(self.kernel_lattice(), self.source.relation_lattice().clone());
        let k = sq.to_group().clone();
        let incl = IntMatrix::from_columns(self.source.generators, sq.sub().basis());
        (k.clone(), AbMap::unchecked(k, self.source.clone(), incl))
    }

    pub fn cokernel(&self) -> (FgAbGroup, AbMap) {
        let rel = self.target.relations.hstack(&self.matrix).expect("row counts agree");
        let c = FgAbGroup::from_parts(self.target.generators, rel);
        let proj = AbMap::unchecked(self.target.clone(), c.clone(), IntMatrix::identity(self.target.generators));
        (c, proj)
    }

    /// Image group with the factorization `source ↠ image ↪ target`.
    pub fn image(&self) -> Image {
        let sq = Subquotient::new(self.image_lattice(), self.target.relation_lattice().clone());
        let group = sq.to_group().clone();
        let incl = AbMap::unchecked(
            group.clone(),
            self.target.clone(),
            IntMatrix::from_columns(self.target.generators, sq.sub().basis()),
        );
        let cols: Vec<SparseVec> = self
            .columns()
            .iter()
            .map(|c| sq.coords(c).expect("image column lies in the image"))
            .collect();
        let coimage = AbMap::unchecked(self.source.clone(), group.clone(), IntMatrix::from_columns(group.generators, &cols));
        Image { group, coimage, inclusion: incl }
    }

    pub fn is_mono(&self) -> bool {
        self.kernel_lattice() == *self.source.relation_lattice()
    }

    pub fn is_epi(&self) -> bool {
        self.image_lattice().rank() == self.target.generators
            && self.image_lattice() == Lattice::full(self.target.generators)
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// Block diagonal map between direct sums.
    pub fn direct_sum(maps: &[AbMap]) -> AbMap {
        let src = FgAbGroup::direct_sum(&maps.iter().map(|m| m.source.clone()).collect::<Vec<_>>()).sum;
        let tgt = FgAbGroup::direct_sum(&maps.iter().map(|m| m.target.clone()).collect::<Vec<_>>()).sum;
        let blocks: Vec<&IntMatrix> = maps.iter().map(|m| &m.matrix).collect();
        AbMap::unchecked(src, tgt, IntMatrix::block_diagonal(&blocks))
    }

    /// Applies the map to a lattice of source vectors.
    pub fn map_lattice(&self, lat: &Lattice) -> Lattice {
        Lattice::from_generators(self.target.generators, lat.basis().iter().map(|v| apply_columns(&self.columns(), v)))
    }
}

#[derive(Clone, Debug)]
pub struct Image {
    pub group: FgAbGroup,
    pub coimage: AbMap,
    pub inclusion: AbMap,
}

/// Verifies exactness of `A --f--> B --g--> C` at `B`.
pub fn exact_at(f: &AbMap, g: &AbMap) -> bool {
    f.image_lattice() == g.kernel_lattice()
}
