//! Bounded chain complexes, coefficient change and the universal coefficient sequence.

use std::sync::OnceLock;

use serde::Serialize;

use crate::bifunctor::{injective_relations, tensor_presented, tor1};
use crate::cochain::Cochain;
use crate::error::{Error, Result};
use crate::grading::{chain_to_cochain, cochain_degree};
use crate::group::{AbMap, Canonical, FgAbGroup};
use crate::lattice::{preimage, solve};
use crate::matrix::IntMatrix;
use crate::sparse::SparseVec;
use crate::subquotient::{exact_at, images_under, Subquotient};

/// `C_lo ← C_{lo+1} ← … ← C_hi`; `differentials[k]` is `d_{lo+k+1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    lo: i64,
    groups: Vec<FgAbGroup>,
    differentials: Vec<AbMap>,
    cochain: OnceLock<Cochain>,
}

impl ChainComplex {
    /// Validates shapes and `d∘d = 0`.
    pub fn new(lo: i64, groups: Vec<FgAbGroup>, differentials: Vec<AbMap>) -> Result<ChainComplex> {
        let expected = groups.len().saturating_sub(1);
        if differentials.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "{} groups need {expected} differentials, got {}",
                groups.len(),
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            let n = lo + k as i64 + 1;
            if d.source().generators() != groups[k + 1].generators()
                || d.target().generators() != groups[k].generators()
            {
                return Err(Error::DimensionMismatch(format!("differential d_{n} has the wrong shape")));
            }
        }
        for k in 1..differentials.len() {
            if !differentials[k].then(&differentials[k - 1])?.is_zero() {
                return Err(Error::DifferentialSquareNonzero { degree: lo + k as i64 });
            }
        }
        Ok(ChainComplex { lo, groups, differentials, cochain: OnceLock::new() })
    }

    pub fn empty() -> ChainComplex {
        ChainComplex { lo: 0, groups: Vec::new(), differentials: Vec::new(), cochain: OnceLock::new() }
    }

    /// Builds a complex of free groups from differential matrices `d_{lo+1}, …`.
    pub fn free(lo: i64, ranks: &[usize], matrices: &[IntMatrix]) -> Result<ChainComplex> {
        let groups: Vec<FgAbGroup> = ranks.iter().map(|&r| FgAbGroup::free(r)).collect();
        let mut diffs = Vec::new();
        for (k, m) in matrices.iter().enumerate() {
            let (Some(src), Some(tgt)) = (groups.get(k + 1), groups.get(k)) else {
                return Err(Error::DimensionMismatch("too many differentials".into()));
            };
            diffs.push(AbMap::new(src.clone(), tgt.clone(), m.clone())?);
        }
        ChainComplex::new(lo, groups, diffs)
    }

    /// A single group placed in degree `n`.
    pub fn concentrated(n: i64, g: FgAbGroup) -> ChainComplex {
        ChainComplex::new(n, vec![g], Vec::new()).expect("one group")
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.groups.len() as i64 - 1
    }

    pub fn groups(&self) -> &[FgAbGroup] {
        &self.groups
    }

    pub fn differentials(&self) -> &[AbMap] {
        &self.differentials
    }

    fn index(&self, n: i64) -> Option<usize> {
        if self.is_empty() || n < self.lo || n > self.hi() {
            None
        } else {
            Some((n - self.lo) as usize)
        }
    }

    /// `C_n`, trivial outside the support.
    pub fn group(&self, n: i64) -> FgAbGroup {
        self.index(n).map_or_else(FgAbGroup::trivial, |k| self.groups[k].clone())
    }

    pub fn rank(&self, n: i64) -> usize {
        self.index(n).map_or(0, |k| self.groups[k].generators())
    }

    /// `d_n : C_n → C_{n−1}`, zero outside the support.
    pub fn differential(&self, n: i64) -> AbMap {
        match (self.index(n), self.index(n - 1)) {
            (Some(k), Some(_)) => self.differentials[k - 1].clone(),
            _ => AbMap::zero(&self.group(n), &self.group(n - 1)),
        }
    }

    pub fn as_cochain(&self) -> &Cochain {
        self.cochain.get_or_init(|| chain_to_cochain(self))
    }

    /// `H_n` as a subquotient of the generator lattice of `C_n`.
    pub fn homology_subquotient(&self, n: i64) -> Subquotient {
        if self.index(n).is_none() {
            return Subquotient::zero(0);
        }
        self.as_cochain().cohomology(cochain_degree(n))
    }

    pub fn homology(&self, n: i64) -> FgAbGroup {
        self.homology_subquotient(n).to_group().clone()
    }

    pub fn is_levelwise_free(&self) -> bool {
        self.groups.iter().all(FgAbGroup::is_free_presentation)
    }

    fn require_free(&self) -> Result<()> {
        match self.groups.iter().position(|g| !g.is_free_presentation()) {
            Some(k) => Err(Error::NonFreeLevel { degree: self.lo + k as i64 }),
            None => Ok(()),
        }
    }

    /// `C ⊗ G` for a levelwise free `C`: degree `n` is `G^{rank C_n}`, generator
    /// `(c, j)` at index `c·gens(G) + j`, differentials `d ⊗ 1`.
    pub fn tensor_with(&self, g: &FgAbGroup) -> Result<ChainComplex> {
        self.require_free()?;
        let ng = g.generators();
        let groups: Vec<FgAbGroup> = self.groups.iter().map(|c| g.power(c.generators())).collect();
        let id = IntMatrix::identity(ng);
        let diffs = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, d)| AbMap::new(groups[k + 1].clone(), groups[k].clone(), d.matrix().kronecker(&id)))
            .collect::<Result<Vec<_>>>()?;
        ChainComplex::new(self.lo, groups, diffs)
    }

    /// Relabels degrees: degree `n` of the result is degree `n − k` of `self`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        ChainComplex {
            lo: self.lo + k,
            groups: self.groups.clone(),
            differentials: self.differentials.clone(),
            cochain: OnceLock::new(),
        }
    }

    pub fn direct_sum(parts: &[ChainComplex]) -> ChainComplex {
        let nonempty: Vec<&ChainComplex> = parts.iter().filter(|c| !c.is_empty()).collect();
        if nonempty.is_empty() {
            return ChainComplex::empty();
        }
        let lo = nonempty.iter().map(|c| c.lo).min().expect("nonempty");
        let hi = nonempty.iter().map(|c| c.hi()).max().expect("nonempty");
        let groups: Vec<FgAbGroup> = (lo..=hi)
            .map(|n| FgAbGroup::direct_sum(&parts.iter().map(|c| c.group(n)).collect::<Vec<_>>()).sum)
            .collect();
        let diffs =
            (lo + 1..=hi).map(|n| AbMap::direct_sum(&parts.iter().map(|c| c.differential(n)).collect::<Vec<_>>())).collect();
        ChainComplex::new(lo, groups, diffs).expect("sum of complexes is a complex")
    }
}

/// A chain map; `components[k]` acts in source degree `lo + k` over the source support.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    components: Vec<IntMatrix>,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, components: Vec<IntMatrix>) -> Result<ChainMap> {
        if components.len() != source.groups.len() {
            return Err(Error::DimensionMismatch(format!(
                "chain map needs {} components, got {}",
                source.groups.len(),
                components.len()
            )));
        }
        let map = ChainMap { source, target, components };
        for n in map.degrees() {
            let f = map.component(n)?;
            let lhs = map.source.differential(n).then(&map.component(n - 1)?)?;
            let rhs = f.then(&map.target.differential(n))?;
            if !lhs.equals(&rhs) {
                return Err(Error::NotChainMap { degree: n, context: String::new() });
            }
        }
        Ok(map)
    }

    pub fn identity(c: &ChainComplex) -> ChainMap {
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            components: c.groups.iter().map(|g| IntMatrix::identity(g.generators())).collect(),
        }
    }

    fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        if self.source.is_empty() {
            #[allow(clippy::reversed_empty_ranges)]
            return 0..=-1;
        }
        self.source.lo..=self.source.hi()
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn matrix(&self, n: i64) -> IntMatrix {
        match self.source.index(n) {
            Some(k) => self.components[k].clone(),
            None => IntMatrix::zeros(self.target.rank(n), self.source.rank(n)),
        }
    }

    /// Component in degree `n` as a checked group homomorphism.
    pub fn component(&self, n: i64) -> Result<AbMap> {
        AbMap::new(self.source.group(n), self.target.group(n), self.matrix(n))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ChainMap) -> Result<ChainMap> {
        let components = self
            .degrees()
            .map(|n| next.matrix(n).mul(&self.matrix(n)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChainMap { source: self.source.clone(), target: next.target.clone(), components })
    }

    pub fn equals(&self, other: &ChainMap) -> bool {
        self.degrees().all(|n| match (self.component(n), other.component(n)) {
            (Ok(a), Ok(b)) => a.equals(&b),
            _ => false,
        })
    }

    /// Induced map `H_n(source) → H_n(target)`.
    pub fn on_homology(&self, n: i64) -> AbMap {
        let src = self.source.homology_subquotient(n);
        let tgt = self.target.homology_subquotient(n);
        let images = images_under(&src, &self.matrix(n).columns());
        src.abmap_to(&tgt, &images)
    }
}

/// The universal coefficient sequence `0 → H_n(C)⊗G → H_n(C⊗G) → Tor₁(H_{n−1}(C), G) → 0`.
#[derive(Clone, Debug, Serialize)]
pub struct UctReport {
    pub degree: i64,
    #[serde(skip)]
    pub pairing: AbMap,
    pub tensor_term: Canonical,
    pub middle: Canonical,
    pub mono: bool,
    pub cokernel: Canonical,
    pub tor_term: Canonical,
    /// Image of the pairing equals the kernel of the connecting map.
    pub exact_middle: bool,
    /// The connecting map hits exactly the Tor subgroup of `H_{n−1}(C)^q`.
    pub onto_tor: bool,
    pub sequence_exact: bool,
}

/// The pairing `[z]⊗g ↦ [z⊗g]`, together with the subquotients it connects.
fn pairing_parts(c: &ChainComplex, g: &FgAbGroup, n: i64) -> Result<(AbMap, ChainComplex, Subquotient)> {
    let cg = c.tensor_with(g)?;
    let h = c.homology_subquotient(n);
    let hg = cg.homology_subquotient(n);
    let ng = g.generators();
    let hgroup = h.to_group();
    let tensor = tensor_presented(hgroup, g);
    let mut cols = Vec::with_capacity(hgroup.generators() * ng);
    for z in h.generators() {
        for j in 0..ng {
            let image = SparseVec::from_pairs(z.iter().map(|(c, v)| (c * ng + j, v.clone())));
            cols.push(hg.coords(&image).expect("a cycle tensor an element is a cycle"));
        }
    }
    let target = hg.to_group().clone();
    let pairing = AbMap::new(tensor, target.clone(), IntMatrix::from_columns(target.generators(), &cols))?;
    Ok((pairing, cg, hg))
}

pub fn uct_pairing(c: &ChainComplex, g: &FgAbGroup, n: i64) -> Result<AbMap> {
    Ok(pairing_parts(c, g, n)?.0)
}

/// Verifies the universal coefficient sequence in degree `n`.
///
/// The right-hand map is the connecting homomorphism of
/// `0 → C⊗Z^q → C⊗Z^m → C⊗G → 0` for a free resolution `Z^q → Z^m` of `G`;
/// its target is `H_{n−1}(C)^q`, inside which `Tor₁(H_{n−1}(C), G)` is the kernel
/// of the map induced by the resolution.
pub fn uct_verify(c: &ChainComplex, g: &FgAbGroup, n: i64) -> Result<UctReport> {
    let (pairing, cg, hg) = pairing_parts(c, g, n)?;
    let m = g.generators();
    let rel = injective_relations(g);
    let q = rel.cols();
    let prev = n - 1;
    let rank_prev = c.rank(prev);

    // Columns of 1 ⊗ R : C_{n−1}⊗Z^q → C_{n−1}⊗Z^m.
    let lift_cols: Vec<SparseVec> = (0..rank_prev)
        .flat_map(|cc| {
            let rel = &rel;
            (0..q).map(move |k| SparseVec::from_pairs((0..m).map(|j| (cc * m + j, rel[(j, k)].clone()))))
        })
        .collect();
    let dn = cg.differential(n);
    let connecting: Vec<SparseVec> = hg
        .generators()
        .iter()
        .map(|x| {
            let dx = dn.apply(x);
            solve(&lift_cols, rank_prev * m, &dx).expect("boundary of a cycle mod relations lifts")
        })
        .collect();

    let cq = c.tensor_with(&FgAbGroup::free(q))?;
    let cm = c.tensor_with(&FgAbGroup::free(m))?;
    let hq = cq.homology_subquotient(prev);
    let bm = cm.homology_subquotient(prev);
    let tor_sub = hq.sub().intersection(&preimage(&lift_cols, bm.quo()));
    let tor_sq = Subquotient::new(tor_sub.clone(), hq.quo().clone());

    let mono = pairing.is_mono();
    let pairing_images: Vec<SparseVec> = pairing.columns().iter().map(|c| hg.lift(c)).collect();
    let exact_middle = exact_at(&hg, &pairing_images, &hq, &connecting);
    let onto_tor = hq.quo().add_generators(connecting.iter().cloned()) == tor_sub;
    let cokernel = pairing.cokernel().0.canonical().clone();
    let tor_term = tor1(&c.homology(prev), g).canonical().clone();
    let tor_matches = tor_sq.to_group().canonical() == &tor_term && cokernel == tor_term;
    Ok(UctReport {
        degree: n,
        tensor_term: pairing.source().canonical().clone(),
        middle: hg.to_group().canonical().clone(),
        pairing,
        mono,
        cokernel,
        tor_term,
        exact_middle,
        onto_tor,
        sequence_exact: mono && exact_middle && onto_tor && tor_matches,
    })
}
