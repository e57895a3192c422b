//! Functors from finite posets, nerve cochain complexes and derived limits.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::cochain::{Cochain, CochainMap, CochainSes, LesReport, Term};
use crate::complexes::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::group::{AbMap, FgAbGroup};
use crate::integer::Integer;
use crate::lattice::Lattice;
use crate::matrix::IntMatrix;
use crate::poset::FinitePoset;
use crate::sparse::SparseVec;

/// Morphisms that can label the arrows of a diagram.
pub trait Arrow: Clone + fmt::Debug {
    type Obj: Clone + fmt::Debug;
    fn identity(o: &Self::Obj) -> Self;
    /// `next ∘ self`.
    fn then(&self, next: &Self) -> Result<Self>;
    fn same_as(&self, other: &Self) -> bool;
    fn fits(&self, source: &Self::Obj, target: &Self::Obj) -> bool;
}

impl Arrow for AbMap {
    type Obj = FgAbGroup;
    fn identity(o: &FgAbGroup) -> AbMap {
        AbMap::identity(o)
    }
    fn then(&self, next: &AbMap) -> Result<AbMap> {
        AbMap::then(self, next)
    }
    fn same_as(&self, other: &AbMap) -> bool {
        self.equals(other)
    }
    fn fits(&self, source: &FgAbGroup, target: &FgAbGroup) -> bool {
        self.source().generators() == source.generators() && self.target().generators() == target.generators()
    }
}

impl Arrow for ChainMap {
    type Obj = ChainComplex;
    fn identity(o: &ChainComplex) -> ChainMap {
        ChainMap::identity(o)
    }
    fn then(&self, next: &ChainMap) -> Result<ChainMap> {
        ChainMap::then(self, next)
    }
    fn same_as(&self, other: &ChainMap) -> bool {
        self.equals(other)
    }
    fn fits(&self, source: &ChainComplex, target: &ChainComplex) -> bool {
        same_shape(self.source(), source) && same_shape(self.target(), target)
    }
}

fn same_shape(a: &ChainComplex, b: &ChainComplex) -> bool {
    if a.is_empty() || b.is_empty() {
        return a.is_empty() == b.is_empty() || (a.lo()..=a.hi()).all(|n| a.rank(n) == 0);
    }
    let lo = a.lo().min(b.lo());
    let hi = a.hi().max(b.hi());
    (lo..=hi).all(|n| a.rank(n) == b.rank(n))
}

/// Memoized composites `D(a → c)`, filled on demand.
#[derive(Debug, Default)]
struct Composites<A>(Mutex<HashMap<(usize, usize), A>>);

impl<A: Clone> Clone for Composites<A> {
    fn clone(&self) -> Self {
        Composites(Mutex::new(self.0.lock().expect("cache lock").clone()))
    }
}

/// A functor from a finite poset: objects per element, maps per generating arrow.
#[derive(Clone, Debug)]
pub struct Diagram<A: Arrow> {
    poset: FinitePoset,
    objects: Vec<A::Obj>,
    generating: Vec<A>,
    composites: Composites<A>,
}

pub type GroupDiagram = Diagram<AbMap>;
pub type ComplexDiagram = Diagram<ChainMap>;

impl<A: Arrow> Diagram<A> {
    /// `generating[k]` labels `poset.arrows()[k]`. Checks shapes and functoriality.
    pub fn new(poset: FinitePoset, objects: Vec<A::Obj>, generating: Vec<A>) -> Result<Diagram<A>> {
        let d = Diagram::with_shapes(poset, objects, generating)?;
        d.check_functoriality()?;
        Ok(d)
    }

    /// For diagrams that are functorial by construction: checks shapes only.
    pub(crate) fn functorial(poset: FinitePoset, objects: Vec<A::Obj>, generating: Vec<A>) -> Diagram<A> {
        Diagram::with_shapes(poset, objects, generating).expect("shapes agree by construction")
    }

    fn with_shapes(poset: FinitePoset, objects: Vec<A::Obj>, generating: Vec<A>) -> Result<Diagram<A>> {
        if objects.len() != poset.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} objects for a poset with {} elements",
                objects.len(),
                poset.len()
            )));
        }
        if generating.len() != poset.arrows().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} maps for {} arrows",
                generating.len(),
                poset.arrows().len()
            )));
        }
        for (k, &(a, b)) in poset.arrows().iter().enumerate() {
            if !generating[k].fits(&objects[a], &objects[b]) {
                return Err(Error::DimensionMismatch(format!(
                    "map on {}->{} does not match its objects",
                    poset.label(a),
                    poset.label(b)
                )));
            }
        }
        Ok(Diagram { poset, objects, generating, composites: Composites(Mutex::new(HashMap::new())) })
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn objects(&self) -> &[A::Obj] {
        &self.objects
    }

    pub fn object(&self, k: usize) -> &A::Obj {
        &self.objects[k]
    }

    pub fn generating(&self) -> &[A] {
        &self.generating
    }

    /// The first generating arrow out of `a` through which `c` is reachable.
    fn first_step(&self, a: usize, c: usize) -> usize {
        self.poset
            .arrows()
            .iter()
            .position(|&(x, y)| x == a && self.poset.ge(y, c))
            .expect("comparable pairs are joined by generating arrows")
    }

    /// Objects visited by the composite that defines `along(a, c)`.
    fn canonical_path(&self, a: usize, c: usize) -> Vec<usize> {
        let mut path = vec![a];
        let mut x = a;
        while x != c {
            x = self.poset.arrows()[self.first_step(x, c)].1;
            path.push(x);
        }
        path
    }

    /// The map `D(a → c)` for `a ≥ c`.
    pub fn along(&self, a: usize, c: usize) -> A {
        assert!(self.poset.ge(a, c), "no arrow {a} -> {c}");
        if a == c {
            return A::identity(&self.objects[a]);
        }
        if let Some(f) = self.composites.0.lock().expect("cache lock").get(&(a, c)) {
            return f.clone();
        }
        let e = self.first_step(a, c);
        let b = self.poset.arrows()[e].1;
        let f = self.generating[e].then(&self.along(b, c)).expect("shapes agree");
        self.composites.0.lock().expect("cache lock").insert((a, c), f.clone());
        f
    }

    /// Checks that every path between two objects induces the same map.
    ///
    /// For each generating arrow `a → b` and each `c ≤ b`, the composite through
    /// `a → b` is compared with the canonical composite, unless the canonical one
    /// already starts with `a → b`. By induction on path length this covers every
    /// pair of parallel paths.
    fn check_functoriality(&self) -> Result<()> {
        let label = |path: Vec<usize>| {
            path.iter().map(|&k| self.poset.label(k)).collect::<Vec<_>>().join("->")
        };
        for (e, &(a, b)) in self.poset.arrows().iter().enumerate() {
            for c in 0..self.poset.len() {
                if !self.poset.ge(b, c) || self.first_step(a, c) == e {
                    continue;
                }
                let via = self.generating[e].then(&self.along(b, c))?;
                if !via.same_as(&self.along(a, c)) {
                    let mut through = vec![a];
                    through.extend(self.canonical_path(b, c));
                    return Err(Error::Functoriality { first: label(through), second: label(self.canonical_path(a, c)) });
                }
            }
        }
        Ok(())
    }

    /// Restriction to the full subposet on `objects`.
    pub fn restrict(&self, objects: &[usize]) -> Diagram<A> {
        let poset = self.poset.restrict(objects);
        let values = objects.iter().map(|&k| self.objects[k].clone()).collect();
        let maps = poset.arrows().iter().map(|&(x, y)| self.along(objects[x], objects[y])).collect();
        Diagram::functorial(poset, values, maps)
    }
}

/// Which simplices index the cosimplicial replacement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NerveModel {
    /// All strictly decreasing chains.
    #[default]
    Full,
    /// Objects and covering relations only; computes the same cohomology when
    /// the poset is free on its Hasse graph (towers, trees).
    Hasse,
}

/// Chains of each dimension up to `maxdim` for the chosen model.
pub fn model_chains(poset: &FinitePoset, model: NerveModel, maxdim: usize) -> Result<Vec<Vec<Vec<usize>>>> {
    match model {
        NerveModel::Full => Ok(poset.nerve(maxdim)),
        NerveModel::Hasse => {
            if !poset.is_hasse_free() {
                return Err(Error::Invalid("the Hasse model needs a poset that is free on its covering relations".into()));
            }
            let mut out = vec![Vec::new(); maxdim + 1];
            out[0] = (0..poset.len()).map(|k| vec![k]).collect();
            if maxdim >= 1 {
                let mut h: Vec<Vec<usize>> = poset.hasse().iter().map(|&(a, b)| vec![a, b]).collect();
                h.sort();
                out[1] = h;
            }
            Ok(out)
        }
    }
}

/// Offsets of the blocks `⊕_σ V(end σ)` in each nerve dimension.
#[derive(Clone, Debug)]
pub struct NerveLayout {
    pub chains: Vec<Vec<Vec<usize>>>,
    pub offsets: Vec<Vec<usize>>,
    pub dims: Vec<usize>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
}

impl NerveLayout {
    /// `width[k]` is the ambient size of the value at object `k`.
    pub fn new(chains: Vec<Vec<Vec<usize>>>, width: &[usize]) -> NerveLayout {
        let mut offsets = Vec::new();
        let mut dims = Vec::new();
        let mut lookup = Vec::new();
        for level in &chains {
            let mut off = Vec::with_capacity(level.len());
            let mut acc = 0;
            let mut map = HashMap::new();
            for (k, sigma) in level.iter().enumerate() {
                off.push(acc);
                acc += width[*sigma.last().expect("nonempty chain")];
                map.insert(sigma.clone(), k);
            }
            offsets.push(off);
            dims.push(acc);
            lookup.push(map);
        }
        NerveLayout { chains, offsets, dims, lookup }
    }

    pub fn maxdim(&self) -> usize {
        self.chains.len() - 1
    }

    pub fn position(&self, s: usize, sigma: &[usize]) -> Option<usize> {
        self.lookup[s].get(sigma).copied()
    }

    /// Columns of the coface map from dimension `s` to `s + 1`:
    /// `(dc)(σ) = Σ_{k≤s} (−1)^k c(σ∖i_k) + (−1)^{s+1} F(i_s → i_{s+1}) c(σ∖i_{s+1})`,
    /// where `map(a, b)` is the matrix of `F(a → b)` in ambient coordinates.
    pub fn coface(&self, s: usize, width: &[usize], map: &dyn Fn(usize, usize) -> IntMatrix) -> Vec<SparseVec> {
        let mut cols: Vec<Vec<(usize, Integer)>> = vec![Vec::new(); self.dims[s]];
        if s + 1 > self.maxdim() {
            return vec![SparseVec::zero(); self.dims[s]];
        }
        for (pos, sigma) in self.chains[s + 1].iter().enumerate() {
            let row0 = self.offsets[s + 1][pos];
            let end = sigma[s + 1];
            for k in 0..=s + 1 {
                let mut tau = sigma.clone();
                tau.remove(k);
                let Some(tpos) = self.position(s, &tau) else { continue };
                let col0 = self.offsets[s][tpos];
                let sign = if k % 2 == 0 { Integer::ONE } else { Integer::from(-1) };
                if k <= s {
                    for c in 0..width[end] {
                        cols[col0 + c].push((row0 + c, sign.clone()));
                    }
                } else {
                    let m = map(sigma[s], end);
                    for c in 0..m.cols() {
                        for r in 0..m.rows() {
                            let e = &m[(r, c)];
                            if !e.is_zero() {
                                cols[col0 + c].push((row0 + r, &sign * e));
                            }
                        }
                    }
                }
            }
        }
        cols.into_iter().map(SparseVec::from_pairs).collect()
    }

    /// Direct sum over the chains of dimension `s` of the lattices at chain ends.
    pub fn block_lattice(&self, s: usize, dim_of: &dyn Fn(usize) -> Lattice) -> Lattice {
        let mut gens = Vec::new();
        for (pos, sigma) in self.chains[s].iter().enumerate() {
            let off = self.offsets[s][pos];
            gens.extend(dim_of(*sigma.last().expect("nonempty")).basis().iter().map(|v| v.shifted(off)));
        }
        Lattice::from_generators(self.dims[s], gens)
    }

    /// A blockwise map: at each chain, `map(end)` from a source layout to this one.
    pub fn blockwise(&self, source: &NerveLayout, s: usize, map: &dyn Fn(usize) -> IntMatrix) -> Vec<SparseVec> {
        let mut cols = Vec::with_capacity(source.dims[s]);
        for (pos, sigma) in source.chains[s].iter().enumerate() {
            let end = *sigma.last().expect("nonempty");
            let tgt_off = self.offsets[s][pos];
            let m = map(end);
            for c in 0..m.cols() {
                cols.push(m.column(c).shifted(tgt_off));
            }
        }
        debug_assert_eq!(cols.len(), source.dims[s]);
        cols
    }
}

impl GroupDiagram {
    fn widths(&self) -> Vec<usize> {
        self.objects.iter().map(FgAbGroup::generators).collect()
    }

    pub fn layout(&self, model: NerveModel, maxdim: usize) -> Result<NerveLayout> {
        Ok(NerveLayout::new(model_chains(&self.poset, model, maxdim)?, &self.widths()))
    }

    /// The nerve cochain complex in degrees `0..=maxdim`.
    pub fn nerve_cochain(&self, model: NerveModel, maxdim: usize) -> Result<(NerveLayout, Cochain)> {
        let layout = self.layout(model, maxdim)?;
        let widths = self.widths();
        let map = |a: usize, b: usize| self.along(a, b).matrix().clone();
        let terms = (0..=maxdim)
            .map(|s| Term {
                dim: layout.dims[s],
                relations: layout.block_lattice(s, &|k| self.objects[k].relation_lattice().clone()),
                d: layout.coface(s, &widths, &map),
            })
            .collect();
        Ok((layout, Cochain::new(0, terms)))
    }

    /// `lim^s` for `s = 0..=smax`.
    pub fn lims_with(&self, model: NerveModel, smax: usize) -> Result<Vec<FgAbGroup>> {
        let (_, k) = self.nerve_cochain(model, smax + 1)?;
        Ok((0..=smax as i64).map(|s| k.cohomology_group(s)).collect())
    }

    pub fn lims(&self, smax: usize) -> Vec<FgAbGroup> {
        self.lims_with(NerveModel::Full, smax).expect("full nerve is always available")
    }

    pub fn lim_s(&self, s: usize) -> FgAbGroup {
        self.lims(s).pop().expect("nonempty")
    }

    /// The value at the initial object, which is the inverse limit.
    pub fn reduce_to_min(&self) -> Result<FgAbGroup> {
        self.poset.initial_object().map(|t| self.objects[t].clone()).ok_or(Error::CofinalReductionUnavailable)
    }

    /// A diagram with the same value and identity maps everywhere.
    pub fn constant(poset: FinitePoset, g: FgAbGroup) -> GroupDiagram {
        let objects = vec![g.clone(); poset.len()];
        let maps = poset.arrows().iter().map(|_| AbMap::identity(&g)).collect();
        Diagram::new(poset, objects, maps).expect("constant diagrams are functorial")
    }
}

/// `0 → A --f--> B --g--> C → 0` of group diagrams over one poset, with level maps.
#[derive(Clone, Debug)]
pub struct DiagramSes {
    pub a: GroupDiagram,
    pub b: GroupDiagram,
    pub c: GroupDiagram,
    pub f: Vec<AbMap>,
    pub g: Vec<AbMap>,
}

fn check_natural(src: &GroupDiagram, tgt: &GroupDiagram, maps: &[AbMap], name: &str) -> Result<()> {
    let p = src.poset();
    for (e, &(a, b)) in p.arrows().iter().enumerate() {
        let left = src.generating()[e].then(&maps[b])?;
        let right = maps[a].then(&tgt.generating()[e])?;
        if !left.equals(&right) {
            return Err(Error::NotChainMap {
                degree: 0,
                context: format!("level map {name} is not natural on {}->{}", p.label(a), p.label(b)),
            });
        }
    }
    Ok(())
}

impl DiagramSes {
    /// Checks naturality of the level maps and short exactness at every object.
    pub fn new(a: GroupDiagram, b: GroupDiagram, c: GroupDiagram, f: Vec<AbMap>, g: Vec<AbMap>) -> Result<DiagramSes> {
        let n = a.poset().len();
        if b.poset().len() != n || c.poset().len() != n || f.len() != n || g.len() != n {
            return Err(Error::DimensionMismatch("sequence parts live over different posets".into()));
        }
        if b.poset().arrows() != a.poset().arrows() || c.poset().arrows() != a.poset().arrows() {
            return Err(Error::DimensionMismatch("sequence parts use different arrows".into()));
        }
        for k in 0..n {
            let shapes_ok = f[k].fits(a.object(k), b.object(k)) && g[k].fits(b.object(k), c.object(k));
            if !shapes_ok {
                return Err(Error::DimensionMismatch(format!("level maps at {}", a.poset().label(k))));
            }
            let f_k = AbMap::new(a.object(k).clone(), b.object(k).clone(), f[k].matrix().clone())?;
            let g_k = AbMap::new(b.object(k).clone(), c.object(k).clone(), g[k].matrix().clone())?;
            let exact = f_k.is_mono() && crate::group::exact_at(&f_k, &g_k) && g_k.is_epi();
            if !exact {
                return Err(Error::LevelwiseNotExact { object: a.poset().label(k).to_string() });
            }
        }
        check_natural(&a, &b, &f, "f")?;
        check_natural(&b, &c, &g, "g")?;
        Ok(DiagramSes { a, b, c, f, g })
    }

    /// The short exact sequence of nerve cochain complexes in degrees `0..=maxdim`.
    pub fn nerve_ses(&self, model: NerveModel, maxdim: usize) -> Result<CochainSes> {
        let (la, ka) = self.a.nerve_cochain(model, maxdim)?;
        let (lb, kb) = self.b.nerve_cochain(model, maxdim)?;
        let (lc, kc) = self.c.nerve_cochain(model, maxdim)?;
        let f = CochainMap {
            lo: 0,
            maps: (0..=maxdim).map(|s| lb.blockwise(&la, s, &|k| self.f[k].matrix().clone())).collect(),
        };
        let g = CochainMap {
            lo: 0,
            maps: (0..=maxdim).map(|s| lc.blockwise(&lb, s, &|k| self.g[k].matrix().clone())).collect(),
        };
        Ok(CochainSes { a: ka, b: kb, c: kc, f, g })
    }

    /// Exactness of `0 → lim⁰A → lim⁰B → lim⁰C → lim¹A → … → lim^{smax}C`.
    pub fn lim_les(&self, smax: usize) -> LesReport {
        let ses = self.nerve_ses(NerveModel::Full, smax + 1).expect("full nerve");
        let mut report = ses.les(0, smax as i64);
        for node in &mut report.nodes {
            node.label = format!("lim^{} {}", node.degree, node.label);
        }
        report
    }

    /// The constant sequence `0 → G --f--> H --g--> K → 0` over a poset.
    pub fn constant(poset: FinitePoset, f: &AbMap, g: &AbMap) -> Result<DiagramSes> {
        let n = poset.len();
        DiagramSes::new(
            GroupDiagram::constant(poset.clone(), f.source().clone()),
            GroupDiagram::constant(poset.clone(), f.target().clone()),
            GroupDiagram::constant(poset, g.target().clone()),
            vec![f.clone(); n],
            vec![g.clone(); n],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v_diagram() -> GroupDiagram {
        let p = FinitePoset::v_shape();
        let zero = FgAbGroup::trivial();
        let z = FgAbGroup::free(1);
        let maps = vec![AbMap::zero(&zero, &z), AbMap::zero(&zero, &z)];
        Diagram::new(p, vec![zero.clone(), zero, z], maps).unwrap()
    }

    #[test]
    fn v_poset_lims() {
        let l = v_diagram().lims(2);
        assert!(l[0].is_trivial());
        assert_eq!(l[1].to_string(), "Z");
        assert!(l[2].is_trivial());
    }

    #[test]
    fn discrete_constant_lims() {
        let d = GroupDiagram::constant(FinitePoset::discrete(2), FgAbGroup::free(1));
        let l = d.lims(1);
        assert_eq!(l[0].to_string(), "Z^2");
        assert!(l[1].is_trivial());
    }

    #[test]
    fn tower_with_doubling_maps() {
        let p = FinitePoset::chain(2);
        let z = FgAbGroup::free(1);
        let maps = vec![AbMap::scalar(&z, 2), AbMap::scalar(&z, 2)];
        let d = Diagram::new(p, vec![z.clone(), z.clone(), z], maps).unwrap();
        let l = d.lims(3);
        assert_eq!(l[0].to_string(), "Z");
        assert!(l[1..].iter().all(FgAbGroup::is_trivial));
        assert_eq!(d.reduce_to_min().unwrap().to_string(), "Z");
        assert_eq!(d.along(2, 0).matrix()[(0, 0)], Integer::from(4));
        assert!(matches!(v_diagram().reduce_to_min(), Err(Error::CofinalReductionUnavailable)));
    }

    #[test]
    fn broken_functoriality_names_the_pair() {
        // 2 → 1 → 0 plus a direct arrow 2 → 0 whose map disagrees with the composite.
        let p = FinitePoset::from_indices(3, &[(2, 1), (1, 0), (2, 0)]).unwrap();
        let z = FgAbGroup::free(1);
        let maps = vec![AbMap::scalar(&z, 2), AbMap::scalar(&z, 3), AbMap::scalar(&z, 5)];
        let err = Diagram::new(p, vec![z.clone(), z.clone(), z], maps).unwrap_err();
        assert_eq!(err, Error::Functoriality { first: "2->0".into(), second: "2->1->0".into() });
    }

    #[test]
    fn hasse_model_agrees_on_towers() {
        let p = FinitePoset::chain(3);
        let z = FgAbGroup::free(1);
        let maps = vec![AbMap::scalar(&z, 2), AbMap::scalar(&z, 3), AbMap::scalar(&z, 0)];
        let d = Diagram::new(p, vec![z.clone(); 4], maps).unwrap();
        let full = d.lims_with(NerveModel::Full, 2).unwrap();
        let hasse = d.lims_with(NerveModel::Hasse, 2).unwrap();
        for (a, b) in full.iter().zip(&hasse) {
            assert!(a.is_isomorphic(b));
        }
    }

    #[test]
    fn lim_les_of_doubling_over_v() {
        let z = FgAbGroup::free(1);
        let two = AbMap::scalar(&z, 2);
        let (z2, proj) = two.cokernel();
        let ses = DiagramSes::constant(FinitePoset::v_shape(), &two, &proj).unwrap();
        let report = ses.lim_les(1);
        assert!(report.exact);
        assert!(ses.a.lims(1)[1].is_trivial());
        assert!(ses.c.lims(0)[0].is_isomorphic(&z2));
    }
}
