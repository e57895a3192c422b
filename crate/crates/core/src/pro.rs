//! Pro-modules over finite index posets: weak and strong tensor products,
//! pro-Tor computed two ways, and the two long exact Tor sequences.

use serde::Serialize;

use crate::bifunctor::{injective_relations, tensor_presented};
use crate::cochain::{CochainMap, CochainSes, LesReport};
use crate::complexes::{ChainComplex, ChainMap};
use crate::diagram::{ComplexDiagram, Diagram, DiagramSes, GroupDiagram};
use crate::error::{Error, Result};
use crate::grading::{chain_to_cochain, cochain_degree};
use crate::group::{AbMap, Canonical, FgAbGroup};
use crate::holim::homology_diagram;
use crate::integer::Integer;
use crate::lattice::Lattice;
use crate::matrix::IntMatrix;
use crate::poset::FinitePoset;

/// Default cap on the number of index objects the strong tensor may build.
pub const DEFAULT_INDEX_BUDGET: u128 = 4096;

/// The budget from `PROHOM_BUDGET`, or the default.
pub fn index_budget() -> u128 {
    std::env::var("PROHOM_BUDGET").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_INDEX_BUDGET)
}

/// A group diagram viewed as a pro-module, with verified flags.
#[derive(Clone, Debug)]
pub struct ProModule {
    diagram: GroupDiagram,
    levelwise_free: bool,
    cofiltered: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProFlags {
    pub levelwise_free: bool,
    pub cofiltered: bool,
}

impl ProModule {
    pub fn new(diagram: GroupDiagram) -> ProModule {
        let levelwise_free = diagram.objects().iter().all(FgAbGroup::is_free);
        let cofiltered = diagram.poset().initial_object().is_some();
        ProModule { diagram, levelwise_free, cofiltered }
    }

    /// Rejects claimed flags that the diagram does not have.
    pub fn with_flags(diagram: GroupDiagram, claimed: ProFlags) -> Result<ProModule> {
        let p = ProModule::new(diagram);
        if claimed != p.flags() {
            return Err(Error::Invalid(format!(
                "claimed flags levelwise_free={}, cofiltered={} but the diagram has {}, {}",
                claimed.levelwise_free, claimed.cofiltered, p.levelwise_free, p.cofiltered
            )));
        }
        Ok(p)
    }

    pub fn constant(poset: FinitePoset, g: FgAbGroup) -> ProModule {
        ProModule::new(GroupDiagram::constant(poset, g))
    }

    pub fn diagram(&self) -> &GroupDiagram {
        &self.diagram
    }

    pub fn poset(&self) -> &FinitePoset {
        self.diagram.poset()
    }

    pub fn level(&self, k: usize) -> &FgAbGroup {
        self.diagram.object(k)
    }

    pub fn flags(&self) -> ProFlags {
        ProFlags { levelwise_free: self.levelwise_free, cofiltered: self.cofiltered }
    }

    pub fn is_levelwise_free(&self) -> bool {
        self.levelwise_free
    }

    pub fn is_cofiltered(&self) -> bool {
        self.cofiltered
    }

    /// The value at the initial index object.
    pub fn reduce_to_min(&self) -> Result<FgAbGroup> {
        self.diagram.reduce_to_min()
    }

    /// Canonical forms level by level.
    pub fn levels(&self) -> Vec<Canonical> {
        self.diagram.objects().iter().map(|g| g.canonical().clone()).collect()
    }
}

/// `f ⊗ 1_M` between `A ⊗ M` and `A' ⊗ M` in the presented generators.
fn tensor_right(f: &AbMap, m: &FgAbGroup) -> AbMap {
    let src = tensor_presented(f.source(), m);
    let tgt = tensor_presented(f.target(), m);
    AbMap::new(src, tgt, f.matrix().kronecker(&IntMatrix::identity(m.generators()))).expect("f ⊗ 1 is well defined")
}

/// `1_F ⊗ f` for a free `F = Z^k`.
fn tensor_left(k: usize, f: &AbMap) -> AbMap {
    let free = FgAbGroup::free(k);
    let src = tensor_presented(&free, f.source());
    let tgt = tensor_presented(&free, f.target());
    AbMap::new(src, tgt, IntMatrix::identity(k).kronecker(f.matrix())).expect("1 ⊗ f is well defined")
}

/// Levelwise `P_i ⊗ M`.
pub fn weak_tensor(p: &ProModule, m: &FgAbGroup) -> ProModule {
    let d = p.diagram();
    let objects = d.objects().iter().map(|g| tensor_presented(g, m)).collect();
    let maps = d.generating().iter().map(|f| tensor_right(f, m)).collect();
    ProModule::new(Diagram::functorial(d.poset().clone(), objects, maps))
}

/// Index objects of the strong tensor: `τ ∈ I^X` places the target summands,
/// `σ ∈ I^Y` the source summands, and `σ_y ≥ τ_x` wherever the presentation
/// matrix has a nonzero entry.
#[derive(Clone, Debug)]
struct TensorIndex {
    tau: Vec<usize>,
    sigma: Vec<usize>,
}

pub fn strong_tensor_fp(p: &ProModule, m: &FgAbGroup) -> Result<ProModule> {
    strong_tensor_fp_with_budget(p, m, index_budget())
}

/// The representing system of `P ⊗ M` for `M = coker(F : Z^Y → Z^X)`: at each
/// index the cokernel of `F` applied to `⊕_y P_{σ_y} → ⊕_x P_{τ_x}`.
pub fn strong_tensor_fp_with_budget(p: &ProModule, m: &FgAbGroup, budget: u128) -> Result<ProModule> {
    let d = p.diagram();
    let poset = d.poset();
    let f = m.relations();
    let (nx, ny) = (f.rows(), f.cols());
    let size = poset.len() as u128;
    let required = (0..nx + ny).try_fold(1u128, |acc, _| acc.checked_mul(size)).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::IndexBudgetExceeded { required, budget });
    }
    let admissible = |t: &[usize], s: &[usize]| {
        (0..nx).all(|x| (0..ny).all(|y| f[(x, y)].is_zero() || poset.ge(s[y], t[x])))
    };
    let mut index = Vec::new();
    let mut digits = vec![0usize; nx + ny];
    for _ in 0..required {
        let (t, s) = digits.split_at(nx);
        if admissible(t, s) {
            index.push(TensorIndex { tau: t.to_vec(), sigma: s.to_vec() });
        }
        for dgt in digits.iter_mut() {
            *dgt += 1;
            if *dgt < poset.len() {
                break;
            }
            *dgt = 0;
        }
    }
    let position = |j: &TensorIndex| {
        let coords = j.tau.iter().chain(&j.sigma);
        let mut code = 0usize;
        for &c in coords.rev() {
            code = code * poset.len() + c;
        }
        code
    };
    let mut lookup = std::collections::HashMap::new();
    for (k, j) in index.iter().enumerate() {
        lookup.insert(position(j), k);
    }
    let mut arrows = Vec::new();
    for (k, j) in index.iter().enumerate() {
        for c in 0..nx + ny {
            let cur = if c < nx { j.tau[c] } else { j.sigma[c - nx] };
            for &(a, b) in poset.hasse() {
                if a != cur {
                    continue;
                }
                let mut next = j.clone();
                if c < nx {
                    next.tau[c] = b;
                } else {
                    next.sigma[c - nx] = b;
                }
                if let Some(&k2) = lookup.get(&position(&next)) {
                    arrows.push((k, k2));
                }
            }
        }
    }
    let labels: Vec<String> = index
        .iter()
        .map(|j| {
            let part = |v: &[usize]| v.iter().map(|&k| poset.label(k)).collect::<Vec<_>>().join(",");
            format!("({}|{})", part(&j.tau), part(&j.sigma))
        })
        .collect();
    let named: Vec<(String, String)> = arrows.iter().map(|&(a, b)| (labels[a].clone(), labels[b].clone())).collect();
    let jposet = FinitePoset::new(labels, &named)?;
    let objects: Vec<FgAbGroup> = index.iter().map(|j| strong_level(d, f, j)).collect();
    let maps = jposet
        .arrows()
        .iter()
        .map(|&(a, b)| {
            let blocks: Vec<AbMap> = (0..nx).map(|x| d.along(index[a].tau[x], index[b].tau[x])).collect();
            let mats: Vec<&IntMatrix> = blocks.iter().map(AbMap::matrix).collect();
            AbMap::new(objects[a].clone(), objects[b].clone(), IntMatrix::block_diagonal(&mats))
                .expect("the relation images are compatible")
        })
        .collect();
    Ok(ProModule::new(Diagram::functorial(jposet, objects, maps)))
}

fn strong_level(d: &GroupDiagram, f: &IntMatrix, j: &TensorIndex) -> FgAbGroup {
    let (nx, ny) = (f.rows(), f.cols());
    let widths: Vec<usize> = j.tau.iter().map(|&t| d.object(t).generators()).collect();
    let offsets: Vec<usize> = widths.iter().scan(0, |acc, w| Some(std::mem::replace(acc, *acc + w))).collect();
    let total: usize = widths.iter().sum();
    let blocks: Vec<&IntMatrix> = j.tau.iter().map(|&t| d.object(t).relations()).collect();
    let mut rel = IntMatrix::block_diagonal(&blocks);
    for y in 0..ny {
        let src = j.sigma[y];
        for g in 0..d.object(src).generators() {
            let mut col = IntMatrix::zeros(total, 1);
            for x in 0..nx {
                let a = &f[(x, y)];
                if a.is_zero() {
                    continue;
                }
                let img = d.along(src, j.tau[x]).matrix().column(g);
                for (r, v) in img.iter().map(|(r, v)| (*r, v)) {
                    col[(offsets[x] + r, 0)] = &col[(offsets[x] + r, 0)] + &(a * v);
                }
            }
            rel = rel.hstack(&col).expect("row counts agree");
        }
    }
    FgAbGroup::new(total, rel).expect("shape")
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorComparison {
    pub strong: Canonical,
    pub weak: Canonical,
    /// The comparison map at the initial index, target generators by source generators.
    pub map: Vec<Vec<String>>,
    pub isomorphic: bool,
}

/// Reduces both tensors to the initial index object and compares them there.
pub fn compare_tensors(p: &ProModule, m: &FgAbGroup) -> Result<TensorComparison> {
    if !p.is_cofiltered() {
        return Err(Error::CofinalReductionUnavailable);
    }
    let strong = strong_tensor_fp(p, m)?.reduce_to_min()?;
    let weak = weak_tensor(p, m).reduce_to_min()?;
    // strong generator (x, k) sits at x·n_P + k, weak generator (k, x) at k·n_M + x
    let (np, nm) = (p.reduce_to_min()?.generators(), m.generators());
    let mut mat = IntMatrix::zeros(np * nm, np * nm);
    for x in 0..nm {
        for k in 0..np {
            mat[(k * nm + x, x * np + k)] = Integer::ONE;
        }
    }
    let map = AbMap::new(strong.clone(), weak.clone(), mat)?;
    Ok(TensorComparison {
        strong: strong.canonical().clone(),
        weak: weak.canonical().clone(),
        map: map.matrix().to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
        isomorphic: map.is_iso(),
    })
}

fn two_term(top: FgAbGroup, bottom: FgAbGroup, d: IntMatrix) -> ChainComplex {
    let map = AbMap::new(top.clone(), bottom.clone(), d).expect("well defined");
    ChainComplex::new(0, vec![bottom, top], vec![map]).expect("a two-term complex")
}

fn two_term_map(source: &ChainComplex, target: &ChainComplex, bottom: &AbMap, top: &AbMap) -> ChainMap {
    ChainMap::new(source.clone(), target.clone(), vec![bottom.matrix().clone(), top.matrix().clone()])
        .expect("levelwise maps commute with the differentials")
}

/// `Tor_n(P, G)` as the levelwise homology of `P ⊗ (0 → Z^q --R--> Z^k → 0)`
/// for an injective relation matrix `R` of `G`.
pub fn pro_tor(p: &ProModule, g: &FgAbGroup, n: usize) -> ProModule {
    let d = p.diagram();
    let r = injective_relations(g);
    let (k, q) = (r.rows(), r.cols());
    let complex = |a: &FgAbGroup| {
        let top = tensor_presented(a, &FgAbGroup::free(q));
        let bottom = tensor_presented(a, &FgAbGroup::free(k));
        two_term(top, bottom, IntMatrix::identity(a.generators()).kronecker(&r))
    };
    let objects: Vec<ChainComplex> = d.objects().iter().map(complex).collect();
    let maps = d
        .poset()
        .arrows()
        .iter()
        .zip(d.generating())
        .map(|(&(a, b), f)| {
            two_term_map(&objects[a], &objects[b], &tensor_right(f, &FgAbGroup::free(k)), &tensor_right(f, &FgAbGroup::free(q)))
        })
        .collect();
    let cd: ComplexDiagram = Diagram::functorial(d.poset().clone(), objects, maps);
    ProModule::new(homology_diagram(&cd, n as i64))
}

/// A levelwise free resolution `0 → K → Q → P → 0` with `Q_i = ⊕_{j ≥ i} Z^{gens P_j}`.
#[derive(Clone, Debug)]
pub struct FreeCover {
    pub cover: GroupDiagram,
    pub kernel: GroupDiagram,
    pub inclusion: Vec<IntMatrix>,
    pub augmentation: Vec<AbMap>,
}

pub fn free_cover(p: &ProModule) -> FreeCover {
    let d = p.diagram();
    let poset = d.poset();
    let n = poset.len();
    let above: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| poset.ge(j, i)).collect()).collect();
    let width = |i: usize| -> usize { above[i].iter().map(|&j| d.object(j).generators()).sum() };
    let cover_objects: Vec<FgAbGroup> = (0..n).map(|i| FgAbGroup::free(width(i))).collect();
    let augmentation: Vec<AbMap> = (0..n)
        .map(|i| {
            let mut m = IntMatrix::zeros(d.object(i).generators(), 0);
            for &j in &above[i] {
                m = m.hstack(d.along(j, i).matrix()).expect("row counts agree");
            }
            AbMap::new(cover_objects[i].clone(), d.object(i).clone(), m).expect("free source")
        })
        .collect();
    let cover_map = |a: usize, b: usize| {
        let mut m = IntMatrix::zeros(width(b), width(a));
        let mut col = 0;
        for &j in &above[a] {
            let row0: usize = above[b].iter().take_while(|&&x| x != j).map(|&x| d.object(x).generators()).sum();
            for k in 0..d.object(j).generators() {
                m[(row0 + k, col + k)] = Integer::ONE;
            }
            col += d.object(j).generators();
        }
        m
    };
    let kernels: Vec<Lattice> = augmentation.iter().map(AbMap::kernel_lattice).collect();
    let kernel_objects: Vec<FgAbGroup> = kernels.iter().map(|l| FgAbGroup::free(l.rank())).collect();
    let inclusion: Vec<IntMatrix> = kernels.iter().zip(&cover_objects).map(|(l, c)| IntMatrix::from_columns(c.generators(), l.basis())).collect();
    let arrows = poset.arrows();
    let cover_maps = arrows
        .iter()
        .map(|&(a, b)| AbMap::new(cover_objects[a].clone(), cover_objects[b].clone(), cover_map(a, b)).expect("free"))
        .collect();
    let kernel_maps = arrows
        .iter()
        .map(|&(a, b)| {
            let m = cover_map(a, b);
            let cols: Vec<_> = kernels[a]
                .basis()
                .iter()
                .map(|v| {
                    let img = m.apply(v);
                    let coords = kernels[b].coordinates(&img).expect("inclusions preserve kernels");
                    crate::sparse::SparseVec::from_dense(&coords)
                })
                .collect();
            AbMap::new(kernel_objects[a].clone(), kernel_objects[b].clone(), IntMatrix::from_columns(kernels[b].rank(), &cols))
                .expect("free")
        })
        .collect();
    FreeCover {
        cover: Diagram::functorial(poset.clone(), cover_objects, cover_maps),
        kernel: Diagram::functorial(poset.clone(), kernel_objects, kernel_maps),
        inclusion,
        augmentation,
    }
}

/// `Tor_n(P, G)` as the levelwise homology of `(K → Q) ⊗ G` for the free cover of `P`.
pub fn resolution_tor(p: &ProModule, g: &FgAbGroup, n: usize) -> ProModule {
    let fc = free_cover(p);
    let poset = p.poset().clone();
    let objects: Vec<ChainComplex> = (0..poset.len())
        .map(|i| {
            let top = tensor_presented(fc.kernel.object(i), g);
            let bottom = tensor_presented(fc.cover.object(i), g);
            two_term(top, bottom, fc.inclusion[i].kronecker(&IntMatrix::identity(g.generators())))
        })
        .collect();
    let maps = poset
        .arrows()
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| {
            let bottom = tensor_right(&fc.cover.generating()[e], g);
            let top = tensor_right(&fc.kernel.generating()[e], g);
            two_term_map(&objects[a], &objects[b], &bottom, &top)
        })
        .collect();
    let cd: ComplexDiagram = Diagram::functorial(poset, objects, maps);
    ProModule::new(homology_diagram(&cd, n as i64))
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelLes {
    pub object: String,
    pub les: LesReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorLesReport {
    pub levels: Vec<LevelLes>,
    pub exact: bool,
}

impl TorLesReport {
    fn from_levels(levels: Vec<LevelLes>) -> TorLesReport {
        let exact = levels.iter().all(|l| l.les.exact);
        TorLesReport { levels, exact }
    }
}

/// The six-term sequence from a short exact sequence of two-term complexes,
/// with nodes relabelled `Tor1(·)` and `⊗`.
fn six_term(a: &ChainComplex, b: &ChainComplex, c: &ChainComplex, f: &ChainMap, g: &ChainMap, names: [&str; 3]) -> LesReport {
    let as_cochain_map = |m: &ChainMap| CochainMap {
        lo: cochain_degree(1),
        maps: [1, 0].iter().map(|&n| m.matrix(n).columns()).collect(),
    };
    let ses = CochainSes { a: chain_to_cochain(a), b: chain_to_cochain(b), c: chain_to_cochain(c), f: as_cochain_map(f), g: as_cochain_map(g) };
    let mut les = ses.les(cochain_degree(1), cochain_degree(0));
    for node in &mut les.nodes {
        let which = match node.label.as_str() {
            "A" => names[0],
            "B" => names[1],
            _ => names[2],
        };
        node.label = if node.degree == cochain_degree(1) { format!("Tor1({which})") } else { format!("{which}⊗") };
    }
    les
}

/// `… → Tor₁(A_i,G) → Tor₁(B_i,G) → Tor₁(C_i,G) → A_i⊗G → B_i⊗G → C_i⊗G → 0` at every index.
pub fn first_les(ses: &DiagramSes, g: &FgAbGroup) -> TorLesReport {
    let r = injective_relations(g);
    let (k, q) = (r.rows(), r.cols());
    let resolve = |x: &FgAbGroup| {
        two_term(
            tensor_presented(x, &FgAbGroup::free(q)),
            tensor_presented(x, &FgAbGroup::free(k)),
            IntMatrix::identity(x.generators()).kronecker(&r),
        )
    };
    let map = |src: &ChainComplex, tgt: &ChainComplex, f: &AbMap| {
        two_term_map(src, tgt, &tensor_right(f, &FgAbGroup::free(k)), &tensor_right(f, &FgAbGroup::free(q)))
    };
    let poset = ses.a.poset();
    let levels = (0..poset.len())
        .map(|i| {
            let (a, b, c) = (resolve(ses.a.object(i)), resolve(ses.b.object(i)), resolve(ses.c.object(i)));
            let (f, gm) = (map(&a, &b, &ses.f[i]), map(&b, &c, &ses.g[i]));
            LevelLes { object: poset.label(i).to_string(), les: six_term(&a, &b, &c, &f, &gm, ["A", "B", "C"]) }
        })
        .collect();
    TorLesReport::from_levels(levels)
}

/// `… → Tor₁(P_i,A) → Tor₁(P_i,B) → Tor₁(P_i,C) → P_i⊗A → P_i⊗B → P_i⊗C → 0` at every index.
pub fn second_les(p: &ProModule, f: &AbMap, g: &AbMap) -> Result<TorLesReport> {
    let exact = f.is_mono() && crate::group::exact_at(f, g) && g.is_epi();
    if !exact || f.target().generators() != g.source().generators() {
        return Err(Error::LevelwiseNotExact { object: "coefficients".into() });
    }
    let d = p.diagram();
    let levels = (0..d.poset().len())
        .map(|i| {
            let r = injective_relations(d.object(i));
            let (k, q) = (r.rows(), r.cols());
            let resolve = |x: &FgAbGroup| {
                two_term(
                    tensor_presented(&FgAbGroup::free(q), x),
                    tensor_presented(&FgAbGroup::free(k), x),
                    r.kronecker(&IntMatrix::identity(x.generators())),
                )
            };
            let (a, b, c) = (resolve(f.source()), resolve(f.target()), resolve(g.target()));
            let fm = two_term_map(&a, &b, &tensor_left(k, f), &tensor_left(q, f));
            let gm = two_term_map(&b, &c, &tensor_left(k, g), &tensor_left(q, g));
            LevelLes { object: d.poset().label(i).to_string(), les: six_term(&a, &b, &c, &fm, &gm, ["P,A", "P,B", "P,C"]) }
        })
        .collect();
    Ok(TorLesReport::from_levels(levels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(a: i64, len: usize) -> ProModule {
        let z = FgAbGroup::free(1);
        ProModule::new(crate::tower::Tower::constant(&AbMap::scalar(&z, a), len).unwrap().to_diagram())
    }

    #[test]
    fn flags() {
        let p = tower(2, 2);
        assert!(p.is_levelwise_free() && p.is_cofiltered());
        let v = ProModule::constant(FinitePoset::v_shape(), FgAbGroup::cyclic(3));
        assert!(!v.is_levelwise_free() && !v.is_cofiltered());
        assert!(ProModule::with_flags(v.diagram().clone(), ProFlags { levelwise_free: true, cofiltered: false }).is_err());
    }

    #[test]
    fn weak_tensor_reduces_bonding_maps() {
        let w = weak_tensor(&tower(2, 1), &FgAbGroup::cyclic(2));
        assert!(w.levels().iter().all(|c| c.to_string() == "Z/2"));
        assert!(w.diagram().generating()[0].is_zero());
        let unit = weak_tensor(&tower(3, 2), &FgAbGroup::free(1));
        assert!(unit.levels().iter().all(|c| c.to_string() == "Z"));
    }

    #[test]
    fn strong_tensor_examples() {
        let p = tower(2, 2);
        let unit = strong_tensor_fp(&p, &FgAbGroup::free(1)).unwrap();
        assert_eq!(unit.poset().len(), 3);
        let two = strong_tensor_fp(&p, &FgAbGroup::free(2)).unwrap();
        assert_eq!(two.poset().len(), 9);
        let c = ProModule::constant(FinitePoset::chain(1), FgAbGroup::free(1));
        let mod2 = strong_tensor_fp(&c, &FgAbGroup::cyclic(2)).unwrap();
        assert!(mod2.levels().iter().all(|g| g.to_string() == "Z/2"));
        let cmp = compare_tensors(&tower(2, 2), &FgAbGroup::cyclic(6)).unwrap();
        assert!(cmp.isomorphic);
        assert_eq!(cmp.strong.to_string(), "Z/6");
        assert!(matches!(
            strong_tensor_fp_with_budget(&p, &FgAbGroup::free(3), 8),
            Err(Error::IndexBudgetExceeded { required: 27, budget: 8 })
        ));
        let v = ProModule::constant(FinitePoset::v_shape(), FgAbGroup::free(1));
        assert!(matches!(compare_tensors(&v, &FgAbGroup::free(1)), Err(Error::CofinalReductionUnavailable)));
    }

    #[test]
    fn tor_two_ways() {
        let p = ProModule::constant(FinitePoset::chain(2), FgAbGroup::cyclic(4));
        let g = FgAbGroup::cyclic(6);
        for n in 0..3 {
            let a = pro_tor(&p, &g, n);
            let b = resolution_tor(&p, &g, n);
            assert_eq!(a.levels(), b.levels());
        }
        assert!(pro_tor(&p, &g, 1).levels().iter().all(|c| c.to_string() == "Z/2"));
        assert!(pro_tor(&p, &g, 2).levels().iter().all(Canonical::is_trivial));
        assert!(pro_tor(&tower(2, 2), &g, 1).levels().iter().all(Canonical::is_trivial));
        assert!(pro_tor(&p, &FgAbGroup::free(2), 1).levels().iter().all(Canonical::is_trivial));
    }

    #[test]
    fn second_sequence_for_reduction_mod_two() {
        let z = FgAbGroup::free(1);
        let z2 = FgAbGroup::cyclic(2);
        let f = AbMap::scalar(&z, 2);
        let g = AbMap::new(z.clone(), z2, IntMatrix::identity(1)).unwrap();
        let p = ProModule::constant(FinitePoset::chain(1), FgAbGroup::cyclic(4));
        let rep = second_les(&p, &f, &g).unwrap();
        assert!(rep.exact);
        let groups: Vec<String> = rep.levels[0].les.nodes.iter().map(|n| n.group.to_string()).collect();
        assert_eq!(groups, ["0", "0", "Z/2", "Z/4", "Z/4", "Z/2"]);
        assert!(second_les(&p, &g, &f).is_err());
    }

    #[test]
    fn first_sequence_with_free_coefficients() {
        let z = FgAbGroup::free(1);
        let ses = DiagramSes::constant(FinitePoset::chain(1), &AbMap::scalar(&z, 2), &AbMap::new(z.clone(), FgAbGroup::cyclic(2), IntMatrix::identity(1)).unwrap()).unwrap();
        let rep = first_les(&ses, &FgAbGroup::free(1));
        assert!(rep.exact);
        let rep = first_les(&ses, &FgAbGroup::cyclic(2));
        assert!(rep.exact);
    }
}
