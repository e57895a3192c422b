//! Homotopy inverse limits of finite diagrams of chain complexes.
//!
//! The cosimplicial replacement `RC` has cell `(s, t)` equal to the sum over
//! nerve chains `i₀ > … > i_s` of `C_{−t}(i_s)`, horizontal differential the
//! coface map and vertical differential the chain differential. The homotopy
//! limit is its total complex read back in chain grading.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complexes::ChainComplex;
use crate::diagram::{model_chains, ComplexDiagram, GroupDiagram, NerveLayout, NerveModel};
use crate::error::{Error, Result};
use crate::grading::{cochain_degree, cochain_to_chain};
use crate::group::{Canonical, FgAbGroup};
use crate::matrix::IntMatrix;
use crate::poset::FinitePoset;
use crate::specseq::{Bicomplex, SpectralSequence};

/// Smallest and largest chain degree occurring at any object.
pub fn degree_span(d: &ComplexDiagram) -> Option<(i64, i64)> {
    let live = d.objects().iter().filter(|c| !c.is_empty());
    let lo = live.clone().map(ChainComplex::lo).min()?;
    let hi = live.map(ChainComplex::hi).max()?;
    Some((lo, hi))
}

pub fn build_rc(d: &ComplexDiagram) -> Bicomplex {
    build_rc_with(d, NerveModel::Full).expect("the full nerve always exists")
}

pub fn build_rc_with(d: &ComplexDiagram, model: NerveModel) -> Result<Bicomplex> {
    let Some((lo, hi)) = degree_span(d) else { return Ok(Bicomplex::empty()) };
    let p = d.poset();
    let smax = match model {
        NerveModel::Full => p.nerve_dimension(),
        NerveModel::Hasse => p.nerve_dimension().min(1),
    };
    let chains = model_chains(p, model, smax)?;
    let mut cells = BTreeMap::new();
    let mut horizontal = BTreeMap::new();
    let mut vertical = BTreeMap::new();
    let layouts: BTreeMap<i64, NerveLayout> = (lo..=hi)
        .map(|n| {
            let widths: Vec<usize> = d.objects().iter().map(|c| c.rank(n)).collect();
            (n, NerveLayout::new(chains.clone(), &widths))
        })
        .collect();
    for n in lo..=hi {
        let t = cochain_degree(n);
        let layout = &layouts[&n];
        let widths: Vec<usize> = d.objects().iter().map(|c| c.rank(n)).collect();
        let map = |a: usize, b: usize| d.along(a, b).matrix(n);
        for s in 0..=smax {
            let rel = layout.block_lattice(s, &|k| d.object(k).group(n).relation_lattice().clone());
            let rows = layout.dims[s];
            cells.insert((s, t), FgAbGroup::new(rows, IntMatrix::from_columns(rows, rel.basis())).expect("shape"));
            if s < smax {
                let cols = layout.coface(s, &widths, &map);
                horizontal.insert((s, t), IntMatrix::from_columns(layout.dims[s + 1], &cols));
            }
            if n > lo {
                let below = &layouts[&(n - 1)];
                let cols = below.blockwise(layout, s, &|k| d.object(k).differential(n).matrix().clone());
                vertical.insert((s, t), IntMatrix::from_columns(below.dims[s], &cols));
            }
        }
    }
    Bicomplex::new(cells, horizontal, vertical)
}

/// `Tot(RC)` in chain grading.
pub fn holim_complex(d: &ComplexDiagram) -> ChainComplex {
    cochain_to_chain(&build_rc(d).total_complex())
}

pub fn holim_complex_with(d: &ComplexDiagram, model: NerveModel) -> Result<ChainComplex> {
    Ok(cochain_to_chain(&build_rc_with(d, model)?.total_complex()))
}

pub fn strong_homology(d: &ComplexDiagram, n: i64) -> FgAbGroup {
    holim_complex(d).homology(n)
}

/// The diagram `i ↦ H_n(C(i))`.
pub fn homology_diagram(d: &ComplexDiagram, n: i64) -> GroupDiagram {
    let p = d.poset();
    let objects = d.objects().iter().map(|c| c.homology(n)).collect();
    let maps = d.generating().iter().map(|f| f.on_homology(n)).collect();
    GroupDiagram::new(p.clone(), objects, maps).expect("homology is a functor")
}

#[derive(Clone, Debug, Serialize)]
pub struct E2Cell {
    pub s: usize,
    pub t: i64,
    pub e2: Canonical,
    pub lim: Canonical,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct E2Report {
    pub cells: Vec<E2Cell>,
    pub consistent: bool,
}

/// Compares `E₂^{s,t}(RC)` with `lim^s H_{−t}` cell by cell.
pub fn e2_consistency(d: &ComplexDiagram) -> E2Report {
    let Some((lo, hi)) = degree_span(d) else { return E2Report { cells: Vec::new(), consistent: true } };
    let smax = d.poset().nerve_dimension();
    let rc = build_rc(d);
    let ss = SpectralSequence::new(&rc);
    let mut cells = Vec::new();
    for n in lo..=hi {
        let lims = homology_diagram(d, n).lims(smax);
        let t = cochain_degree(n);
        for (s, lim) in lims.iter().enumerate() {
            let e2 = ss.e(2, (s, t)).to_group().canonical().clone();
            let lim = lim.canonical().clone();
            cells.push(E2Cell { s, t, agree: e2 == lim, e2, lim });
        }
    }
    let consistent = cells.iter().all(|c| c.agree);
    E2Report { cells, consistent }
}

/// Checks that restriction to `objects` preserves homotopy limits: for every
/// object `i`, the objects of the subposet above `i` form a nonempty poset
/// with the integral cohomology of a point.
pub fn check_cofinal(p: &FinitePoset, objects: &[usize]) -> Result<()> {
    if let Some(&bad) = objects.iter().find(|&&k| k >= p.len()) {
        return Err(Error::UnknownObject(bad.to_string()));
    }
    for i in 0..p.len() {
        let above: Vec<usize> = objects.iter().copied().filter(|&k| p.ge(k, i)).collect();
        let fail = |reason: &str| Error::NotCofinal { witness: p.label(i).to_string(), reason: reason.into() };
        if above.is_empty() {
            return Err(fail("has no subposet object above it"));
        }
        let comma = p.restrict(&above);
        let lims = GroupDiagram::constant(comma.clone(), FgAbGroup::free(1)).lims(comma.nerve_dimension());
        if !lims[0].is_isomorphic(&FgAbGroup::free(1)) {
            return Err(fail("sees a disconnected part of the subposet"));
        }
        if lims[1..].iter().any(|g| !g.is_trivial()) {
            return Err(fail("sees a part of the subposet with nontrivial cohomology"));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct CofinalDegree {
    pub n: i64,
    pub full: Canonical,
    pub restricted: Canonical,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CofinalityReport {
    pub objects: Vec<String>,
    pub degrees: Vec<CofinalDegree>,
    pub holds: bool,
}

/// Compares holim homology over the full poset with that over `objects`.
pub fn cofinality_check(d: &ComplexDiagram, objects: &[usize]) -> Result<CofinalityReport> {
    check_cofinal(d.poset(), objects)?;
    let sub = d.restrict(objects);
    let full = holim_complex(d);
    let restricted = holim_complex(&sub);
    let span = [full.lo(), restricted.lo(), full.hi(), restricted.hi()];
    let (lo, hi) = if full.is_empty() && restricted.is_empty() {
        (0, -1)
    } else {
        (*span.iter().min().expect("nonempty"), *span.iter().max().expect("nonempty"))
    };
    let degrees: Vec<CofinalDegree> = (lo..=hi)
        .map(|n| {
            let a = full.homology(n).canonical().clone();
            let b = restricted.homology(n).canonical().clone();
            CofinalDegree { n, agree: a == b, full: a, restricted: b }
        })
        .collect();
    let holds = degrees.iter().all(|x| x.agree);
    let objects = objects.iter().map(|&k| d.poset().label(k).to_string()).collect();
    Ok(CofinalityReport { objects, degrees, holds })
}

/// `H_n` of the truncation `Tot^{(s)}` for every `s`, showing that the
/// tower of truncations stabilizes at the full homotopy limit.
pub fn truncation_tower(d: &ComplexDiagram, n: i64) -> Vec<FgAbGroup> {
    let rc = build_rc(d);
    if rc.is_empty() {
        return Vec::new();
    }
    (0..=rc.smax()).map(|s| rc.trunc_tot(s).cohomology_group(cochain_degree(n))).collect()
}
