//! Finite windows of towers `A₀ ← A₁ ← … ← A_N` and the cochain homotopies
//! relating a tower to its shift and to its tower of images.
//!
//! A tower is evaluated through the two-term complex `∏Aₙ --(1−i)--> ∏Aₙ`.
//! On a finite window only some output coordinates are determined, because
//! `(1−i)(a)ₙ = aₙ − iₙ(aₙ₊₁)` looks one step ahead. All identities are
//! checked on exactly those coordinates.

use serde::Serialize;

use crate::diagram::GroupDiagram;
use crate::error::{Error, Result};
use crate::group::{AbMap, FgAbGroup};
use crate::lattice::{apply_columns, Lattice};
use crate::poset::FinitePoset;
use crate::sparse::SparseVec;

#[derive(Clone, Debug)]
pub struct Tower {
    groups: Vec<FgAbGroup>,
    bonding: Vec<AbMap>,
}

impl Tower {
    /// `bonding[n] : A_{n+1} → A_n`.
    pub fn new(groups: Vec<FgAbGroup>, bonding: Vec<AbMap>) -> Result<Tower> {
        if groups.is_empty() || bonding.len() + 1 != groups.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} groups need {} bonding maps, got {}",
                groups.len(),
                groups.len().saturating_sub(1),
                bonding.len()
            )));
        }
        for (n, b) in bonding.iter().enumerate() {
            if b.source().generators() != groups[n + 1].generators() || b.target().generators() != groups[n].generators() {
                return Err(Error::DimensionMismatch(format!("bonding map {} -> {}", n + 1, n)));
            }
            AbMap::new(groups[n + 1].clone(), groups[n].clone(), b.matrix().clone())?;
        }
        Ok(Tower { groups, bonding })
    }

    /// `G ← G ← … ← G` on `0..=n`, every bonding map equal to `map`.
    pub fn constant(map: &AbMap, n: usize) -> Result<Tower> {
        Tower::new(vec![map.source().clone(); n + 1], vec![map.clone(); n])
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn groups(&self) -> &[FgAbGroup] {
        &self.groups
    }

    pub fn bonding(&self) -> &[AbMap] {
        &self.bonding
    }

    /// The diagram over the chain `N → … → 0`.
    pub fn to_diagram(&self) -> GroupDiagram {
        let poset = FinitePoset::chain(self.len() - 1);
        GroupDiagram::new(poset, self.groups.clone(), self.bonding.clone()).expect("towers are functorial")
    }
}

/// A window of a tower of subgroups: coordinate `n` is generated by `gens[n]`
/// inside the ambient group of relations `rel[n]`.
#[derive(Clone, Debug)]
struct Window {
    rel: Vec<Lattice>,
    gens: Vec<Vec<SparseVec>>,
    bond: Vec<Vec<SparseVec>>,
}

type Element = Vec<Option<SparseVec>>;

impl Window {
    fn of(t: &Tower) -> Window {
        let gens = t.groups.iter().map(|g| (0..g.generators()).map(SparseVec::unit).collect()).collect();
        Window {
            rel: t.groups.iter().map(|g| g.relation_lattice().clone()).collect(),
            gens,
            bond: t.bonding.iter().map(AbMap::columns).collect(),
        }
    }

    fn len(&self) -> usize {
        self.rel.len()
    }

    /// Drops coordinate 0: the tower `A_{n+1}`.
    fn shift(&self) -> Window {
        Window { rel: self.rel[1..].to_vec(), gens: self.gens[1..].to_vec(), bond: self.bond[1..].to_vec() }
    }

    /// The tower of images `A_n^{(1)} = i(A_{n+1}) ⊆ A_n`.
    fn images(&self) -> Window {
        let n = self.len() - 1;
        let gens = (0..n).map(|k| self.gens[k + 1].iter().map(|g| apply_columns(&self.bond[k], g)).collect()).collect();
        Window { rel: self.rel[..n].to_vec(), gens, bond: self.bond[..n.saturating_sub(1)].to_vec() }
    }

    /// `(1 − i)`.
    fn d(&self, x: &Element) -> Element {
        (0..self.len())
            .map(|n| match (x.get(n).cloned().flatten(), x.get(n + 1).cloned().flatten()) {
                (Some(a), Some(b)) if n < self.bond.len() => Some(a.sub(&apply_columns(&self.bond[n], &b))),
                _ => None,
            })
            .collect()
    }

    fn basis_elements(&self) -> Vec<Element> {
        let mut out = Vec::new();
        for n in 0..self.len() {
            for g in &self.gens[n] {
                let mut x: Element = (0..self.len()).map(|_| Some(SparseVec::zero())).collect();
                x[n] = Some(g.clone());
                out.push(x);
            }
        }
        out
    }

    /// Compares on coordinates determined on both sides; returns how many were compared.
    fn agree(&self, x: &Element, y: &Element) -> Option<usize> {
        let mut count = 0;
        for n in 0..self.len() {
            if let (Some(a), Some(b)) = (&x[n], &y[n]) {
                if !self.rel[n].contains(&a.sub(b)) {
                    return None;
                }
                count += 1;
            }
        }
        Some(count)
    }
}

fn neg(x: &Element) -> Element {
    x.iter().map(|c| c.as_ref().map(SparseVec::neg)).collect()
}

fn minus(x: &Element, y: &Element) -> Element {
    x.iter().zip(y).map(|(a, b)| Some(a.as_ref()?.sub(b.as_ref()?))).collect()
}

/// Which comparison the homotopy equivalence realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MlVariant {
    /// `C = ∏A_{n+1}`, `D = ∏A_n`, `j` the projection.
    Shift,
    /// `C = ∏A_n`, `D = ∏A_n^{(1)}`, `j` the inclusion.
    Images,
}

#[derive(Clone, Debug, Serialize)]
pub struct MlStep {
    pub step: usize,
    pub chain_maps: bool,
    pub ji_homotopy: bool,
    pub ij_homotopy: bool,
    pub determined: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MlReport {
    pub variant: MlVariant,
    pub steps: Vec<MlStep>,
    pub holds: bool,
}

/// Checks `ji − 1 = Sd + dS` on `C` and `ij − 1 = Td + dT` on `D` with
/// `S = T = −1`, together with `i`, `j` being cochain maps, for the first
/// `r` steps of the chosen comparison.
pub fn ml_homotopy_report(tower: &Tower, r: usize, variant: MlVariant) -> Result<MlReport> {
    if r == 0 {
        return Err(Error::Invalid("r must be at least 1".into()));
    }
    let mut steps = Vec::with_capacity(r);
    let mut base = Window::of(tower);
    for rho in 0..r {
        if base.len() < 2 {
            return Err(Error::WindowTooShort(format!(
                "a window of {} stages determines no coordinate at step {rho}",
                tower.len()
            )));
        }
        let (c, dwin, next) = match variant {
            MlVariant::Shift => (base.shift(), base.clone(), base.shift()),
            MlVariant::Images => (base.clone(), base.images(), base.images()),
        };
        let bond = &base.bond;
        let i = |x: &Element| -> Element {
            (0..dwin.len())
                .map(|n| {
                    let src = match variant {
                        MlVariant::Shift => x.get(n),
                        MlVariant::Images => x.get(n + 1),
                    };
                    match src.cloned().flatten() {
                        Some(v) if n < bond.len() => Some(apply_columns(&bond[n], &v)),
                        _ => None,
                    }
                })
                .collect()
        };
        let j = |y: &Element| -> Element {
            (0..c.len())
                .map(|n| match variant {
                    MlVariant::Shift => y.get(n + 1).cloned().flatten(),
                    MlVariant::Images => y.get(n).cloned().flatten(),
                })
                .collect()
        };
        let mut step = MlStep { step: rho, chain_maps: true, ji_homotopy: true, ij_homotopy: true, determined: 0 };
        let mut tally = |ok: Option<usize>, flag: &mut bool| match ok {
            Some(k) => step.determined += k,
            None => *flag = false,
        };
        let mut chain_maps = true;
        let mut ji = true;
        let mut ij = true;
        for x in c.basis_elements() {
            tally(dwin.agree(&dwin.d(&i(&x)), &i(&c.d(&x))), &mut chain_maps);
            let lhs = minus(&j(&i(&x)), &x);
            // degree 0: Sd; degree 1: dS
            tally(c.agree(&lhs, &neg(&c.d(&x))), &mut ji);
            tally(c.agree(&lhs, &c.d(&neg(&x))), &mut ji);
        }
        for y in dwin.basis_elements() {
            tally(c.agree(&c.d(&j(&y)), &j(&dwin.d(&y))), &mut chain_maps);
            let lhs = minus(&i(&j(&y)), &y);
            tally(dwin.agree(&lhs, &neg(&dwin.d(&y))), &mut ij);
            tally(dwin.agree(&lhs, &dwin.d(&neg(&y))), &mut ij);
        }
        if step.determined == 0 && !(c.gens.iter().all(Vec::is_empty) && dwin.gens.iter().all(Vec::is_empty)) {
            return Err(Error::WindowTooShort(format!("no coordinate is determined at step {rho}")));
        }
        step.chain_maps = chain_maps;
        step.ji_homotopy = ji;
        step.ij_homotopy = ij;
        steps.push(step);
        base = next;
    }
    let holds = steps.iter().all(|s| s.chain_maps && s.ji_homotopy && s.ij_homotopy);
    Ok(MlReport { variant, steps, holds })
}

/// Both comparisons, `r` steps each.
pub fn ml_homotopy_check(tower: &Tower, r: usize) -> Result<bool> {
    Ok(ml_homotopy_report(tower, r, MlVariant::Shift)?.holds && ml_homotopy_report(tower, r, MlVariant::Images)?.holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_identity_tower() {
        let z = FgAbGroup::free(1);
        let t = Tower::constant(&AbMap::identity(&z), 4).unwrap();
        let rep = ml_homotopy_report(&t, 1, MlVariant::Shift).unwrap();
        assert!(rep.holds);
        assert!(ml_homotopy_check(&t, 2).unwrap());
    }

    #[test]
    fn doubling_and_zero_towers() {
        let z = FgAbGroup::free(1);
        assert!(ml_homotopy_check(&Tower::constant(&AbMap::scalar(&z, 2), 4).unwrap(), 3).unwrap());
        let zero = FgAbGroup::trivial();
        assert!(ml_homotopy_check(&Tower::constant(&AbMap::identity(&zero), 4).unwrap(), 1).unwrap());
    }

    #[test]
    fn short_window_is_rejected() {
        let z = FgAbGroup::free(1);
        let t = Tower::constant(&AbMap::identity(&z), 1).unwrap();
        assert!(matches!(ml_homotopy_check(&t, 3), Err(Error::WindowTooShort(_))));
    }
}
