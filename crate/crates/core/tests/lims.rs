use proptest::prelude::*;

use prohom::corpus::{Bounds, Gen};
use prohom::diagram::{DiagramSes, GroupDiagram};
use prohom::poset::FinitePoset;
use prohom::tower::{ml_homotopy_check, Tower};
use prohom::{AbMap, FgAbGroup, IntMatrix};

fn v_diagram() -> GroupDiagram {
    let v = FinitePoset::v_shape();
    let objects: Vec<FgAbGroup> = (0..v.len())
        .map(|k| if v.arrows().iter().any(|&(a, _)| a == k) { FgAbGroup::trivial() } else { FgAbGroup::free(1) })
        .collect();
    let maps = v.arrows().iter().map(|&(a, b)| AbMap::zero(&objects[a], &objects[b])).collect();
    GroupDiagram::new(v, objects, maps).unwrap()
}

#[test]
fn chain_nerve() {
    let p = FinitePoset::chain(2);
    let nerve = p.nerve(2);
    assert_eq!(nerve[0].len(), 3);
    let mut edges = nerve[1].clone();
    edges.sort();
    assert_eq!(edges, vec![vec![1, 0], vec![2, 0], vec![2, 1]]);
    assert_eq!(nerve[2], vec![vec![2, 1, 0]]);
}

#[test]
fn v_poset_has_lim_one() {
    let lims = v_diagram().lims(2);
    assert!(lims[0].is_trivial());
    assert_eq!(lims[1].to_string(), "Z");
    assert!(lims[2].is_trivial());
}

#[test]
fn bockstein_over_v() {
    let z = FgAbGroup::free(1);
    let two = AbMap::scalar(&z, 2);
    let proj = AbMap::new(z.clone(), FgAbGroup::cyclic(2), IntMatrix::from_rows(&[vec![1]])).unwrap();
    let ses = DiagramSes::constant(FinitePoset::v_shape(), &two, &proj).unwrap();
    let rep = ses.lim_les(1);
    assert!(rep.exact);
    assert!(GroupDiagram::constant(FinitePoset::v_shape(), z).lim_s(1).is_trivial());
}

#[test]
fn towers_satisfy_the_homotopy_identities() {
    let z = FgAbGroup::free(1);
    assert!(ml_homotopy_check(&Tower::constant(&AbMap::identity(&z), 4).unwrap(), 4).unwrap());
    assert!(ml_homotopy_check(&Tower::constant(&AbMap::scalar(&z, 2), 4).unwrap(), 4).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn initial_objects_kill_higher_limits(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let p = g.poset_with_initial();
        let d = g.group_diagram_on(&p, false);
        let lims = d.lims(p.nerve_dimension());
        prop_assert!(lims[0].is_isomorphic(&d.reduce_to_min().unwrap()));
        prop_assert!(lims.iter().skip(1).all(FgAbGroup::is_trivial));
    }

    #[test]
    fn limit_sequences_are_exact(seed in any::<u64>()) {
        let mut g = Gen::with_bounds(seed, Bounds { max_objects: 4, ..Bounds::default() });
        let p = g.poset();
        let ses = g.diagram_ses_on(&p);
        prop_assert!(ses.lim_les(p.nerve_dimension()).exact);
    }

    #[test]
    fn hasse_model_agrees_when_free(seed in any::<u64>()) {
        use prohom::diagram::NerveModel;
        let mut g = Gen::new(seed);
        let n = 1 + g.below(5);
        let p = FinitePoset::chain(n);
        let d = g.group_diagram_on(&p, false);
        let full = d.lims(1);
        let hasse = d.lims_with(NerveModel::Hasse, 1).unwrap();
        for (a, b) in full.iter().zip(&hasse) {
            prop_assert!(a.is_isomorphic(b));
        }
    }
}
