mod common;

use proptest::prelude::*;

use prohom::complexes::{uct_pairing, uct_verify};
use prohom::corpus::Gen;
use prohom::{ChainComplex, FgAbGroup, IntMatrix};

use common::*;

fn times(k: i64) -> ChainComplex {
    ChainComplex::free(0, &[1, 1], &[IntMatrix::from_rows(&[vec![k]])]).unwrap()
}

#[test]
fn times_two_homology() {
    let c = times(2);
    assert_eq!(c.homology(0).to_string(), "Z/2");
    assert!(c.homology(1).is_trivial());
    let oracle = free_homology(&[1, 1], &[IntMatrix::from_rows(&[vec![2]])], 0);
    assert_eq!(c.homology(0).canonical(), &oracle);
}

#[test]
fn times_two_mod_two() {
    let c = times(2).tensor_with(&FgAbGroup::cyclic(2)).unwrap();
    assert!(c.differential(1).is_zero());
    assert_eq!(c.homology(0).to_string(), "Z/2");
    assert_eq!(c.homology(1).to_string(), "Z/2");
}

#[test]
fn pairings() {
    let z2 = FgAbGroup::cyclic(2);
    let p = uct_pairing(&times(0), &z2, 0).unwrap();
    assert!(p.is_iso());
    assert_eq!(p.target().to_string(), "Z/2");
    let p = uct_pairing(&times(2), &z2, 1).unwrap();
    assert!(p.is_mono());
    assert!(p.source().is_trivial());
    assert_eq!(p.cokernel().0.to_string(), "Z/2");
    let rep = uct_verify(&times(2), &z2, 1).unwrap();
    assert!(rep.sequence_exact);
    assert_eq!(rep.cokernel, rep.tor_term);
    assert_eq!(rep.tor_term.to_string(), "Z/2");
}

#[test]
fn direct_sums_double_homology() {
    let c = times(2);
    let cc = ChainComplex::direct_sum(&[c.clone(), c]);
    assert_eq!(cc.homology(0).to_string(), "Z/2 + Z/2");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn universal_coefficients_against_the_cone(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let c = g.free_complex();
        let coeff = g.group();
        for n in c.lo()..=c.hi() + 1 {
            let rep = uct_verify(&c, &coeff, n).unwrap();
            prop_assert!(rep.sequence_exact, "degree {}", n);
            prop_assert_eq!(&rep.middle, &tensor_homology_oracle(&c, &coeff, n));
            prop_assert_eq!(&rep.tensor_term, &tensor_oracle(c.homology(n).canonical(), coeff.canonical()));
            prop_assert_eq!(&rep.tor_term, &tor_oracle(c.homology(n - 1).canonical(), coeff.canonical()));
        }
    }

    #[test]
    fn homology_matches_elementary_divisors(seed in any::<u64>()) {
        let c = Gen::new(seed).free_complex();
        let ranks: Vec<usize> = (c.lo()..=c.hi()).map(|n| c.rank(n)).collect();
        let ds: Vec<IntMatrix> = c.differentials().iter().map(|d| d.matrix().clone()).collect();
        for (k, n) in (c.lo()..=c.hi()).enumerate() {
            prop_assert_eq!(c.homology(n).canonical().clone(), free_homology(&ranks, &ds, k));
        }
    }
}
