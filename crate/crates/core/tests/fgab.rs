mod common;

use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

use prohom::bifunctor::{solve_membership, tensor, tor1, Membership};
use prohom::corpus::Gen;
use prohom::snf::snf;
use prohom::{AbMap, FgAbGroup, IntMatrix, Integer};

use common::*;

fn ints(v: &[i64]) -> Vec<Integer> {
    v.iter().map(|&x| x.into()).collect()
}

fn matrix_strategy(max: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r).prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_matches_minors(m in matrix_strategy(4, 20)) {
        let r = snf(&m);
        let (mb, ub, vb, sb) = (big(&m), big(&r.u), big(&r.v), big(&r.s));
        prop_assert_eq!(mat_mul(&mat_mul(&ub, &mb, m.rows(), m.cols()), &vb, m.cols(), m.cols()), sb.clone());
        prop_assert_eq!(det(&ub).abs(), BigInt::from(1));
        prop_assert_eq!(det(&vb).abs(), BigInt::from(1));
        let mut prod = BigInt::from(1);
        for k in 1..=m.rows().min(m.cols()) {
            prod *= &sb[k - 1][k - 1];
            prop_assert!(!sb[k - 1][k - 1].is_negative());
            prop_assert_eq!(&prod, &minors_gcd(&mb, m.cols(), k));
        }
    }

    #[test]
    fn large_smith_forms_are_valid(m in matrix_strategy(6, 20)) {
        let r = snf(&m);
        prop_assert_eq!(r.u.mul(&m).unwrap().mul(&r.v).unwrap(), r.s.clone());
        prop_assert!(r.s.is_diagonal());
        let d = r.nonzero_diagonal();
        prop_assert!(d.windows(2).all(|w| w[0].divides(&w[1])));
    }
}

#[test]
fn two_by_two_example() {
    let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
    assert_eq!(snf(&m).nonzero_diagonal(), ints(&[2, 4]));
    assert_eq!(minors_gcd(&big(&m), 2, 1), BigInt::from(2));
    assert_eq!(minors_gcd(&big(&m), 2, 2), BigInt::from(8));
}

#[test]
fn cokernels() {
    let g = FgAbGroup::new(2, IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]])).unwrap();
    assert_eq!(g.canonical().free_rank, 0);
    assert_eq!(g.canonical().invariant_factors, ints(&[6]));
    let f = AbMap::new(FgAbGroup::free(1), FgAbGroup::free(2), IntMatrix::from_rows(&[vec![1], vec![1]])).unwrap();
    assert_eq!(f.cokernel().0.to_string(), "Z");
}

#[test]
fn cyclic_merges() {
    let g = FgAbGroup::direct_sum(&[FgAbGroup::cyclic(2), FgAbGroup::cyclic(3)]).sum;
    assert_eq!(g.canonical().invariant_factors, ints(&[6]));
    assert!(g.is_isomorphic(&FgAbGroup::cyclic(6)));
}

#[test]
fn bifunctors_of_cyclic_groups() {
    let (a, b) = (FgAbGroup::cyclic(4), FgAbGroup::cyclic(6));
    assert_eq!(tensor(&a, &b).to_string(), "Z/2");
    assert_eq!(tor1(&a, &b).to_string(), "Z/2");
}

#[test]
fn membership() {
    let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
    assert_eq!(solve_membership(&m, &ints(&[2, 6])), Membership::Solution(ints(&[1, 0])));
    assert!(matches!(solve_membership(&m, &ints(&[1, 0])), Membership::NotInImage { .. }));
}

#[test]
fn bifunctors_are_symmetric_and_match_cyclic_oracle() {
    let mut g = Gen::new(11);
    for _ in 0..100 {
        let (a, b) = (g.group(), g.group());
        let ab = tensor(&a, &b).canonical().clone();
        assert_eq!(&ab, tensor(&b, &a).canonical());
        assert_eq!(ab, tensor_oracle(a.canonical(), b.canonical()));
        let t = tor1(&a, &b).canonical().clone();
        assert_eq!(&t, tor1(&b, &a).canonical());
        assert_eq!(t, tor_oracle(a.canonical(), b.canonical()));
    }
}

#[test]
fn rank_nullity_and_first_isomorphism() {
    let mut g = Gen::new(12);
    for _ in 0..100 {
        let (r, c) = (1 + g.below(4), 1 + g.below(4));
        let f = AbMap::new(FgAbGroup::free(c), FgAbGroup::free(r), g.matrix(r, c)).unwrap();
        let (k, inc) = f.kernel();
        let im = f.image_lattice();
        assert_eq!(c, k.canonical().free_rank + im.rank());
        let quotient = inc.cokernel().0;
        let image = f.image();
        assert!(quotient.is_isomorphic(&image.group));
        assert!(k.is_free());
    }
}
