//! Tensor product, Tor₁ and Hom of finitely generated abelian groups, plus
//! integer linear membership.
//!
//! The `tensor`, `tor1` and `hom_group` functions work on canonical forms. The
//! `*_presented` variants build the same groups from the presentations directly
//! (Kronecker products of relation matrices, kernels of induced maps) and serve
//! as an independent route.

use crate::group::{AbMap, Canonical, FgAbGroup};
use crate::integer::Integer;
use crate::lattice::Echelon;
use crate::matrix::IntMatrix;
use crate::snf::snf;
use crate::sparse::SparseVec;

fn split(c: &Canonical) -> (usize, &[Integer]) {
    (c.free_rank, &c.invariant_factors)
}

fn gcds(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    a.iter().flat_map(|x| b.iter().map(move |y| x.gcd(y))).collect()
}

fn repeat(orders: &[Integer], k: usize) -> Vec<Integer> {
    (0..k).flat_map(|_| orders.iter().cloned()).collect()
}

pub fn tensor(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let (ra, ta) = split(a.canonical());
    let (rb, tb) = split(b.canonical());
    let mut orders = repeat(ta, rb);
    orders.extend(repeat(tb, ra));
    orders.extend(gcds(ta, tb));
    FgAbGroup::from_cyclic(ra * rb, &orders)
}

pub fn tor1(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let (_, ta) = split(a.canonical());
    let (_, tb) = split(b.canonical());
    FgAbGroup::from_cyclic(0, &gcds(ta, tb))
}

pub fn hom_group(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let (ra, ta) = split(a.canonical());
    let (rb, tb) = split(b.canonical());
    let mut orders = repeat(tb, ra);
    orders.extend(gcds(ta, tb));
    FgAbGroup::from_cyclic(ra * rb, &orders)
}

/// `A ⊗ B` as `Z^{nA·nB}` modulo `R_A ⊗ 1` and `1 ⊗ R_B`; generator `(i, j)` has index `i·nB + j`.
pub fn tensor_presented(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let (na, nb) = (a.generators(), b.generators());
    let left = a.relations().kronecker(&IntMatrix::identity(nb));
    let right = IntMatrix::identity(na).kronecker(b.relations());
    FgAbGroup::new(na * nb, left.hstack(&right).expect("row counts agree")).expect("shape")
}

/// A relation matrix with linearly independent columns for `a`, i.e. a free resolution
/// `0 → Z^q → Z^n → A → 0`.
pub fn injective_relations(a: &FgAbGroup) -> IntMatrix {
    IntMatrix::from_columns(a.generators(), a.relation_lattice().basis())
}

/// `Tor₁(A, B) = ker(R ⊗ B : B^q → B^n)` for an injective relation matrix `R` of `A`.
pub fn tor1_presented(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let r = injective_relations(a);
    let src = b.power(r.cols());
    let tgt = b.power(a.generators());
    let map = AbMap::new(src, tgt, r.kronecker(&IntMatrix::identity(b.generators()))).expect("R ⊗ B is well defined");
    map.kernel().0
}

/// `Hom(A, B) = ker(B^n → B^q, φ ↦ φ∘R)`.
pub fn hom_presented(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let r = injective_relations(a);
    let src = b.power(a.generators());
    let tgt = b.power(r.cols());
    let map = AbMap::new(src, tgt, r.transpose().kronecker(&IntMatrix::identity(b.generators())))
        .expect("precomposition is well defined");
    map.kernel().0
}

/// Outcome of an integer linear solve `M·x = v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Solution(Vec<Integer>),
    /// `U·v` violates the Smith form `S = U·M·V`: `residue` is that vector and
    /// `row` the first coordinate that is not a multiple of the diagonal entry
    /// (or nonzero past the rank).
    NotInImage { residue: Vec<Integer>, row: usize },
}

pub fn solve_membership(m: &IntMatrix, v: &[Integer]) -> Membership {
    assert_eq!(m.rows(), v.len(), "right-hand side length must match the row count");
    let mut e = Echelon::new(m.rows(), true);
    for c in m.columns() {
        e.push(c);
    }
    let target = SparseVec::from_dense(v);
    if let Some(x) = e.solve(&target) {
        return Membership::Solution(x.to_dense(m.cols()));
    }
    let f = snf(m);
    let uv = f.u.apply(&target).to_dense(m.rows());
    let diag = f.s.diagonal_entries();
    let row = (0..m.rows())
        .find(|&i| match diag.get(i) {
            Some(d) if !d.is_zero() => !d.divides(&uv[i]),
            _ => !uv[i].is_zero(),
        })
        .expect("an unsolvable system has an obstructed row");
    Membership::NotInImage { residue: uv, row }
}
