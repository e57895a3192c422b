//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, Zero};

use prohom::bifunctor::injective_relations;
use prohom::snf::elementary_divisors;
use prohom::specseq::Bicomplex;
use prohom::subquotient::images_under;
use prohom::{AbMap, Canonical, ChainComplex, FgAbGroup, IntMatrix, Integer, Subquotient};

pub fn big(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.to_rows().iter().map(|r| r.iter().map(Integer::to_big).collect()).collect()
}

/// Laplace expansion along the first row.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        0 => BigInt::from(1),
        1 => m[0][0].clone(),
        n => {
            let mut total = BigInt::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect()).collect();
                let term = &m[0][j] * det(&minor);
                if j % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// gcd of all `k × k` minors, by enumeration.
pub fn minors_gcd(m: &[Vec<BigInt>], cols: usize, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rs in subsets(m.len(), k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect()).collect();
            g = g.gcd(&det(&sub));
        }
    }
    g.abs()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], inner: usize, cols: usize) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|r| (0..cols).map(|j| (0..inner).map(|k| &r[k] * &b[k][j]).sum()).collect())
        .collect()
}

fn canonical_from(free: usize, orders: &[BigInt]) -> Canonical {
    let orders: Vec<Integer> = orders.iter().map(|d| Integer::from(d.clone())).collect();
    Canonical::from_cyclic(free, &orders)
}

/// Cyclic summands of a canonical form: `0` for each free one.
fn summands(c: &Canonical) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); c.free_rank];
    out.extend(c.invariant_factors.iter().map(Integer::to_big));
    out
}

/// `A ⊗ B` from cyclic decompositions: `Z/a ⊗ Z/b = Z/gcd(a, b)` with `Z = Z/0`.
pub fn tensor_oracle(a: &Canonical, b: &Canonical) -> Canonical {
    let mut free = 0;
    let mut orders = Vec::new();
    for x in summands(a) {
        for y in summands(b) {
            let g = x.gcd(&y);
            if g.is_zero() {
                free += 1;
            } else {
                orders.push(g);
            }
        }
    }
    canonical_from(free, &orders)
}

/// `Tor₁(A, B)`: only pairs of finite cyclic summands contribute.
pub fn tor_oracle(a: &Canonical, b: &Canonical) -> Canonical {
    let mut orders = Vec::new();
    for x in summands(a) {
        for y in summands(b) {
            if !x.is_zero() && !y.is_zero() {
                orders.push(x.gcd(&y));
            }
        }
    }
    canonical_from(0, &orders)
}

pub fn direct_sum_oracle(a: &Canonical, b: &Canonical) -> Canonical {
    let mut orders: Vec<BigInt> = summands(a).into_iter().chain(summands(b)).filter(|x| !x.is_zero()).collect();
    orders.sort();
    canonical_from(a.free_rank + b.free_rank, &orders)
}

/// Homology of a complex of free groups given by its ranks and differentials
/// `d[k]: Z^{ranks[k+1]} → Z^{ranks[k]}`, read off elementary divisors.
pub fn free_homology(ranks: &[usize], d: &[IntMatrix], k: usize) -> Canonical {
    let rank_of = |j: usize| d.get(j).map_or(0, |m| elementary_divisors(m).len());
    let outgoing = if k == 0 { 0 } else { rank_of(k - 1) };
    let incoming = elementary_divisors_or_empty(d.get(k));
    let free = ranks[k] - outgoing - incoming.len();
    let torsion: Vec<BigInt> = incoming.iter().map(Integer::to_big).filter(|x| x > &BigInt::from(1)).collect();
    canonical_from(free, &torsion)
}

fn elementary_divisors_or_empty(m: Option<&IntMatrix>) -> Vec<Integer> {
    m.map(elementary_divisors).unwrap_or_default()
}

/// `H_n(C ⊗ G)` for free `C`, through the mapping cone of `C ⊗ R` where `R` is an
/// injective relation matrix of `G`; the cone is a free complex.
pub fn tensor_homology_oracle(c: &ChainComplex, g: &FgAbGroup, n: i64) -> Canonical {
    if c.is_empty() || n < c.lo() || n > c.hi() + 1 {
        return Canonical::trivial();
    }
    let r = injective_relations(g);
    let (ng, nr) = (r.rows(), r.cols());
    let lo = c.lo();
    let len = (c.hi() - lo + 1) as usize;
    let rank = |k: i64| if k < lo || k > c.hi() { 0 } else { c.rank(k) };
    // Cone degree k (k = lo..=hi+1): (C_k ⊗ Z^ng) ⊕ (C_{k−1} ⊗ Z^nr).
    let cone_rank = |k: i64| rank(k) * ng + rank(k - 1) * nr;
    let ranks: Vec<usize> = (0..=len as i64).map(|k| cone_rank(lo + k)).collect();
    let kron = |a: &IntMatrix, b: &IntMatrix| a.kronecker(b);
    let dmat = |k: i64| -> IntMatrix {
        if k <= lo || k > c.hi() {
            IntMatrix::zeros(rank(k - 1), rank(k))
        } else {
            c.differential(k).matrix().clone()
        }
    };
    let mut diffs = Vec::new();
    for k in lo + 1..=lo + len as i64 {
        // (b, a) ↦ (d b + (1⊗R) a, −d a)
        let (b_src, a_src) = (rank(k) * ng, rank(k - 1) * nr);
        let (b_tgt, a_tgt) = (rank(k - 1) * ng, rank(k - 2) * nr);
        let mut m = IntMatrix::zeros(b_tgt + a_tgt, b_src + a_src);
        let db = kron(&dmat(k), &IntMatrix::identity(ng));
        let fa = kron(&IntMatrix::identity(rank(k - 1)), &r);
        let da = kron(&dmat(k - 1), &IntMatrix::identity(nr)).neg();
        for i in 0..b_tgt {
            for j in 0..b_src {
                m[(i, j)] = db[(i, j)].clone();
            }
            for j in 0..a_src {
                m[(i, b_src + j)] = fa[(i, j)].clone();
            }
        }
        for i in 0..a_tgt {
            for j in 0..a_src {
                m[(b_tgt + i, b_src + j)] = da[(i, j)].clone();
            }
        }
        diffs.push(m);
    }
    free_homology(&ranks, &diffs, (n - lo) as usize)
}

/// `E₁^{s,t} = ker δ / im δ` inside the cell.
pub fn e1(b: &Bicomplex, s: usize, t: i64) -> Subquotient {
    let out: AbMap = b.delta_map((s, t));
    let inc: AbMap = b.delta_map((s, t - 1));
    Subquotient::new(out.kernel_lattice(), inc.image_lattice())
}

/// `E₂ = H(E₁, d)` on the groups `E₁` with the induced maps.
pub fn e2_oracle(b: &Bicomplex, s: usize, t: i64) -> Canonical {
    let here = e1(b, s, t);
    let out = if s < b.smax() {
        let next = e1(b, s + 1, t);
        here.abmap_to(&next, &images_under(&here, &b.d_map((s, t)).columns()))
    } else {
        AbMap::zero(here.to_group(), &FgAbGroup::trivial())
    };
    let cycles = out.kernel_lattice();
    let boundaries = if s > 0 {
        let prev = e1(b, s - 1, t);
        let inc = prev.abmap_to(&here, &images_under(&prev, &b.d_map((s - 1, t)).columns()));
        inc.image_lattice()
    } else {
        here.to_group().relation_lattice().clone()
    };
    Subquotient::new(cycles, boundaries).to_group().canonical().clone()
}
