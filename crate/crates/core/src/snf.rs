//! Smith normal form with unimodular transforms.

use crate::integer::Integer;
use crate::matrix::IntMatrix;

/// `u · m · v = s` with `s` diagonal, `s₁₁ | s₂₂ | …`, and `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct Snf {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries, in divisibility order.
    pub fn nonzero_diagonal(&self) -> Vec<Integer> {
        self.s.diagonal_entries().into_iter().filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.nonzero_diagonal().len()
    }
}

struct Work {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
    }

    fn add_row(&mut self, target: usize, source: usize, c: &Integer) {
        self.a.add_row_multiple(target, source, c);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(target, source, c);
        }
    }

    fn add_col(&mut self, target: usize, source: usize, c: &Integer) {
        self.a.add_col_multiple(target, source, c);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(target, source, c);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
    }

    /// Position of a minimal-absolute-value nonzero entry in the lower-right block.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let e = &self.a[(i, j)];
                if e.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => e.cmp_abs(&self.a[b]) == std::cmp::Ordering::Less,
                };
                if better {
                    best = Some((i, j));
                    if e.is_unit() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let (rows, cols) = (self.a.rows(), self.a.cols());
        for t in 0..rows.min(cols) {
            loop {
                let Some((pi, pj)) = self.min_pivot(t) else { return };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let piv = self.a[(t, t)].clone();
                let mut dirty = false;
                for i in t + 1..rows {
                    let e = self.a[(i, t)].clone();
                    if e.is_zero() {
                        continue;
                    }
                    let q = e.div_round(&piv);
                    self.add_row(i, t, &-q);
                    dirty |= !self.a[(i, t)].is_zero();
                }
                for j in t + 1..cols {
                    let e = self.a[(t, j)].clone();
                    if e.is_zero() {
                        continue;
                    }
                    let q = e.div_round(&piv);
                    self.add_col(j, t, &-q);
                    dirty |= !self.a[(t, j)].is_zero();
                }
                if dirty {
                    continue;
                }
                let offender = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| !piv.divides(&self.a[(i, j)])));
                if let Some(i) = offender {
                    self.add_row(t, i, &Integer::ONE);
                    continue;
                }
                if piv.is_negative() {
                    self.negate_row(t);
                }
                break;
            }
        }
    }
}

pub fn snf(m: &IntMatrix) -> Snf {
    let mut w = Work {
        a: m.clone(),
        u: Some(IntMatrix::identity(m.rows())),
        v: Some(IntMatrix::identity(m.cols())),
    };
    w.run();
    Snf { s: w.a, u: w.u.unwrap(), v: w.v.unwrap() }
}

/// Nonzero invariant factors (including ones) of `m`, without transforms.
pub fn elementary_divisors(m: &IntMatrix) -> Vec<Integer> {
    let mut w = Work { a: m.clone(), u: None, v: None };
    w.run();
    w.a.diagonal_entries().into_iter().filter(|d| !d.is_zero()).collect()
}
