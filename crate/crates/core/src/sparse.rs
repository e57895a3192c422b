//! Sparse integer vectors: sorted `(index, value)` pairs with no stored zeros.

use std::cmp::Ordering;

use crate::integer::Integer;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Integer)>,
}

impl SparseVec {
    pub fn zero() -> SparseVec {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> SparseVec {
        SparseVec { entries: vec![(i, Integer::ONE)] }
    }

    /// Collects pairs in any order, summing duplicates and dropping zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Integer)>) -> SparseVec {
        let mut entries: Vec<(usize, Integer)> = pairs.into_iter().collect();
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, Integer)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some((j, w)) if *j == i => *w += &v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|e| !e.1.is_zero());
        SparseVec { entries: out }
    }

    pub fn from_dense(values: &[Integer]) -> SparseVec {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn from_i64(values: &[i64]) -> SparseVec {
        SparseVec::from_pairs(values.iter().enumerate().map(|(i, v)| (i, Integer::from(*v))))
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Integer> {
        let mut out = vec![Integer::ZERO; dim];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, (usize, Integer)> {
        self.entries.iter()
    }

    pub fn leading(&self) -> Option<(usize, &Integer)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn get(&self, i: usize) -> Integer {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Integer::ZERO,
        }
    }

    /// Largest stored index plus one.
    pub fn support_end(&self) -> usize {
        self.entries.last().map_or(0, |e| e.0 + 1)
    }

    /// `a*self + b*other`.
    pub fn combine(&self, a: &Integer, other: &SparseVec, b: &Integer) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut p, mut q) = (0, 0);
        let (x, y) = (&self.entries, &other.entries);
        while p < x.len() || q < y.len() {
            let ord = match (x.get(p), y.get(q)) {
                (Some(u), Some(v)) => u.0.cmp(&v.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    let v = a * &x[p].1;
                    if !v.is_zero() {
                        out.push((x[p].0, v));
                    }
                    p += 1;
                }
                Ordering::Greater => {
                    let v = b * &y[q].1;
                    if !v.is_zero() {
                        out.push((y[q].0, v));
                    }
                    q += 1;
                }
                Ordering::Equal => {
                    let v = &(a * &x[p].1) + &(b * &y[q].1);
                    if !v.is_zero() {
                        out.push((x[p].0, v));
                    }
                    p += 1;
                    q += 1;
                }
            }
        }
        SparseVec { entries: out }
    }

    /// `self + c*other`.
    pub fn add_scaled(&self, c: &Integer, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        self.combine(&Integer::ONE, other, c)
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.combine(&Integer::ONE, other, &Integer::ONE)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.combine(&Integer::ONE, other, &Integer::from(-1))
    }

    pub fn scale(&self, c: &Integer) -> SparseVec {
        if c.is_zero() {
            return SparseVec::zero();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect() }
    }

    /// Moves every index by `offset`.
    pub fn shifted(&self, offset: usize) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (i + offset, v.clone())).collect() }
    }

    /// Keeps indices in `[lo, hi)` and re-bases them to start at zero.
    pub fn slice(&self, lo: usize, hi: usize) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| *i >= lo && *i < hi)
                .map(|(i, v)| (i - lo, v.clone()))
                .collect(),
        }
    }

    pub fn dot(&self, other: &SparseVec) -> Integer {
        let mut acc = Integer::ZERO;
        let (mut p, mut q) = (0, 0);
        while p < self.entries.len() && q < other.entries.len() {
            match self.entries[p].0.cmp(&other.entries[q].0) {
                Ordering::Less => p += 1,
                Ordering::Greater => q += 1,
                Ordering::Equal => {
                    acc += &(&self.entries[p].1 * &other.entries[q].1);
                    p += 1;
                    q += 1;
                }
            }
        }
        acc
    }

    /// Maps indices through `f`; entries whose image is `None` are dropped.
    pub fn reindex(&self, f: impl Fn(usize) -> Option<usize>) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().filter_map(|(i, v)| f(*i).map(|j| (j, v.clone()))))
    }
}

/// `Σ coeffs[k] * vecs[k]`.
pub fn linear_combination(coeffs: &[Integer], vecs: &[SparseVec]) -> SparseVec {
    let mut acc = SparseVec::zero();
    for (c, v) in coeffs.iter().zip(vecs) {
        if !c.is_zero() {
            acc = acc.add_scaled(c, v);
        }
    }
    acc
}
