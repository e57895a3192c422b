//! Finite posets viewed as index categories.
//!
//! Arrows point from larger to smaller elements: an arrow `a → b` records
//! `a > b`. The initial object of the index category is therefore the top
//! element of the poset, when it exists.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FinitePoset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    arrows: Vec<(usize, usize)>,
    /// `ge[a][b]` iff `a ≥ b`.
    ge: Vec<Vec<bool>>,
    hasse: Vec<(usize, usize)>,
}

impl FinitePoset {
    /// Builds the poset generated by `arrows` (pairs `from > to`).
    pub fn new(labels: Vec<String>, arrows: &[(String, String)]) -> Result<FinitePoset> {
        let mut index = HashMap::new();
        for (k, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), k).is_some() {
                return Err(Error::Invalid(format!("duplicate object {l}")));
            }
        }
        let look = |s: &String| index.get(s).copied().ok_or_else(|| Error::UnknownObject(s.clone()));
        let pairs = arrows.iter().map(|(a, b)| Ok((look(a)?, look(b)?))).collect::<Result<Vec<_>>>()?;
        FinitePoset::build(labels, index, pairs)
    }

    pub fn from_indices(n: usize, arrows: &[(usize, usize)]) -> Result<FinitePoset> {
        let labels: Vec<String> = (0..n).map(|k| k.to_string()).collect();
        let index = labels.iter().cloned().enumerate().map(|(k, l)| (l, k)).collect();
        if let Some(&(a, b)) = arrows.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::UnknownObject(if a >= n { a } else { b }.to_string()));
        }
        FinitePoset::build(labels, index, arrows.to_vec())
    }

    fn build(labels: Vec<String>, index: HashMap<String, usize>, arrows: Vec<(usize, usize)>) -> Result<FinitePoset> {
        let n = labels.len();
        let mut ge = vec![vec![false; n]; n];
        for (a, row) in ge.iter_mut().enumerate() {
            row[a] = true;
        }
        for &(a, b) in &arrows {
            if a == b {
                return Err(Error::CyclicPoset(labels[a].clone()));
            }
            ge[a][b] = true;
        }
        // Warshall closure on bit rows.
        let words = n.div_ceil(64);
        let mut bits = vec![vec![0u64; words]; n];
        for a in 0..n {
            for b in 0..n {
                if ge[a][b] {
                    bits[a][b / 64] |= 1 << (b % 64);
                }
            }
        }
        for k in 0..n {
            let row_k = bits[k].clone();
            for row in bits.iter_mut() {
                if row[k / 64] >> (k % 64) & 1 == 1 {
                    row.iter_mut().zip(&row_k).for_each(|(x, y)| *x |= y);
                }
            }
        }
        let has = |bits: &Vec<Vec<u64>>, a: usize, b: usize| bits[a][b / 64] >> (b % 64) & 1 == 1;
        for a in 0..n {
            for b in 0..n {
                ge[a][b] = has(&bits, a, b);
            }
        }
        for a in 0..n {
            for b in 0..a {
                if ge[a][b] && ge[b][a] {
                    return Err(Error::CyclicPoset(labels[a].clone()));
                }
            }
        }
        // b is covered by a when it lies strictly below a but below no c strictly below a.
        let strict: Vec<Vec<u64>> = (0..n)
            .map(|a| {
                let mut r = bits[a].clone();
                r[a / 64] &= !(1 << (a % 64));
                r
            })
            .collect();
        let mut hasse = Vec::new();
        for a in 0..n {
            let mut deep = vec![0u64; words];
            for c in 0..n {
                if has(&strict, a, c) {
                    deep.iter_mut().zip(&strict[c]).for_each(|(x, y)| *x |= y);
                }
            }
            for b in 0..n {
                if has(&strict, a, b) && deep[b / 64] >> (b % 64) & 1 == 0 {
                    hasse.push((a, b));
                }
            }
        }
        Ok(FinitePoset { labels, index, arrows, ge, hasse })
    }

    /// `n → n−1 → … → 0`, labelled by the integers.
    pub fn chain(n: usize) -> FinitePoset {
        let arrows: Vec<(usize, usize)> = (0..n).map(|k| (k + 1, k)).collect();
        FinitePoset::from_indices(n + 1, &arrows).expect("a chain is acyclic")
    }

    pub fn discrete(n: usize) -> FinitePoset {
        FinitePoset::from_indices(n, &[]).expect("no arrows")
    }

    /// `a → c ← b`.
    pub fn v_shape() -> FinitePoset {
        let l = |s: &str| s.to_string();
        FinitePoset::new(vec![l("a"), l("b"), l("c")], &[(l("a"), l("c")), (l("b"), l("c"))]).expect("acyclic")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, k: usize) -> &str {
        &self.labels[k]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownObject(label.to_string()))
    }

    /// Generating arrows as given.
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    /// Covering relations of the order.
    pub fn hasse(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    #[inline]
    pub fn ge(&self, a: usize, b: usize) -> bool {
        self.ge[a][b]
    }

    #[inline]
    pub fn gt(&self, a: usize, b: usize) -> bool {
        a != b && self.ge[a][b]
    }

    /// An object with an arrow to every object (the top element).
    pub fn initial_object(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|x| self.ge[t][x]))
    }

    /// Objects in an order compatible with arrows: larger elements first.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&a| std::cmp::Reverse((0..self.len()).filter(|&b| self.ge[a][b]).count()));
        order
    }

    /// Strictly decreasing chains `i₀ > i₁ > … > i_s` grouped by `s`, for
    /// `s ≤ maxdim`, each group in lexicographic order of object indices.
    pub fn nerve(&self, maxdim: usize) -> Vec<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new(); maxdim + 1];
        let mut stack: Vec<usize> = Vec::new();
        fn grow(p: &FinitePoset, stack: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>, maxdim: usize) {
            let s = stack.len() - 1;
            out[s].push(stack.clone());
            if s == maxdim {
                return;
            }
            let last = *stack.last().expect("nonempty");
            for b in 0..p.len() {
                if p.gt(last, b) {
                    stack.push(b);
                    grow(p, stack, out, maxdim);
                    stack.pop();
                }
            }
        }
        for a in 0..self.len() {
            stack.push(a);
            grow(self, &mut stack, &mut out, maxdim);
            stack.pop();
        }
        for level in &mut out {
            level.sort();
        }
        out
    }

    /// Length of the longest strictly decreasing chain, minus one.
    pub fn nerve_dimension(&self) -> usize {
        let order = self.topological_order();
        let mut height = vec![0usize; self.len()];
        for &a in order.iter().rev() {
            height[a] = (0..self.len()).filter(|&b| self.gt(a, b)).map(|b| height[b] + 1).max().unwrap_or(0);
        }
        height.into_iter().max().unwrap_or(0)
    }

    /// Total number of nerve chains, saturating at `cap`.
    pub fn nerve_size(&self, cap: u128) -> u128 {
        // count[a] = number of chains starting at a
        let order = self.topological_order();
        let mut count = vec![0u128; self.len()];
        for &a in order.iter().rev() {
            let below: u128 = (0..self.len()).filter(|&b| self.gt(a, b)).map(|b| count[b]).fold(0, u128::saturating_add);
            count[a] = below.saturating_add(1).min(cap);
        }
        count.into_iter().fold(0u128, u128::saturating_add).min(cap)
    }

    /// Whether every comparable pair is joined by exactly one path of covering
    /// relations, so the order is the free category on its Hasse graph.
    pub fn is_hasse_free(&self) -> bool {
        let n = self.len();
        let order = self.topological_order();
        for &a in &order {
            let mut paths = vec![0u32; n];
            paths[a] = 1;
            for &x in &order {
                if paths[x] == 0 {
                    continue;
                }
                for &(u, v) in &self.hasse {
                    if u == x {
                        paths[v] = (paths[v] + paths[x]).min(2);
                    }
                }
            }
            if paths.iter().any(|&p| p > 1) {
                return false;
            }
        }
        true
    }

    /// The full subposet on `objects` (in the given order), with its Hasse arrows as generators.
    pub fn restrict(&self, objects: &[usize]) -> FinitePoset {
        let labels: Vec<String> = objects.iter().map(|&k| self.labels[k].clone()).collect();
        let mut arrows = Vec::new();
        for (x, &a) in objects.iter().enumerate() {
            for (y, &b) in objects.iter().enumerate() {
                if self.gt(a, b) {
                    arrows.push((x, y));
                }
            }
        }
        let index = labels.iter().cloned().enumerate().map(|(k, l)| (l, k)).collect();
        let full = FinitePoset::build(labels, index, arrows).expect("restriction of a poset");
        let hasse = full.hasse.clone();
        FinitePoset { arrows: hasse, ..full }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_nerve() {
        let p = FinitePoset::chain(2);
        let nerve = p.nerve(5);
        assert_eq!(nerve[0], vec![vec![0], vec![1], vec![2]]);
        assert_eq!(nerve[1], vec![vec![1, 0], vec![2, 0], vec![2, 1]]);
        assert_eq!(nerve[2], vec![vec![2, 1, 0]]);
        assert!(nerve[3].is_empty());
        assert_eq!(p.nerve_dimension(), 2);
        assert_eq!(p.initial_object(), Some(2));
        assert_eq!(p.nerve_size(1000), 7);
    }

    #[test]
    fn small_posets() {
        let one = FinitePoset::discrete(1);
        assert_eq!(one.nerve(3)[0].len(), 1);
        assert!(one.nerve(3)[1].is_empty());
        let two = FinitePoset::discrete(2);
        assert_eq!(two.nerve(2)[0].len(), 2);
        assert!(two.nerve(2)[1].is_empty());
        assert_eq!(two.initial_object(), None);
        assert_eq!(FinitePoset::v_shape().initial_object(), None);
    }

    #[test]
    fn rejects_cycles_and_unknown_objects() {
        assert!(matches!(FinitePoset::from_indices(2, &[(0, 1), (1, 0)]), Err(Error::CyclicPoset(_))));
        assert!(matches!(FinitePoset::from_indices(2, &[(0, 0)]), Err(Error::CyclicPoset(_))));
        let l = |s: &str| s.to_string();
        assert!(matches!(FinitePoset::new(vec![l("a")], &[(l("a"), l("z"))]), Err(Error::UnknownObject(_))));
    }

    #[test]
    fn hasse_freeness() {
        assert!(FinitePoset::chain(5).is_hasse_free());
        assert!(FinitePoset::v_shape().is_hasse_free());
        // a diamond has two covering paths from top to bottom
        let diamond = FinitePoset::from_indices(4, &[(3, 1), (3, 2), (1, 0), (2, 0)]).unwrap();
        assert!(!diamond.is_hasse_free());
        let generated = FinitePoset::from_indices(3, &[(2, 1), (1, 0), (2, 0)]).unwrap();
        assert_eq!(generated.hasse(), &[(1, 0), (2, 1)]);
    }
}
