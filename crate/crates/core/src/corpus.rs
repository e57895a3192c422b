//! Seeded random instances: matrices, groups, complexes, posets, diagrams,
//! short exact sequences of diagrams and bicomplexes.
//!
//! Structured objects are assembled from small pieces whose invariants hold by
//! construction, then disguised by random unimodular changes of basis.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complexes::{ChainComplex, ChainMap};
use crate::diagram::{ComplexDiagram, DiagramSes, GroupDiagram};
use crate::group::{AbMap, FgAbGroup};
use crate::integer::Integer;
use crate::matrix::IntMatrix;
use crate::poset::FinitePoset;
use crate::specseq::{Bicomplex, Cell};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_objects: usize,
    pub max_length: usize,
    pub max_rank: usize,
    pub max_entry: i64,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds { max_objects: 5, max_length: 4, max_rank: 4, max_entry: 9 }
    }
}

type Dense = Vec<Vec<i64>>;

fn to_matrix(rows: usize, cols: usize, m: &Dense) -> IntMatrix {
    let entries = m.iter().flat_map(|r| r.iter().map(|&x| Integer::from(x))).collect();
    IntMatrix::new(rows, cols, entries).expect("shape")
}

fn dense_mul(a: &Dense, b: &Dense, inner: usize, cols: usize) -> Dense {
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

fn dense_identity(n: usize) -> Dense {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn max_abs(m: &Dense) -> i64 {
    m.iter().flatten().map(|x| x.abs()).max().unwrap_or(0)
}

/// Deterministic generator of random instances.
pub struct Gen {
    rng: ChaCha8Rng,
    pub bounds: Bounds,
}

/// One summand of a piecewise diagram: present on the convex set `support`,
/// with maps `×mult` across the boundary of the up-set `upper` and identities otherwise.
struct Piece<T> {
    support: Vec<bool>,
    upper: Vec<bool>,
    mult: i64,
    content: T,
}

/// Elementary free complexes: `Z` in one degree, or `Z --×q--> Z` from `k+1` to `k`.
#[derive(Clone, Copy)]
enum Elementary {
    Point(usize),
    Arrow(usize, i64),
}

impl Elementary {
    fn rank(self, k: usize) -> usize {
        match self {
            Elementary::Point(j) => usize::from(j == k),
            Elementary::Arrow(j, _) => usize::from(j == k || j + 1 == k),
        }
    }
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen::with_bounds(seed, Bounds::default())
    }

    pub fn with_bounds(seed: u64, bounds: Bounds) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), bounds }
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn entry(&mut self) -> i64 {
        let m = self.bounds.max_entry;
        self.range(-m, m)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> IntMatrix {
        let m: Dense = (0..rows).map(|_| (0..cols).map(|_| self.entry()).collect()).collect();
        to_matrix(rows, cols, &m)
    }

    /// Matrices where zero entries are common, so that ranks vary.
    pub fn sparse_matrix(&mut self, rows: usize, cols: usize, max_entry: i64) -> IntMatrix {
        let m: Dense = (0..rows)
            .map(|_| (0..cols).map(|_| if self.chance(0.5) { 0 } else { self.range(-max_entry, max_entry) }).collect())
            .collect();
        to_matrix(rows, cols, &m)
    }

    /// A random unimodular matrix and its inverse.
    fn unimodular(&mut self, n: usize, steps: usize) -> (Dense, Dense) {
        let mut u = dense_identity(n);
        let mut inv = dense_identity(n);
        if n == 0 {
            return (u, inv);
        }
        for _ in 0..steps {
            let i = self.below(n);
            let j = self.below(n);
            if i == j {
                // negate row i of u, column i of inv
                u[i].iter_mut().for_each(|x| *x = -*x);
                inv.iter_mut().for_each(|r| r[i] = -r[i]);
                continue;
            }
            let c = *[-1i64, 1, 1, 2, -2].choose(&mut self.rng).expect("nonempty");
            // row j += c·row i; then column i −= c·column j of the inverse
            let ri = u[i].clone();
            u[j].iter_mut().zip(&ri).for_each(|(x, y)| *x += c * y);
            for r in inv.iter_mut() {
                r[i] -= c * r[j];
            }
        }
        (u, inv)
    }

    /// A change of basis whose conjugates of `mats` stay within the entry bound.
    fn bounded_unimodular(&mut self, n: usize) -> (Dense, Dense) {
        let steps = self.below(2 * n + 1);
        self.unimodular(n, steps)
    }

    /// A finitely generated group, possibly with a non-diagonal presentation.
    pub fn group(&mut self) -> FgAbGroup {
        let free = self.below(3);
        let cyclic = self.below(3);
        let orders: Vec<Integer> = (0..cyclic).map(|_| Integer::from(self.range(2, self.bounds.max_entry.max(2)))).collect();
        let g = FgAbGroup::from_cyclic(free, &orders);
        let n = g.generators();
        let (u, _) = self.bounded_unimodular(n);
        let rel = g.relations();
        let rel_dense: Dense = rel.to_rows().iter().map(|r| r.iter().map(|x| x.to_i64().expect("small")).collect()).collect();
        let moved = dense_mul(&u, &rel_dense, n, rel.cols());
        if max_abs(&moved) > self.bounds.max_entry {
            return g;
        }
        FgAbGroup::new(n, to_matrix(n, rel.cols(), &moved)).expect("shape")
    }

    /// A bounded free chain complex `C_lo ← … ← C_{lo+len−1}` with `lo = 0`.
    pub fn free_complex(&mut self) -> ChainComplex {
        let len = 1 + self.below(self.bounds.max_length);
        self.free_complex_of_length(len, self.bounds.max_rank)
    }

    pub fn free_complex_of_length(&mut self, len: usize, max_rank: usize) -> ChainComplex {
        for _ in 0..32 {
            let pieces = self.elementary_pieces(len, max_rank);
            let ranks: Vec<usize> = (0..len).map(|k| pieces.iter().map(|p| p.rank(k)).sum()).collect();
            if let Some(c) = self.assemble_complex(&pieces, &ranks, len) {
                return c;
            }
        }
        ChainComplex::free(0, &vec![0; len], &vec![IntMatrix::zeros(0, 0); len - 1]).expect("zero complex")
    }

    fn elementary_pieces(&mut self, len: usize, max_rank: usize) -> Vec<Elementary> {
        let mut pieces = Vec::new();
        let mut ranks = vec![0usize; len];
        for _ in 0..(2 * len + 2) {
            let p = if len > 1 && self.chance(0.6) {
                let k = self.below(len - 1);
                let q = *[0i64, 1, 2, 2, 3, 4, 6, -3].choose(&mut self.rng).expect("nonempty");
                Elementary::Arrow(k, q)
            } else {
                Elementary::Point(self.below(len))
            };
            if (0..len).all(|k| ranks[k] + p.rank(k) <= max_rank) {
                (0..len).for_each(|k| ranks[k] += p.rank(k));
                pieces.push(p);
            }
        }
        pieces
    }

    fn assemble_complex(&mut self, pieces: &[Elementary], ranks: &[usize], len: usize) -> Option<ChainComplex> {
        let bases: Vec<(Dense, Dense)> = ranks.iter().map(|&r| self.bounded_unimodular(r)).collect();
        let mut mats = Vec::new();
        for k in 0..len.saturating_sub(1) {
            // d_{k+1}: C_{k+1} → C_k
            let mut m = vec![vec![0i64; ranks[k + 1]]; ranks[k]];
            let (mut row, mut col) = (0, 0);
            for p in pieces {
                if let Elementary::Arrow(j, q) = *p {
                    if j == k {
                        m[row][col] = q;
                    }
                }
                row += p.rank(k);
                col += p.rank(k + 1);
            }
            let conj = dense_mul(&dense_mul(&bases[k].0, &m, ranks[k], ranks[k + 1]), &bases[k + 1].1, ranks[k + 1], ranks[k + 1]);
            if max_abs(&conj) > self.bounds.max_entry {
                return None;
            }
            mats.push(to_matrix(ranks[k], ranks[k + 1], &conj));
        }
        ChainComplex::free(0, ranks, &mats).ok()
    }

    /// A poset on `1..=max_objects` elements, arrows from larger to smaller index.
    pub fn poset(&mut self) -> FinitePoset {
        let n = 1 + self.below(self.bounds.max_objects);
        self.poset_of_size(n)
    }

    pub fn poset_of_size(&mut self, n: usize) -> FinitePoset {
        let mut arrows = Vec::new();
        for a in 0..n {
            for b in 0..a {
                if self.chance(0.45) {
                    arrows.push((a, b));
                }
            }
        }
        FinitePoset::from_indices(n, &arrows).expect("arrows decrease the index")
    }

    /// A poset whose index category has an initial object.
    pub fn poset_with_initial(&mut self) -> FinitePoset {
        let n = 1 + self.below(self.bounds.max_objects);
        let base = self.poset_of_size(n - 1);
        let mut arrows: Vec<(usize, usize)> = base.arrows().to_vec();
        for b in 0..n - 1 {
            if !(0..n - 1).any(|a| base.gt(a, b)) {
                arrows.push((n - 1, b));
            }
        }
        FinitePoset::from_indices(n, &arrows).expect("acyclic")
    }

    fn convex_piece<T>(&mut self, p: &FinitePoset, content: T) -> Piece<T> {
        let n = p.len();
        let seed: Vec<bool> = (0..n).map(|_| self.chance(0.5)).collect();
        let support: Vec<bool> = (0..n).map(|y| (0..n).any(|x| seed[x] && p.ge(x, y)) && (0..n).any(|z| seed[z] && p.ge(y, z))).collect();
        let gens: Vec<bool> = (0..n).map(|_| self.chance(0.3)).collect();
        let upper: Vec<bool> = (0..n).map(|y| (0..n).any(|x| gens[x] && p.ge(y, x))).collect();
        let mult = *[1i64, -1, 2, 3, 0].choose(&mut self.rng).expect("nonempty");
        Piece { support, upper, mult, content }
    }

    fn piece_scalar<T>(piece: &Piece<T>, a: usize, b: usize) -> i64 {
        if piece.upper[a] && !piece.upper[b] {
            piece.mult
        } else {
            1
        }
    }

    /// A functorial diagram of groups; with `free_only`, every level is free.
    pub fn group_diagram_on(&mut self, p: &FinitePoset, free_only: bool) -> GroupDiagram {
        let count = 1 + self.below(3);
        let pieces: Vec<Piece<i64>> = (0..count)
            .map(|_| {
                let order = if free_only || self.chance(0.6) { 0 } else { self.range(2, 6) };
                self.convex_piece(p, order)
            })
            .collect();
        let n = p.len();
        let present: Vec<Vec<usize>> = (0..n).map(|x| (0..pieces.len()).filter(|&k| pieces[k].support[x]).collect()).collect();
        let bases: Vec<(Dense, Dense)> = (0..n).map(|x| self.bounded_unimodular(present[x].len())).collect();
        let groups: Vec<FgAbGroup> = (0..n)
            .map(|x| {
                let r = present[x].len();
                let orders: Vec<i64> = present[x].iter().map(|&k| pieces[k].content).collect();
                let rel: Dense = (0..r).map(|i| orders.iter().enumerate().filter(|(_, &o)| o != 0).map(|(j, &o)| if i == j { o } else { 0 }).collect()).collect();
                let cols = orders.iter().filter(|&&o| o != 0).count();
                let moved = dense_mul(&bases[x].0, &rel, r, cols);
                FgAbGroup::new(r, to_matrix(r, cols, &moved)).expect("shape")
            })
            .collect();
        let maps = p
            .arrows()
            .iter()
            .map(|&(a, b)| {
                let (ra, rb) = (present[a].len(), present[b].len());
                let mut m = vec![vec![0i64; ra]; rb];
                for (col, &k) in present[a].iter().enumerate() {
                    if let Some(row) = present[b].iter().position(|&j| j == k) {
                        m[row][col] = Self::piece_scalar(&pieces[k], a, b);
                    }
                }
                let conj = dense_mul(&dense_mul(&bases[b].0, &m, rb, ra), &bases[a].1, ra, ra);
                AbMap::new(groups[a].clone(), groups[b].clone(), to_matrix(rb, ra, &conj)).expect("scalars respect the pieces")
            })
            .collect();
        GroupDiagram::new(p.clone(), groups, maps).expect("piecewise diagrams are functorial")
    }

    pub fn group_diagram(&mut self) -> GroupDiagram {
        let p = self.poset();
        self.group_diagram_on(&p, false)
    }

    /// A functorial diagram of free complexes in degrees `0..len`.
    pub fn complex_diagram_on(&mut self, p: &FinitePoset, len: usize, max_rank: usize) -> ComplexDiagram {
        let n = p.len();
        let shapes = self.elementary_pieces(len, max_rank);
        let mut pieces: Vec<Piece<Elementary>> = shapes.into_iter().map(|e| self.convex_piece(p, e)).collect();
        // scalar maps must commute with the piece differential, which they do for any scalar
        for piece in &mut pieces {
            if piece.mult == 0 && matches!(piece.content, Elementary::Arrow(..)) && self.chance(0.5) {
                piece.mult = 1;
            }
        }
        let present: Vec<Vec<usize>> = (0..n).map(|x| (0..pieces.len()).filter(|&k| pieces[k].support[x]).collect()).collect();
        let rank = |x: usize, k: usize| -> usize { present[x].iter().map(|&i| pieces[i].content.rank(k)).sum() };
        let bases: Vec<Vec<(Dense, Dense)>> = (0..n).map(|x| (0..len).map(|k| self.bounded_unimodular(rank(x, k))).collect()).collect();
        let complexes: Vec<ChainComplex> = (0..n)
            .map(|x| {
                let ranks: Vec<usize> = (0..len).map(|k| rank(x, k)).collect();
                let mats: Vec<IntMatrix> = (0..len.saturating_sub(1))
                    .map(|k| {
                        let mut m = vec![vec![0i64; ranks[k + 1]]; ranks[k]];
                        let (mut row, mut col) = (0, 0);
                        for &i in &present[x] {
                            let e = pieces[i].content;
                            if let Elementary::Arrow(j, q) = e {
                                if j == k {
                                    m[row][col] = q;
                                }
                            }
                            row += e.rank(k);
                            col += e.rank(k + 1);
                        }
                        let c = dense_mul(&dense_mul(&bases[x][k].0, &m, ranks[k], ranks[k + 1]), &bases[x][k + 1].1, ranks[k + 1], ranks[k + 1]);
                        to_matrix(ranks[k], ranks[k + 1], &c)
                    })
                    .collect();
                ChainComplex::free(0, &ranks, &mats).expect("pieces form a complex")
            })
            .collect();
        let maps = p
            .arrows()
            .iter()
            .map(|&(a, b)| {
                let comps = (0..len)
                    .map(|k| {
                        let (ra, rb) = (rank(a, k), rank(b, k));
                        let mut m = vec![vec![0i64; ra]; rb];
                        let mut col = 0;
                        for &i in &present[a] {
                            let w = pieces[i].content.rank(k);
                            if w > 0 {
                                if let Some(pos) = present[b].iter().position(|&j| j == i) {
                                    let row: usize = present[b][..pos].iter().map(|&j| pieces[j].content.rank(k)).sum();
                                    m[row][col] = Self::piece_scalar(&pieces[i], a, b);
                                }
                            }
                            col += w;
                        }
                        let c = dense_mul(&dense_mul(&bases[b][k].0, &m, rb, ra), &bases[a][k].1, ra, ra);
                        to_matrix(rb, ra, &c)
                    })
                    .collect();
                ChainMap::new(complexes[a].clone(), complexes[b].clone(), comps).expect("scalar maps commute")
            })
            .collect();
        ComplexDiagram::new(p.clone(), complexes, maps).expect("piecewise diagrams are functorial")
    }

    /// A levelwise short exact sequence: either split (`B = A ⊕ C` up to a
    /// change of basis) or `0 → D --×m--> D → D/m → 0` for a free diagram `D`.
    pub fn diagram_ses_on(&mut self, p: &FinitePoset) -> DiagramSes {
        if self.chance(0.4) {
            let d = self.group_diagram_on(p, true);
            let m = self.range(2, 5);
            return bockstein_ses(&d, m);
        }
        let a = self.group_diagram_on(p, false);
        let c = self.group_diagram_on(p, false);
        let n = p.len();
        let mut groups = Vec::new();
        let mut f = Vec::new();
        let mut g = Vec::new();
        let mut bases = Vec::new();
        for x in 0..n {
            let sum = FgAbGroup::direct_sum(&[a.object(x).clone(), c.object(x).clone()]);
            let r = sum.sum.generators();
            let (u, inv) = self.bounded_unimodular(r);
            let um = to_matrix(r, r, &u);
            let im = to_matrix(r, r, &inv);
            let rel = um.mul(sum.sum.relations()).expect("shape");
            let b = FgAbGroup::new(r, rel).expect("shape");
            f.push(AbMap::new(a.object(x).clone(), b.clone(), um.mul(sum.injections[0].matrix()).expect("shape")).expect("iso"));
            g.push(AbMap::new(b.clone(), c.object(x).clone(), sum.projections[1].matrix().mul(&im).expect("shape")).expect("iso"));
            groups.push(b);
            bases.push((um, im));
        }
        let maps = p
            .arrows()
            .iter()
            .enumerate()
            .map(|(e, &(x, y))| {
                let block = AbMap::direct_sum(&[a.generating()[e].clone(), c.generating()[e].clone()]);
                let m = bases[y].0.mul(block.matrix()).and_then(|m| m.mul(&bases[x].1)).expect("shape");
                AbMap::new(groups[x].clone(), groups[y].clone(), m).expect("conjugate of a well-defined map")
            })
            .collect();
        let b = GroupDiagram::new(p.clone(), groups, maps).expect("conjugate of a functor");
        DiagramSes::new(a, b, c, f, g).expect("split sequences are exact and natural")
    }

    /// A bicomplex supported in `[0, width) × [0, height)`.
    pub fn bicomplex(&mut self, width: usize, height: usize) -> Bicomplex {
        let mut cells: BTreeMap<Cell, Vec<i64>> = BTreeMap::new();
        let mut d: Vec<(Cell, usize, usize, i64)> = Vec::new();
        let mut delta: Vec<(Cell, usize, usize, i64)> = Vec::new();
        let count = 2 + self.below(4);
        let add = |cells: &mut BTreeMap<Cell, Vec<i64>>, c: Cell, order: i64| -> usize {
            let v = cells.entry(c).or_default();
            v.push(order);
            v.len() - 1
        };
        for _ in 0..count {
            let s = self.below(width);
            let t = self.below(height) as i64;
            let kind = self.below(5);
            let a = self.range(-3, 3);
            let can_right = s + 1 < width;
            let can_up = (t as usize) + 1 < height;
            match kind {
                1 if can_right => {
                    let k = if self.chance(0.3) { self.range(2, 5) } else { 0 };
                    let i = add(&mut cells, (s, t), k);
                    let j = add(&mut cells, (s + 1, t), k);
                    d.push(((s, t), i, j, a));
                }
                2 if can_up => {
                    let k = if self.chance(0.3) { self.range(2, 5) } else { 0 };
                    let i = add(&mut cells, (s, t), k);
                    let j = add(&mut cells, (s, t + 1), k);
                    delta.push(((s, t), i, j, a));
                }
                3 if can_right && can_up => {
                    let (p, q, u, v) = (self.range(-2, 2), self.range(-2, 2), self.range(-2, 2), self.range(-2, 2));
                    let c00 = add(&mut cells, (s, t), 0);
                    let c10 = add(&mut cells, (s + 1, t), 0);
                    let c01 = add(&mut cells, (s, t + 1), 0);
                    let c11 = add(&mut cells, (s + 1, t + 1), 0);
                    d.push(((s, t), c00, c10, p * u));
                    delta.push(((s + 1, t), c10, c11, q * v));
                    delta.push(((s, t), c00, c01, p * q));
                    d.push(((s, t + 1), c01, c11, u * v));
                }
                4 if s + 2 < width && can_up => {
                    // a zigzag carrying a second-page differential
                    let x = add(&mut cells, (s, t + 1), 0);
                    let y = add(&mut cells, (s + 1, t + 1), 0);
                    let z = add(&mut cells, (s + 1, t), 0);
                    let w = add(&mut cells, (s + 2, t), 0);
                    d.push(((s, t + 1), x, y, self.range(1, 3)));
                    delta.push(((s + 1, t), z, y, self.range(1, 3)));
                    d.push(((s + 1, t), z, w, self.range(-3, 3)));
                }
                _ => {
                    let k = if self.chance(0.4) { self.range(2, 6) } else { 0 };
                    add(&mut cells, (s, t), k);
                }
            }
        }
        let mut bases: BTreeMap<Cell, (Dense, Dense)> = BTreeMap::new();
        let mut groups: BTreeMap<Cell, FgAbGroup> = BTreeMap::new();
        for (&c, orders) in &cells {
            let r = orders.len();
            let (u, inv) = self.bounded_unimodular(r);
            let rel: Dense = (0..r).map(|i| orders.iter().enumerate().filter(|(_, &o)| o != 0).map(|(j, &o)| if i == j { o } else { 0 }).collect()).collect();
            let cols = orders.iter().filter(|&&o| o != 0).count();
            groups.insert(c, FgAbGroup::new(r, to_matrix(r, cols, &dense_mul(&u, &rel, r, cols))).expect("shape"));
            bases.insert(c, (u, inv));
        }
        let conj = |entries: &[(Cell, usize, usize, i64)], step: fn(Cell) -> Cell| -> BTreeMap<Cell, IntMatrix> {
            let mut raw: BTreeMap<Cell, Dense> = BTreeMap::new();
            for &(c, i, j, a) in entries {
                let (rs, rt) = (cells[&c].len(), cells[&step(c)].len());
                let m = raw.entry(c).or_insert_with(|| vec![vec![0; rs]; rt]);
                m[j][i] += a;
            }
            raw.into_iter()
                .map(|(c, m)| {
                    let t = step(c);
                    let (rs, rt) = (cells[&c].len(), cells[&t].len());
                    let out = dense_mul(&dense_mul(&bases[&t].0, &m, rt, rs), &bases[&c].1, rs, rs);
                    (c, to_matrix(rt, rs, &out))
                })
                .collect()
        };
        let dm = conj(&d, |(s, t)| (s + 1, t));
        let vm = conj(&delta, |(s, t)| (s, t + 1));
        Bicomplex::new(groups, dm, vm).expect("pieces satisfy the bicomplex identities")
    }
}

/// `0 → D --×m--> D → D ⊗ Z/m → 0` for a levelwise free diagram `D`.
pub fn bockstein_ses(d: &GroupDiagram, m: i64) -> DiagramSes {
    let p = d.poset().clone();
    let n = p.len();
    let quotients: Vec<FgAbGroup> = (0..n)
        .map(|x| {
            let r = d.object(x).generators();
            FgAbGroup::new(r, IntMatrix::identity(r).scale(&Integer::from(m))).expect("shape")
        })
        .collect();
    let maps = p
        .arrows()
        .iter()
        .enumerate()
        .map(|(e, &(x, y))| AbMap::new(quotients[x].clone(), quotients[y].clone(), d.generating()[e].matrix().clone()).expect("reduction"))
        .collect();
    let c = GroupDiagram::new(p, quotients.clone(), maps).expect("reduction of a functor");
    let f = (0..n).map(|x| AbMap::scalar(d.object(x), m)).collect();
    let g = (0..n)
        .map(|x| AbMap::new(d.object(x).clone(), quotients[x].clone(), IntMatrix::identity(d.object(x).generators())).expect("projection"))
        .collect();
    DiagramSes::new(d.clone(), d.clone(), c, f, g).expect("multiplication by m on a free diagram")
}
