//! Cochain bicomplexes with finite support, their total complexes and the
//! spectral sequence of the exact couple built from column truncations.
//!
//! With `Tot^{(p)}` the total complex of columns `0..=p`:
//!
//! * `D^{s,t} = H^{s+t}(Tot^{(s)})` and `E^{s,t} = H^{s+t}(Γ^{(s)})`, where
//!   `Γ^{(s)}` is the kernel of `Tot^{(s)} → Tot^{(s−1)}`, i.e. column `s`;
//! * `i : D^{s,t} → D^{s−1,t+1}` is induced by the projection,
//!   `k : E^{s,t} → D^{s,t}` by the inclusion of the last column and
//!   `j : D^{s,t} → E^{s+1,t}` is the connecting map, `x ↦ d(x_s)`.
//!
//! Totals are laid out with columns in increasing `s`, so a truncation is a
//! coordinate prefix and column `s` is the trailing block of `Tot^{(s)}`.
//! Page elements are concrete vectors of the column ambient space.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cochain::{Cochain, LesNode, LesReport, Term};
use crate::error::{Error, Result};
use crate::group::{AbMap, Canonical, FgAbGroup};
use crate::integer::Integer;
use crate::lattice::{apply_columns, solve, Lattice};
use crate::matrix::IntMatrix;
use crate::sparse::SparseVec;
use crate::subquotient::{exact_at, image_lattice, images_under, kernel_lattice, Subquotient};

pub type Cell = (usize, i64);

#[derive(Clone, Debug)]
pub struct Bicomplex {
    smax: usize,
    tlo: i64,
    thi: i64,
    cells: BTreeMap<Cell, FgAbGroup>,
    d: BTreeMap<Cell, AbMap>,
    delta: BTreeMap<Cell, AbMap>,
}

fn invariant(c: Cell, what: impl Into<String>) -> Error {
    Error::BicomplexInvariant { s: c.0 as i64, t: c.1, what: what.into() }
}

impl Bicomplex {
    /// Cells not listed are zero; maps not listed are zero. `d[(s,t)]` maps
    /// `(s,t) → (s+1,t)` and `delta[(s,t)]` maps `(s,t) → (s,t+1)`.
    pub fn new(
        cells: BTreeMap<Cell, FgAbGroup>,
        d: BTreeMap<Cell, IntMatrix>,
        delta: BTreeMap<Cell, IntMatrix>,
    ) -> Result<Bicomplex> {
        let cells: BTreeMap<Cell, FgAbGroup> = cells.into_iter().filter(|(_, g)| g.generators() > 0).collect();
        let smax = cells.keys().map(|c| c.0).max().unwrap_or(0);
        let tlo = cells.keys().map(|c| c.1).min().unwrap_or(0);
        let thi = cells.keys().map(|c| c.1).max().unwrap_or(-1);
        let trivial = FgAbGroup::trivial();
        let at = |c: &Cell| cells.get(c).unwrap_or(&trivial).clone();
        let build = |maps: BTreeMap<Cell, IntMatrix>, step: fn(Cell) -> Cell, name: &str| -> Result<BTreeMap<Cell, AbMap>> {
            let mut out = BTreeMap::new();
            for (c, m) in maps {
                let (src, tgt) = (at(&c), at(&step(c)));
                if m.rows() * m.cols() == 0 && src.generators() * tgt.generators() == 0 {
                    continue;
                }
                if m.rows() != tgt.generators() || m.cols() != src.generators() {
                    return Err(invariant(c, format!("{name} has shape {}x{}", m.rows(), m.cols())));
                }
                let f = AbMap::new(src, tgt, m).map_err(|_| invariant(c, format!("{name} is not well defined")))?;
                if !f.is_zero() {
                    out.insert(c, f);
                }
            }
            Ok(out)
        };
        let d = build(d, |(s, t)| (s + 1, t), "d")?;
        let delta = build(delta, |(s, t)| (s, t + 1), "delta")?;
        let b = Bicomplex { smax, tlo, thi, cells, d, delta };
        b.validate()?;
        Ok(b)
    }

    pub fn empty() -> Bicomplex {
        Bicomplex::new(BTreeMap::new(), BTreeMap::new(), BTreeMap::new()).expect("empty")
    }

    fn validate(&self) -> Result<()> {
        for &c in self.cells.keys() {
            let (s, t) = c;
            let dd = self.d_map(c).then(&self.d_map((s + 1, t)))?;
            if !dd.is_zero() {
                return Err(invariant(c, "d∘d ≠ 0"));
            }
            let vv = self.delta_map(c).then(&self.delta_map((s, t + 1)))?;
            if !vv.is_zero() {
                return Err(invariant(c, "δ∘δ ≠ 0"));
            }
            let dv = self.d_map(c).then(&self.delta_map((s + 1, t)))?;
            let vd = self.delta_map(c).then(&self.d_map((s, t + 1)))?;
            if !dv.equals(&vd) {
                return Err(invariant(c, "d∘δ ≠ δ∘d"));
            }
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Largest column index carrying a nonzero cell.
    pub fn smax(&self) -> usize {
        self.smax
    }

    pub fn t_range(&self) -> (i64, i64) {
        (self.tlo, self.thi)
    }

    /// Total degrees that can be nonzero.
    pub fn degree_range(&self) -> (i64, i64) {
        (self.tlo, self.smax as i64 + self.thi)
    }

    pub fn cells(&self) -> &BTreeMap<Cell, FgAbGroup> {
        &self.cells
    }

    pub fn cell(&self, c: Cell) -> FgAbGroup {
        self.cells.get(&c).cloned().unwrap_or_else(FgAbGroup::trivial)
    }

    fn width(&self, s: usize, t: i64) -> usize {
        self.cells.get(&(s, t)).map_or(0, FgAbGroup::generators)
    }

    pub fn d_map(&self, c: Cell) -> AbMap {
        self.d.get(&c).cloned().unwrap_or_else(|| AbMap::zero(&self.cell(c), &self.cell((c.0 + 1, c.1))))
    }

    pub fn delta_map(&self, c: Cell) -> AbMap {
        self.delta.get(&c).cloned().unwrap_or_else(|| AbMap::zero(&self.cell(c), &self.cell((c.0, c.1 + 1))))
    }

    pub fn d_maps(&self) -> &BTreeMap<Cell, AbMap> {
        &self.d
    }

    pub fn delta_maps(&self) -> &BTreeMap<Cell, AbMap> {
        &self.delta
    }

    /// Offset of column `s` inside total degree `n`.
    pub fn offset(&self, n: i64, s: usize) -> usize {
        (0..s.min(self.smax + 1)).map(|q| self.width(q, n - q as i64)).sum()
    }

    /// Ambient dimension of `Tot^{(p)}` in degree `n`.
    pub fn prefix_dim(&self, n: i64, p: usize) -> usize {
        self.offset(n, p + 1)
    }

    /// `Tot^{(p)}` with `∂ = d + (−1)^s δ`.
    pub fn trunc_tot(&self, p: usize) -> Cochain {
        if self.is_empty() {
            return Cochain::empty();
        }
        let p = p.min(self.smax);
        let (lo, hi) = self.degree_range();
        let terms = (lo..=hi)
            .map(|n| {
                let dim = self.prefix_dim(n, p);
                let mut rel = Vec::new();
                let mut cols = Vec::with_capacity(dim);
                for s in 0..=p {
                    let t = n - s as i64;
                    let g = self.cell((s, t));
                    let off = self.offset(n, s);
                    rel.extend(g.relation_lattice().basis().iter().map(|r| r.shifted(off)));
                    if n == hi {
                        continue;
                    }
                    let down = self.delta_map((s, t)).columns();
                    let right = self.d_map((s, t)).columns();
                    let sign = if s % 2 == 0 { Integer::ONE } else { Integer::from(-1) };
                    for c in 0..g.generators() {
                        let mut v = down[c].scale(&sign).shifted(self.offset(n + 1, s));
                        if s < p {
                            v = v.add(&right[c].shifted(self.offset(n + 1, s + 1)));
                        }
                        cols.push(v);
                    }
                }
                Term { dim, relations: Lattice::from_generators(dim, rel), d: cols }
            })
            .collect();
        Cochain::new(lo, terms)
    }

    pub fn total_complex(&self) -> Cochain {
        self.trunc_tot(self.smax)
    }

    /// `Γ^{(s)}`: column `s` with differential `(−1)^s δ`, in total degrees.
    pub fn gamma_s(&self, s: usize) -> Cochain {
        if self.is_empty() || s > self.smax {
            return Cochain::empty();
        }
        let sign = if s % 2 == 0 { Integer::ONE } else { Integer::from(-1) };
        let terms = (self.tlo..=self.thi)
            .map(|t| {
                let g = self.cell((s, t));
                let d = if t < self.thi { self.delta_map((s, t)).columns().iter().map(|c| c.scale(&sign)).collect() } else { Vec::new() };
                Term::from_group(&g, d)
            })
            .collect();
        Cochain::new(s as i64 + self.tlo, terms)
    }
}

/// A morphism of bicomplexes, one map per cell of the source.
#[derive(Clone, Debug)]
pub struct BicomplexMap {
    pub source: Bicomplex,
    pub target: Bicomplex,
    pub cells: BTreeMap<Cell, AbMap>,
}

impl BicomplexMap {
    pub fn new(source: Bicomplex, target: Bicomplex, cells: BTreeMap<Cell, IntMatrix>) -> Result<BicomplexMap> {
        let mut maps = BTreeMap::new();
        for (c, m) in cells {
            let f = AbMap::new(source.cell(c), target.cell(c), m).map_err(|_| invariant(c, "cell map is not well defined"))?;
            maps.insert(c, f);
        }
        let out = BicomplexMap { source, target, cells: maps };
        for &c in out.source.cells.keys() {
            let (s, t) = c;
            let h1 = out.source.d_map(c).then(&out.at((s + 1, t)))?;
            let h2 = out.at(c).then(&out.target.d_map(c))?;
            let v1 = out.source.delta_map(c).then(&out.at((s, t + 1)))?;
            let v2 = out.at(c).then(&out.target.delta_map(c))?;
            if !h1.equals(&h2) || !v1.equals(&v2) {
                return Err(invariant(c, "cell maps do not commute with the differentials"));
            }
        }
        Ok(out)
    }

    pub fn at(&self, c: Cell) -> AbMap {
        self.cells.get(&c).cloned().unwrap_or_else(|| AbMap::zero(&self.source.cell(c), &self.target.cell(c)))
    }

    /// Columns of the induced map `Tot^n → Tot'^n`.
    pub fn on_total(&self, n: i64) -> Vec<SparseVec> {
        let mut cols = Vec::new();
        for s in 0..=self.source.smax {
            let c = (s, n - s as i64);
            let off = self.target.offset(n, s);
            cols.extend(self.at(c).columns().into_iter().map(|v| v.shifted(off)));
        }
        cols
    }

    /// Whether the induced map on `E₂` is an isomorphism at every cell, and
    /// whether the induced map on `H^n(Tot)` is one in every degree.
    pub fn e2_and_total_isomorphisms(&self) -> (bool, bool) {
        let ss = SpectralSequence::new(&self.source);
        let tt = SpectralSequence::new(&self.target);
        let mut keys: Vec<Cell> = self.source.cells.keys().chain(self.target.cells.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        let e2 = keys.iter().all(|&c| {
            let (a, b) = (ss.e(2, c), tt.e(2, c));
            let imgs = images_under(&a, &self.at(c).columns());
            is_iso(&a, &b, &imgs)
        });
        let (lo1, hi1) = self.source.degree_range();
        let (lo2, hi2) = self.target.degree_range();
        let total = (lo1.min(lo2)..=hi1.max(hi2)).all(|n| {
            let a = ss.total.cohomology(n);
            let b = tt.total.cohomology(n);
            if a.dim() == 0 || b.dim() == 0 {
                return a.to_group().is_trivial() && b.to_group().is_trivial();
            }
            is_iso(&a, &b, &images_under(&a, &self.on_total(n)))
        });
        (e2, total)
    }
}

fn is_iso(a: &Subquotient, b: &Subquotient, images: &[SparseVec]) -> bool {
    let mono = kernel_lattice(a, b, images) == *a.quo();
    let epi = image_lattice(b, images).includes(b.sub());
    mono && epi
}

/// Pages `E_r`, `D_r` and the maps of the derived couples.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    b: Bicomplex,
    tots: Vec<Cochain>,
    total: Cochain,
    /// `[p][n − lo]`: cocycles and coboundaries (with relations) of `Tot^{(p)}`.
    cyc: Vec<Vec<Lattice>>,
    bnd: Vec<Vec<Lattice>>,
    /// `pages[r − 1]` for `r = 1..=smax + 2`; later pages equal the last.
    pages: Vec<BTreeMap<Cell, Subquotient>>,
}

impl SpectralSequence {
    pub fn new(b: &Bicomplex) -> SpectralSequence {
        let tots: Vec<Cochain> = (0..=b.smax).map(|p| b.trunc_tot(p)).collect();
        let (lo, hi) = b.degree_range();
        let mut cyc = Vec::new();
        let mut bnd = Vec::new();
        for t in &tots {
            let hs: Vec<Subquotient> = (lo..=hi).map(|n| t.cohomology(n)).collect();
            cyc.push(hs.iter().map(|h| h.sub().clone()).collect());
            bnd.push(hs.iter().map(|h| h.quo().clone()).collect());
        }
        let total = tots.last().cloned().unwrap_or_else(Cochain::empty);
        let mut ss = SpectralSequence { b: b.clone(), tots, total, cyc, bnd, pages: Vec::new() };
        let first: BTreeMap<Cell, Subquotient> = ss.support().into_iter().map(|c| (c, ss.e_closed(1, c))).collect();
        ss.pages.push(first);
        for r in 1..=b.smax + 1 {
            let next = ss.derive(r);
            ss.pages.push(next);
        }
        ss
    }

    pub fn bicomplex(&self) -> &Bicomplex {
        &self.b
    }

    pub fn total(&self) -> &Cochain {
        &self.total
    }

    pub fn truncation(&self, p: usize) -> &Cochain {
        &self.tots[p.min(self.b.smax)]
    }

    /// Cells of the bounding box of the support.
    pub fn support(&self) -> Vec<Cell> {
        if self.b.is_empty() {
            return Vec::new();
        }
        (0..=self.b.smax).flat_map(|s| (self.b.tlo..=self.b.thi).map(move |t| (s, t))).collect()
    }

    /// The page from which nothing changes.
    pub fn stable_page(&self) -> usize {
        self.b.smax + 2
    }

    fn in_range(&self, n: i64) -> bool {
        let (lo, hi) = self.b.degree_range();
        !self.b.is_empty() && n >= lo && n <= hi
    }

    fn z_at(&self, p: usize, n: i64) -> Lattice {
        if !self.in_range(n) {
            return Lattice::zero(0);
        }
        self.cyc[p.min(self.b.smax)][(n - self.b.tlo) as usize].clone()
    }

    fn b_at(&self, p: usize, n: i64) -> Lattice {
        if !self.in_range(n) {
            return Lattice::zero(0);
        }
        self.bnd[p.min(self.b.smax)][(n - self.b.tlo) as usize].clone()
    }

    fn column_dim(&self, c: Cell) -> usize {
        self.b.width(c.0, c.1)
    }

    /// `proj_s(Z^{(p)}) + B^{(s)}` in `Tot^{(s)}` degree `n`.
    fn lifted_image(&self, s: usize, p: usize, n: i64) -> Lattice {
        let dim = self.b.prefix_dim(n, s);
        let z = self.z_at(p.max(s), n);
        let proj = z.basis().iter().map(|v| v.slice(0, dim));
        self.b_at(s, n).add_generators(proj)
    }

    /// `Z_r` by its closed description `k^{-1}(im i^{r−1})`.
    pub fn z_closed(&self, r: usize, c: Cell) -> Lattice {
        let (s, t) = c;
        if s > self.b.smax || self.column_dim(c) == 0 {
            return Lattice::zero(self.column_dim(c));
        }
        let n = s as i64 + t;
        self.lifted_image(s, s + r - 1, n).trailing_block(self.b.offset(n, s))
    }

    /// `B_r` by its closed description `j(ker i^{r−1})`, together with `B_1`.
    pub fn b_closed(&self, r: usize, c: Cell) -> Lattice {
        let (s, t) = c;
        let dim = self.column_dim(c);
        if s > self.b.smax || dim == 0 {
            return Lattice::zero(dim);
        }
        let n = s as i64 + t;
        let b1 = {
            let col = self.b.cell(c);
            let incoming = if s <= self.b.smax { self.b.delta_map((s, t - 1)).columns() } else { Vec::new() };
            col.relation_lattice().add_generators(incoming)
        };
        if s == 0 {
            return b1;
        }
        let m = n - 1;
        let z = self.z_at(s - 1, m);
        let kernel = if s >= r {
            let q = s - r;
            let dim_q = self.b.prefix_dim(m, q);
            let full = self.b.prefix_dim(m, s - 1);
            let mut gens: Vec<SparseVec> = self.b_at(q, m).basis().to_vec();
            gens.extend((dim_q..full).map(SparseVec::unit));
            z.intersection(&Lattice::from_generators(full, gens))
        } else {
            z
        };
        let off = self.b.offset(m, s - 1);
        let w = self.b.width(s - 1, t);
        let dcols = self.b.d_map((s - 1, t)).columns();
        b1.add_generators(kernel.basis().iter().map(|x| apply_columns(&dcols, &x.slice(off, off + w))))
    }

    /// `E_r` from the closed descriptions, independent of the iteration.
    pub fn e_closed(&self, r: usize, c: Cell) -> Subquotient {
        Subquotient::new(self.z_closed(r, c), self.b_closed(r, c))
    }

    /// Given `x ∈ proj_s(Z^{(p)}) + B^{(s)}` in `Tot^{(s)}` degree `n`, returns
    /// `j(y)` for a cocycle `y` of `Tot^{(p)}` with `proj_s(y) ≡ x`.
    fn j_of_lift(&self, s: usize, p: usize, n: i64, x: &SparseVec) -> SparseVec {
        if p > self.b.smax {
            return SparseVec::zero();
        }
        let dim = self.b.prefix_dim(n, s);
        let z = self.z_at(p, n);
        let mut gens: Vec<SparseVec> = z.basis().iter().map(|v| v.slice(0, dim)).collect();
        let nz = gens.len();
        gens.extend(self.b_at(s, n).basis().iter().cloned());
        let coeffs = solve(&gens, dim, x).expect("element lifts through the truncation tower");
        let y = apply_columns(z.basis(), &coeffs.slice(0, nz));
        let t = n - p as i64;
        let off = self.b.offset(n, p);
        let w = self.b.width(p, t);
        apply_columns(&self.b.d_map((p, t)).columns(), &y.slice(off, off + w))
    }

    /// `d_r(z)` for an ambient representative `z` of a class in `E_r^{s,t}`.
    pub fn d_r(&self, r: usize, c: Cell, z: &SparseVec) -> SparseVec {
        let (s, t) = c;
        let n = s as i64 + t;
        let embedded = z.shifted(self.b.offset(n, s));
        self.j_of_lift(s, s + r - 1, n, &embedded)
    }

    pub fn d_r_target(r: usize, c: Cell) -> Cell {
        (c.0 + r, c.1 - r as i64 + 1)
    }

    fn derive(&self, r: usize) -> BTreeMap<Cell, Subquotient> {
        let page = &self.pages[r - 1];
        let zero = |c: Cell| Subquotient::zero(self.column_dim(c));
        let get = |c: Cell| page.get(&c).cloned().unwrap_or_else(|| zero(c));
        let mut next = BTreeMap::new();
        for &c in page.keys() {
            let here = get(c);
            let out_cell = Self::d_r_target(r, c);
            let out_imgs: Vec<SparseVec> = here.generators().iter().map(|z| self.d_r(r, c, z)).collect();
            let target = get(out_cell);
            let cycles = if target.dim() == 0 {
                here.sub().clone()
            } else {
                kernel_lattice(&here, &target, &out_imgs)
            };
            let mut boundaries = here.quo().clone();
            if c.0 >= r {
                let in_cell = (c.0 - r, c.1 + r as i64 - 1);
                let src = get(in_cell);
                let imgs: Vec<SparseVec> = src.generators().iter().map(|z| self.d_r(r, in_cell, z)).collect();
                boundaries = boundaries.add_generators(imgs);
            }
            next.insert(c, Subquotient::new(cycles, boundaries));
        }
        next
    }

    /// `E_r^{s,t}`; zero outside the support, and `E_∞` for `r ≥ stable_page()`.
    pub fn e(&self, r: usize, c: Cell) -> Subquotient {
        assert!(r >= 1, "pages start at r = 1");
        let k = (r - 1).min(self.pages.len().saturating_sub(1));
        self.pages.get(k).and_then(|p| p.get(&c)).cloned().unwrap_or_else(|| Subquotient::zero(self.column_dim(c)))
    }

    pub fn e_inf(&self, c: Cell) -> Subquotient {
        self.e(self.stable_page(), c)
    }

    /// `D_r^{s,t} = i^{r−1} D^{s+r−1, t−r+1} ⊆ D^{s,t}`, in `Tot^{(s)}` degree `s + t`.
    pub fn d_page(&self, r: usize, s: usize, t: i64) -> Subquotient {
        let n = s as i64 + t;
        if !self.in_range(n) {
            return Subquotient::zero(0);
        }
        let s_eff = s.min(self.b.smax);
        Subquotient::new(self.lifted_image(s_eff, s + r - 1, n), self.b_at(s_eff, n))
    }

    /// `k_r` on an ambient page representative.
    pub fn k_map(&self, c: Cell, z: &SparseVec) -> SparseVec {
        let n = c.0 as i64 + c.1;
        z.shifted(self.b.offset(n, c.0))
    }

    /// `i_r : D_r^{s,t} → D_r^{s−1,t+1}`.
    pub fn i_map(&self, s: usize, t: i64, x: &SparseVec) -> SparseVec {
        if s == 0 {
            return SparseVec::zero();
        }
        let n = s as i64 + t;
        x.slice(0, self.b.prefix_dim(n, (s - 1).min(self.b.smax)))
    }

    /// `j_r : D_r^{s,t} → E_r^{s+r, t−r+1}`.
    pub fn j_map(&self, r: usize, s: usize, t: i64, x: &SparseVec) -> SparseVec {
        let n = s as i64 + t;
        self.j_of_lift(s.min(self.b.smax), s + r - 1, n, x)
    }

    /// Serializable summary of pages `1..=rmax`, `E_∞` and the filtration.
    pub fn data(&self, rmax: usize) -> SpectralData {
        let cells = self.support();
        let (lo, hi) = self.b.degree_range();
        let pages = (1..=rmax.max(1))
            .map(|r| PageData {
                r,
                e: cells.iter().map(|&c| CellGroup::new(c, self.e(r, c).to_group())).collect(),
                d: (0..=if self.b.is_empty() { 0 } else { self.b.smax })
                    .flat_map(|s| (lo..=hi).map(move |n| (s, n - s as i64)))
                    .filter(|&(s, t)| self.in_range(s as i64 + t))
                    .map(|(s, t)| CellGroup::new((s, t), self.d_page(r, s, t).to_group()))
                    .collect(),
            })
            .collect();
        SpectralData {
            pages,
            e_inf: cells.iter().map(|&c| CellGroup::new(c, self.e_inf(c).to_group())).collect(),
            stable_page: self.stable_page(),
        }
    }

    /// Exactness of `… → E₂^{s,n−1} → D₂^{s,n−1} → D₂^{s−1,n} → E₂^{s+1,n−1} → …`
    /// across the support, and `D₂^{0,n} ≅ E₂^{0,n}` through `k₂`.
    pub fn d2e2_les(&self, n: i64) -> D2E2Report {
        let r = 2;
        let top = self.b.smax + 2;
        let e = |s: usize, t: i64| self.e(r, (s, t));
        let dp = |s: usize, t: i64| self.d_page(r, s, t);
        let k_imgs = |s: usize, t: i64, src: &Subquotient| -> Vec<SparseVec> {
            src.generators().iter().map(|z| self.k_map((s, t), z)).collect()
        };
        let i_imgs = |s: usize, t: i64, src: &Subquotient| -> Vec<SparseVec> {
            src.generators().iter().map(|x| self.i_map(s, t, x)).collect()
        };
        let j_imgs = |s: usize, t: i64, src: &Subquotient| -> Vec<SparseVec> {
            src.generators().iter().map(|x| self.j_map(r, s, t, x)).collect()
        };
        let mut nodes = Vec::new();
        for s in 1..=top {
            let es = e(s, n - 1);
            let ds = dp(s, n - 1);
            let dm = dp(s - 1, n);
            let en = e(s + 1, n - 1);
            let into_e = if s >= 2 { j_imgs(s - 2, n, &dp(s - 2, n)) } else { Vec::new() };
            let k_out = k_imgs(s, n - 1, &es);
            let i_out = i_imgs(s, n - 1, &ds);
            let j_out = j_imgs(s - 1, n, &dm);
            nodes.push(les_node(format!("E2^{{{s},{}}}", n - 1), n - 1 + s as i64, &es, &into_e, &ds, &k_out));
            nodes.push(les_node(format!("D2^{{{s},{}}}", n - 1), n - 1 + s as i64, &ds, &k_out, &dm, &i_out));
            nodes.push(les_node(format!("D2^{{{},{n}}}", s - 1), n - 1 + s as i64, &dm, &i_out, &en, &j_out));
        }
        let e0 = e(0, n);
        let d0 = dp(0, n);
        let k0 = k_imgs(0, n, &e0);
        let zero_step = if d0.dim() == 0 || e0.dim() == 0 {
            d0.is_trivial() && e0.is_trivial()
        } else {
            is_iso(&e0, &d0, &k0)
        };
        let les = LesReport::from_nodes(nodes);
        D2E2Report { n, zero_step, exact: les.exact && zero_step, les }
    }

    /// Reassembly of `H^n(Tot)` from `E_∞` along `Q^{s,n−s} = D_∞^{s,n−s}`.
    pub fn check_convergence(&self) -> ConvergenceReport {
        let (lo, hi) = self.b.degree_range();
        let mut degrees = Vec::new();
        for n in lo..=hi {
            let smax = self.b.smax;
            let q: Vec<Subquotient> = (0..=smax).map(|s| self.d_page(self.stable_page(), s, n - s as i64)).collect();
            let total = self.total.cohomology(n);
            let mut epi_tower = true;
            let mut kernels_match = true;
            let mut graded = Vec::new();
            for s in 0..=smax {
                let t = n - s as i64;
                let einf = self.e_inf((s, t));
                graded.push(CellGroup::new((s, t), einf.to_group()));
                let i_out = i_imgs_of(self, s, t, &q[s]);
                if s > 0 {
                    epi_tower &= image_lattice(&q[s - 1], &i_out).includes(q[s - 1].sub());
                }
                let k_out: Vec<SparseVec> = einf.generators().iter().map(|z| self.k_map((s, t), z)).collect();
                let next = if s > 0 { q[s - 1].clone() } else { Subquotient::zero(0) };
                let injective = einf.dim() == 0 || kernel_lattice(&einf, &q[s], &k_out) == *einf.quo();
                let exact_mid = s == 0 && (q[0].dim() == 0 || image_lattice(&q[0], &k_out).includes(q[0].sub()))
                    || s > 0 && exact_at(&q[s], &k_out, &next, &i_out);
                kernels_match &= injective && exact_mid;
            }
            let lim_matches = q[smax].to_group().is_isomorphic(total.to_group());
            let h = total.to_group().canonical().clone();
            let rank_sum: usize = graded.iter().map(|g| g.group.free_rank).sum();
            let torsion_product: Integer = graded.iter().map(|g| g.group.torsion_order()).product();
            degrees.push(ConvergenceDegree {
                n,
                ranks_add: rank_sum == h.free_rank,
                torsion_multiplies: torsion_product == h.torsion_order(),
                total: h,
                graded,
                epi_tower,
                kernels_match,
                lim_matches,
            });
        }
        let filtration_ok = degrees.iter().all(|d| d.epi_tower && d.kernels_match && d.lim_matches);
        let ranks_add = degrees.iter().all(|d| d.ranks_add);
        let torsion_multiplies = degrees.iter().all(|d| d.torsion_multiplies);
        ConvergenceReport { degrees, filtration_ok, ranks_add, torsion_multiplies }
    }
}

fn i_imgs_of(ss: &SpectralSequence, s: usize, t: i64, src: &Subquotient) -> Vec<SparseVec> {
    src.generators().iter().map(|x| ss.i_map(s, t, x)).collect()
}

fn les_node(label: String, degree: i64, mid: &Subquotient, incoming: &[SparseVec], next: &Subquotient, outgoing: &[SparseVec]) -> LesNode {
    let exact = if mid.dim() == 0 {
        true
    } else if next.dim() == 0 {
        image_lattice(mid, incoming).includes(mid.sub())
    } else {
        exact_at(mid, incoming, next, outgoing)
    };
    LesNode { label, degree, group: mid.to_group().canonical().clone(), exact }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CellGroup {
    pub s: usize,
    pub t: i64,
    pub group: Canonical,
}

impl CellGroup {
    fn new(c: Cell, g: &FgAbGroup) -> CellGroup {
        CellGroup { s: c.0, t: c.1, group: g.canonical().clone() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PageData {
    pub r: usize,
    pub e: Vec<CellGroup>,
    pub d: Vec<CellGroup>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralData {
    pub pages: Vec<PageData>,
    pub e_inf: Vec<CellGroup>,
    pub stable_page: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct D2E2Report {
    pub n: i64,
    pub zero_step: bool,
    pub les: LesReport,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceDegree {
    pub n: i64,
    pub total: Canonical,
    pub graded: Vec<CellGroup>,
    /// `Q^{s} → Q^{s−1}` onto for every `s`.
    pub epi_tower: bool,
    /// `0 → E_∞^{s,n−s} → Q^{s} → Q^{s−1} → 0` exact for every `s`.
    pub kernels_match: bool,
    /// `H^n(Tot) ≅ Q^{smax}`.
    pub lim_matches: bool,
    pub ranks_add: bool,
    pub torsion_multiplies: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub degrees: Vec<ConvergenceDegree>,
    pub filtration_ok: bool,
    pub ranks_add: bool,
    pub torsion_multiplies: bool,
}

pub fn total_complex(b: &Bicomplex) -> Cochain {
    b.total_complex()
}

pub fn compute_pages(b: &Bicomplex, rmax: usize) -> SpectralData {
    SpectralSequence::new(b).data(rmax)
}

pub fn check_convergence(b: &Bicomplex) -> ConvergenceReport {
    SpectralSequence::new(b).check_convergence()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    /// `Z --×2--> Z` in row 0, columns 0 and 1.
    fn doubling_row() -> Bicomplex {
        let cells = BTreeMap::from([((0, 0), FgAbGroup::free(1)), ((1, 0), FgAbGroup::free(1))]);
        Bicomplex::new(cells, BTreeMap::from([((0, 0), m(&[&[2]]))]), BTreeMap::new()).unwrap()
    }

    #[test]
    fn doubling_row_pages() {
        let b = doubling_row();
        let tot = b.total_complex();
        tot.check().unwrap();
        assert!(tot.cohomology_group(0).is_trivial());
        assert_eq!(tot.cohomology_group(1).to_string(), "Z/2");
        assert_eq!(b.gamma_s(1).cohomology_group(1).to_string(), "Z");
        let ss = SpectralSequence::new(&b);
        assert!(ss.e(2, (0, 0)).to_group().is_trivial());
        assert_eq!(ss.e(2, (1, 0)).to_group().to_string(), "Z/2");
        assert_eq!(ss.e_inf((1, 0)).to_group().to_string(), "Z/2");
        let conv = ss.check_convergence();
        assert!(conv.filtration_ok && conv.ranks_add && conv.torsion_multiplies);
        for n in -1..=2 {
            assert!(ss.d2e2_les(n).exact, "degree {n}");
        }
    }

    #[test]
    fn rejects_noncommuting_squares() {
        let z = FgAbGroup::free(1);
        let cells = BTreeMap::from([((0, 0), z.clone()), ((1, 0), z.clone()), ((0, 1), z.clone()), ((1, 1), z)]);
        let d = BTreeMap::from([((0, 0), m(&[&[1]])), ((0, 1), m(&[&[1]]))]);
        let delta = BTreeMap::from([((0, 0), m(&[&[1]])), ((1, 0), m(&[&[2]]))]);
        let err = Bicomplex::new(cells, d, delta).unwrap_err();
        assert_eq!(err, Error::BicomplexInvariant { s: 0, t: 0, what: "d∘δ ≠ δ∘d".into() });
    }

    #[test]
    fn empty_and_zero_differentials() {
        let e = Bicomplex::empty();
        assert!(e.total_complex().terms.is_empty());
        let cells = BTreeMap::from([((0, 0), FgAbGroup::cyclic(3)), ((1, -1), FgAbGroup::free(2))]);
        let b = Bicomplex::new(cells, BTreeMap::new(), BTreeMap::new()).unwrap();
        let ss = SpectralSequence::new(&b);
        for r in 1..4 {
            assert_eq!(ss.e(r, (0, 0)).to_group().to_string(), "Z/3");
            assert_eq!(ss.e(r, (1, -1)).to_group().to_string(), "Z^2");
        }
        assert_eq!(ss.total().cohomology_group(0).to_string(), "Z^2 + Z/3");
    }

    #[test]
    fn closed_pages_agree_with_iteration() {
        let z = FgAbGroup::free(1);
        let cells = BTreeMap::from([((0, 0), z.clone()), ((1, 0), z.clone()), ((0, 1), z.clone()), ((1, 1), z)]);
        let d = BTreeMap::from([((0, 0), m(&[&[2]])), ((0, 1), m(&[&[3]]))]);
        let delta = BTreeMap::from([((0, 0), m(&[&[2]])), ((1, 0), m(&[&[3]]))]);
        let b = Bicomplex::new(cells, d, delta).unwrap();
        let ss = SpectralSequence::new(&b);
        for r in 1..=4 {
            for c in ss.support() {
                assert_eq!(ss.e(r, c).to_group().canonical(), ss.e_closed(r, c).to_group().canonical(), "r={r} {c:?}");
            }
        }
        assert!(ss.check_convergence().filtration_ok);
    }
}
