//! The acceptance criteria, each at its stated tolerance and time limit.
//! Prints one line per criterion and exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use prohom::complexes::uct_verify;
use prohom::corpus::{bockstein_ses, Bounds, Gen};
use prohom::diagram::GroupDiagram;
use prohom::holim::{cofinality_check, e2_consistency};
use prohom::pro::{compare_tensors, first_les, pro_tor, resolution_tor, second_les, ProModule};
use prohom::snf::snf;
use prohom::specseq::SpectralSequence;
use prohom::witness::{
    bounded_image_test, cluster_tower, interchange_witness, matches_truncated_p, truncated_strong_homology,
};
use prohom::{AbMap, FgAbGroup, IntMatrix, SparseVec};

use common::*;

struct Outcome {
    failures: Vec<String>,
    limit: Option<Duration>,
}

impl Outcome {
    fn new(limit: Option<u64>) -> Outcome {
        Outcome { failures: Vec::new(), limit: limit.map(Duration::from_secs) }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn snf_suite() -> Outcome {
    let mut out = Outcome::new(Some(5));
    let mut g = Gen::new(0x5eed_0001);
    for case in 0..200 {
        let rows = 1 + g.below(6);
        let cols = 1 + g.below(6);
        let entries: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| g.range(-20, 20)).collect()).collect();
        let m = IntMatrix::from_rows(&entries);
        let r = snf(&m);
        let (mb, ub, vb, sb) = (big(&m), big(&r.u), big(&r.v), big(&r.s));
        let umv = mat_mul(&mat_mul(&ub, &mb, rows, cols), &vb, cols, cols);
        out.check(umv == sb, || format!("case {case}: U·M·V ≠ S"));
        out.check(det(&ub).abs() == BigInt::from(1) && det(&vb).abs() == BigInt::from(1), || {
            format!("case {case}: transform not unimodular")
        });
        let diag: Vec<BigInt> = (0..rows.min(cols)).map(|i| sb[i][i].clone()).collect();
        let off_diagonal_zero = (0..rows).all(|i| (0..cols).all(|j| i == j || sb[i][j].is_zero()));
        let chain = diag.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() });
        let nonneg = diag.iter().all(|d| !d.is_negative());
        out.check(off_diagonal_zero && chain && nonneg, || format!("case {case}: not in Smith form {diag:?}"));
        if rows <= 4 && cols <= 4 {
            let mut prod = BigInt::from(1);
            for k in 1..=rows.min(cols) {
                prod *= &diag[k - 1];
                let gcd = minors_gcd(&mb, cols, k);
                out.check(prod == gcd, || format!("case {case}: d1···d{k} = {prod}, gcd of minors = {gcd}"));
            }
        }
    }
    out
}

fn uct_suite() -> Outcome {
    let mut out = Outcome::new(Some(30));
    let mut g = Gen::new(0x5eed_0002);
    for case in 0..100 {
        let c = g.free_complex();
        let coeff = g.group();
        for n in c.lo()..=c.hi() + 1 {
            let rep = match uct_verify(&c, &coeff, n) {
                Ok(r) => r,
                Err(e) => {
                    out.failures.push(format!("case {case} degree {n}: {e}"));
                    continue;
                }
            };
            let h = c.homology(n).canonical().clone();
            let hprev = c.homology(n - 1).canonical().clone();
            let middle = tensor_homology_oracle(&c, &coeff, n);
            let tensor = tensor_oracle(&h, coeff.canonical());
            let tor = tor_oracle(&hprev, coeff.canonical());
            out.check(rep.sequence_exact, || format!("case {case} degree {n}: sequence not exact"));
            out.check(rep.middle == middle, || format!("case {case} degree {n}: H(C⊗G) {} vs oracle {middle}", rep.middle));
            out.check(rep.tensor_term == tensor && rep.tor_term == tor, || format!("case {case} degree {n}: end terms"));
            out.check(direct_sum_oracle(&tensor, &tor) == middle, || format!("case {case} degree {n}: splitting"));
        }
    }
    out
}

fn lim_engine() -> Outcome {
    let mut out = Outcome::new(Some(10));
    let v = prohom::poset::FinitePoset::v_shape();
    let objects: Vec<FgAbGroup> =
        (0..v.len()).map(|k| if v.arrows().iter().any(|&(a, _)| a == k) { FgAbGroup::trivial() } else { FgAbGroup::free(1) }).collect();
    let maps: Vec<AbMap> = v.arrows().iter().map(|&(a, b)| AbMap::zero(&objects[a], &objects[b])).collect();
    let d = GroupDiagram::new(v, objects, maps).expect("V diagram");
    let lims = d.lims(2);
    out.check(lims[0].is_trivial(), || format!("V-poset lim^0 = {}", lims[0]));
    out.check(lims[1].to_string() == "Z", || format!("V-poset lim^1 = {}", lims[1]));
    out.check(lims[2].is_trivial(), || format!("V-poset lim^2 = {}", lims[2]));
    let mut g = Gen::new(0x5eed_0003);
    for case in 0..100 {
        let p = g.poset_with_initial();
        let d = g.group_diagram_on(&p, false);
        let top = p.initial_object().expect("initial object");
        let smax = p.nerve_dimension();
        let lims = d.lims(smax);
        out.check(lims[0].is_isomorphic(d.object(top)), || format!("case {case}: lim^0 {} vs {}", lims[0], d.object(top)));
        for (s, l) in lims.iter().enumerate().skip(1) {
            out.check(l.is_trivial(), || format!("case {case}: lim^{s} = {l}"));
        }
    }
    out
}

fn lim_les() -> Outcome {
    let mut out = Outcome::new(Some(30));
    let bounds = Bounds { max_objects: 4, ..Bounds::default() };
    let mut g = Gen::with_bounds(0x5eed_0004, bounds);
    for case in 0..50 {
        let p = g.poset();
        let ses = g.diagram_ses_on(&p);
        let rep = ses.lim_les(p.nerve_dimension());
        out.check(rep.exact, || format!("case {case}: long exact sequence fails"));
    }
    out
}

fn spectral_engine() -> Outcome {
    let mut out = Outcome::new(Some(60));
    let mut g = Gen::new(0x5eed_0005);
    for case in 0..50 {
        let b = g.bicomplex(4, 4);
        let ss = SpectralSequence::new(&b);
        let (tlo, thi) = b.t_range();
        for s in 0..=b.smax() {
            for t in tlo..=thi {
                let ours = ss.e(2, (s, t)).to_group().canonical().clone();
                let oracle = e2_oracle(&b, s, t);
                out.check(ours == oracle, || format!("case {case}: E2({s},{t}) = {ours}, oracle {oracle}"));
            }
        }
        let (lo, hi) = b.degree_range();
        for n in lo - 1..=hi + 1 {
            out.check(ss.d2e2_les(n).exact, || format!("case {case}: D2/E2 sequence fails in degree {n}"));
        }
        let conv = ss.check_convergence();
        out.check(conv.filtration_ok, || format!("case {case}: filtration does not converge"));
        out.check(conv.ranks_add, || format!("case {case}: free ranks do not add"));
        for d in conv.degrees.iter().filter(|d| !d.torsion_multiplies) {
            out.failures.push(format!(
                "case {case}: torsion orders do not multiply in degree {}: H = {}, graded = [{}]",
                d.n,
                d.total,
                d.graded.iter().map(|c| c.group.to_string()).collect::<Vec<_>>().join(", ")
            ));
        }
    }
    out
}

fn holim_e2() -> Outcome {
    let mut out = Outcome::new(Some(60));
    let mut g = Gen::new(0x5eed_0006);
    for case in 0..50 {
        let p = g.poset();
        let d = g.complex_diagram_on(&p, 3, 3);
        let rep = e2_consistency(&d);
        for c in rep.cells.iter().filter(|c| !c.agree) {
            out.failures.push(format!("case {case}: E2({},{}) = {} but lim = {}", c.s, c.t, c.e2, c.lim));
        }
        out.check(rep.consistent, || format!("case {case}: inconsistent"));
    }
    out
}

fn cofinality() -> Outcome {
    let mut out = Outcome::new(None);
    let mut g = Gen::new(0x5eed_0007);
    for case in 0..20 {
        let p = g.poset_with_initial();
        let d = g.complex_diagram_on(&p, 3, 3);
        let top = p.initial_object().expect("initial object");
        match cofinality_check(&d, &[top]) {
            Ok(rep) => out.check(rep.holds, || format!("case {case}: restriction changes holim homology")),
            Err(e) => out.failures.push(format!("case {case}: {e}")),
        }
    }
    out
}

/// A presentation with at most two generators and two relations, so the strong
/// tensor's index poset stays within the default budget on five objects.
fn small_module(g: &mut Gen) -> FgAbGroup {
    let n = 1 + g.below(2);
    let m = g.below(3);
    FgAbGroup::new(n, g.matrix(n, m)).expect("shape")
}

fn tensor_comparison() -> Outcome {
    let mut out = Outcome::new(None);
    let mut g = Gen::new(0x5eed_0008);
    for case in 0..20 {
        let p = g.poset_with_initial();
        let pm = ProModule::new(g.group_diagram_on(&p, false));
        let m = small_module(&mut g);
        match compare_tensors(&pm, &m) {
            Ok(rep) => out.check(rep.isomorphic, || format!("case {case}: strong {} vs weak {}", rep.strong, rep.weak)),
            Err(e) => out.failures.push(format!("case {case}: {e}")),
        }
    }
    out
}

fn tor_coherence() -> Outcome {
    let mut out = Outcome::new(None);
    let mut g = Gen::new(0x5eed_0009);
    for case in 0..20 {
        let p = g.poset();
        let pm = ProModule::new(g.group_diagram_on(&p, false));
        let coeff = g.group();
        for n in 0..=2 {
            let a = pro_tor(&pm, &coeff, n);
            let b = resolution_tor(&pm, &coeff, n);
            out.check(a.levels() == b.levels(), || format!("case {case}: Tor_{n} levels differ"));
        }
    }
    let z = FgAbGroup::free(1);
    let two = AbMap::scalar(&z, 2);
    let proj = AbMap::new(z.clone(), FgAbGroup::cyclic(2), IntMatrix::from_rows(&[vec![1]])).expect("projection");
    for case in 0..20 {
        let p = g.poset();
        let pm = ProModule::new(g.group_diagram_on(&p, false));
        match second_les(&pm, &two, &proj) {
            Ok(rep) => out.check(rep.exact, || format!("mod-two family {case}: second sequence fails")),
            Err(e) => out.failures.push(format!("mod-two family {case}: {e}")),
        }
        let d = g.group_diagram_on(&p, true);
        let coeff = g.group();
        let rep = first_les(&bockstein_ses(&d, 2), &coeff);
        out.check(rep.exact, || format!("mod-two family {case}: first sequence fails"));
    }
    for case in 0..20 {
        let p = g.poset();
        let ses = g.diagram_ses_on(&p);
        let coeff = g.group();
        let rep = first_les(&ses, &coeff);
        out.check(rep.exact, || format!("random sequence {case}: first sequence fails"));
        let (a, b) = (g.group(), g.group());
        let sum = FgAbGroup::direct_sum(&[a, b]);
        let (split_f, split_g) = (sum.injections[0].clone(), sum.projections[1].clone());
        let pm = ProModule::new(g.group_diagram_on(&p, false));
        match second_les(&pm, &split_f, &split_g) {
            Ok(rep) => out.check(rep.exact, || format!("random sequence {case}: second sequence fails")),
            Err(e) => out.failures.push(format!("random sequence {case}: {e}")),
        }
    }
    out
}

fn witness() -> Outcome {
    let mut out = Outcome::new(Some(10));
    let z = FgAbGroup::free(1);
    for n in [4usize, 8, 16, 64] {
        let t = cluster_tower(2, n, &z).expect("k = 2");
        out.check(matches_truncated_p(&t), || format!("n = {n}: H_2 differs from the truncated P(Z)"));
        let h = truncated_strong_homology(&t, 2);
        out.check(h.is_free() && h.canonical().free_rank == n + 1, || format!("n = {n}: H_2 of holim is {h}"));
        let w = interchange_witness(n, &z, SparseVec::unit(0)).expect("nonzero entry");
        for s in 0..n {
            out.check(!bounded_image_test(&w, s), || format!("n = {n}: bound {s} passes"));
        }
        out.check(bounded_image_test(&w, n), || format!("n = {n}: bound {n} fails"));
    }
    out
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Smith normal form suite", snf_suite),
        ("universal coefficients suite", uct_suite),
        ("derived-limit engine", lim_engine),
        ("limit long exact sequence", lim_les),
        ("spectral engine", spectral_engine),
        ("homotopy limit E2 consistency", holim_e2),
        ("cofinality", cofinality),
        ("tensor comparison", tensor_comparison),
        ("pro-Tor coherence", tor_coherence),
        ("witness reproduction", witness),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut out = run();
        let elapsed = start.elapsed();
        if let Some(limit) = out.limit {
            if elapsed > limit {
                out.failures.push(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        let ok = out.failures.is_empty();
        all &= ok;
        println!("criterion {:>2} {}: {} ({elapsed:.2?})", k + 1, name, if ok { "PASS" } else { "FAIL" });
        for f in out.failures.iter().take(5) {
            println!("    {f}");
        }
        if out.failures.len() > 5 {
            println!("    … {} more", out.failures.len() - 5);
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
