use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use prohom::complexes::uct_verify;
use prohom::corpus::Gen;
use prohom::diagram::GroupDiagram;
use prohom::holim::{degree_span, holim_complex};
use prohom::io::{parse_group, to_canonical_string, IoError, Manifest, KINDS};
use prohom::pro::{compare_tensors, ProModule};
use prohom::snf::snf;
use prohom::specseq::SpectralSequence;
use prohom::witness::{cluster_tower, matches_truncated_p, tower_lims, truncated_strong_homology, uct_gap_report};
use prohom::{Error, FgAbGroup, IntMatrix};

#[derive(Parser)]
#[command(name = "prohom", version, about = "Exact homological algebra over the integers")]
struct Cli {
    /// Emit structured JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Smith normal form of a map's matrix or a group's relation matrix.
    Snf { input: PathBuf },
    /// Homology of a chain complex in every degree.
    Homology { input: PathBuf },
    /// Derived limits of a diagram or pro-module.
    Lims {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_s: usize,
    },
    /// Homology of the homotopy limit of a complex-diagram.
    Holim {
        input: PathBuf,
        /// `lo:hi`; defaults to every degree where the answer can be nonzero.
        #[arg(long)]
        degree_range: Option<String>,
    },
    /// Pages of the spectral sequence of a bicomplex and the convergence check.
    Specseq {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        pages: usize,
    },
    /// Universal coefficient sequence of a complex with coefficients in a group.
    Uct {
        input: PathBuf,
        /// `Z^r + Z/d + …` or a JSON group.
        #[arg(long)]
        coeff: String,
    },
    /// Strong and weak tensor products of a cofiltered pro-module with a group.
    TensorCompare {
        input: PathBuf,
        #[arg(long, default_value = "Z")]
        module: String,
    },
    /// Finite truncations of the sphere-cluster tower and the triangular witness.
    Witness {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
    /// Checks every invariant of an input without computing anything.
    Validate { input: PathBuf },
    /// Writes reproducible random instances.
    Corpus {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        kind: String,
        /// Output directory; prints to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Validation(String),
    Budget(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Budget(m) | Failure::Other(m) => m,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Failure {
        Failure::Validation(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::IndexBudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::Invalid(_) | Error::DimensionMismatch(_) => Failure::Validation(e.to_string()),
            e => Failure::Other(e.to_string()),
        }
    }
}

type Outcome = Result<Output, Failure>;

/// A result both as a table and as JSON.
struct Output {
    text: String,
    value: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(out) => {
            if cli.json {
                print!("{}", to_canonical_string(&out.value));
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if cli.json {
                print!("{}", to_canonical_string(&json!({ "error": f.message(), "exit": f.code() })));
            }
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cmd: &Command) -> Outcome {
    match cmd {
        Command::Snf { input } => run_snf(&load(input)?),
        Command::Homology { input } => run_homology(&load(input)?),
        Command::Lims { input, max_s } => run_lims(&load(input)?, *max_s),
        Command::Holim { input, degree_range } => run_holim(&load(input)?, degree_range.as_deref()),
        Command::Specseq { input, pages } => run_specseq(&load(input)?, *pages),
        Command::Uct { input, coeff } => run_uct(&load(input)?, &parse_group(coeff)?),
        Command::TensorCompare { input, module } => run_tensor_compare(&load(input)?, &parse_group(module)?),
        Command::Witness { k, n, rank } => run_witness(*k, *n, *rank),
        Command::Validate { input } => {
            let m = load(input)?;
            Ok(Output { text: format!("ok: valid {}\n", m.kind()), value: json!({ "kind": m.kind(), "valid": true }) })
        }
        Command::Corpus { seed, count, kind, out } => run_corpus(*seed, *count, kind, out.as_deref()),
    }
}

fn load(path: &Path) -> Result<Manifest, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Other(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?
    };
    Ok(Manifest::parse(&text)?)
}

fn wrong_kind(m: &Manifest, wanted: &str) -> Failure {
    Failure::Validation(format!("expected {wanted}, got {}", m.kind()))
}

fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        format!("{}\n", parts.join("  ").trim_end())
    };
    let mut out = line(headers.to_vec());
    out += &line(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().iter().map(String::as_str).collect());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

fn rows_json(m: &IntMatrix) -> Value {
    serde_json::to_value(m.to_rows()).expect("integers serialize")
}

fn group_json(g: &FgAbGroup) -> Value {
    json!(g.to_string())
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn run_snf(m: &Manifest) -> Outcome {
    let mat = match m {
        Manifest::Map(f) => f.matrix().clone(),
        Manifest::Group(g) => g.relations().clone(),
        other => return Err(wrong_kind(other, "a map or a group")),
    };
    let r = snf(&mat);
    let diag: Vec<String> = r.nonzero_diagonal().iter().map(ToString::to_string).collect();
    let show = |name: &str, x: &IntMatrix| {
        let rows: Vec<String> =
            x.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")).collect();
        format!("{name} =\n{}\n", rows.iter().map(|r| format!("  [{r}]")).collect::<Vec<_>>().join("\n"))
    };
    let text = format!(
        "invariant factors: {}\nrank: {}\n{}{}{}",
        if diag.is_empty() { "none".into() } else { diag.join(", ") },
        r.rank(),
        show("S", &r.s),
        show("U", &r.u),
        show("V", &r.v)
    );
    let value = json!({
        "diagonal": serde_json::to_value(r.nonzero_diagonal()).expect("integers serialize"),
        "rank": r.rank(),
        "s": rows_json(&r.s),
        "u": rows_json(&r.u),
        "v": rows_json(&r.v),
    });
    Ok(Output { text, value })
}

fn run_homology(m: &Manifest) -> Outcome {
    let Manifest::Complex(c) = m else { return Err(wrong_kind(m, "a complex")) };
    let degrees: Vec<i64> = if c.is_empty() { Vec::new() } else { (c.lo()..=c.hi()).collect() };
    let rows: Vec<Vec<String>> = degrees.iter().map(|&n| vec![format!("H_{n}"), c.homology(n).to_string()]).collect();
    let value = json!({
        "homology": degrees.iter().map(|&n| json!({ "degree": n, "group": group_json(&c.homology(n)) })).collect::<Vec<_>>(),
    });
    Ok(Output { text: table(&["degree", "group"], &rows), value })
}

fn diagram_of(m: &Manifest) -> Result<&GroupDiagram, Failure> {
    match m {
        Manifest::Diagram(d) => Ok(d),
        Manifest::ProModule(p) => Ok(p.diagram()),
        other => Err(wrong_kind(other, "a diagram or a pro-module")),
    }
}

fn run_lims(m: &Manifest, max_s: usize) -> Outcome {
    let lims = diagram_of(m)?.lims(max_s);
    let rows: Vec<Vec<String>> = lims.iter().enumerate().map(|(s, g)| vec![format!("lim^{s}"), g.to_string()]).collect();
    let value = json!({
        "lims": lims.iter().enumerate().map(|(s, g)| json!({ "s": s, "group": group_json(g) })).collect::<Vec<_>>(),
    });
    Ok(Output { text: table(&["s", "group"], &rows), value })
}

fn parse_range(r: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Validation(format!("degree range {r:?} is not lo:hi"));
    let (a, b) = r.split_once(':').or_else(|| r.split_once("..")).ok_or_else(bad)?;
    let lo = a.trim().parse().map_err(|_| bad())?;
    let hi = b.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn run_holim(m: &Manifest, range: Option<&str>) -> Outcome {
    let Manifest::ComplexDiagram(d) = m else { return Err(wrong_kind(m, "a complex-diagram")) };
    let (lo, hi) = match range {
        Some(r) => parse_range(r)?,
        None => degree_span(d).unwrap_or((0, -1)),
    };
    let h = holim_complex(d);
    let groups: Vec<(i64, FgAbGroup)> = (lo..=hi).map(|n| (n, h.homology(n))).collect();
    let rows: Vec<Vec<String>> = groups.iter().map(|(n, g)| vec![format!("H_{n}"), g.to_string()]).collect();
    let value = json!({
        "homology": groups.iter().map(|(n, g)| json!({ "degree": n, "group": group_json(g) })).collect::<Vec<_>>(),
    });
    Ok(Output { text: table(&["degree", "group"], &rows), value })
}

fn run_specseq(m: &Manifest, pages: usize) -> Outcome {
    let Manifest::Bicomplex(b) = m else { return Err(wrong_kind(m, "a bicomplex")) };
    let ss = SpectralSequence::new(b);
    let data = ss.data(pages.max(1));
    let conv = ss.check_convergence();
    let mut text = String::new();
    for page in &data.pages {
        text += &format!("E_{}\n", page.r);
        let rows: Vec<Vec<String>> =
            page.e.iter().map(|c| vec![c.s.to_string(), c.t.to_string(), c.group.to_string()]).collect();
        text += &table(&["s", "t", "group"], &rows);
        text.push('\n');
    }
    text += &format!("E_inf (stable from page {})\n", data.stable_page);
    let rows: Vec<Vec<String>> =
        data.e_inf.iter().map(|c| vec![c.s.to_string(), c.t.to_string(), c.group.to_string()]).collect();
    text += &table(&["s", "t", "group"], &rows);
    text.push('\n');
    let rows: Vec<Vec<String>> = conv
        .degrees
        .iter()
        .map(|d| vec![d.n.to_string(), d.total.to_string(), yes(d.epi_tower && d.kernels_match && d.lim_matches)])
        .collect();
    text += "total cohomology\n";
    text += &table(&["n", "H^n(Tot)", "filtration"], &rows);
    text += &format!(
        "filtration ok: {}\nfree ranks add: {}\ntorsion orders multiply: {}\n",
        yes(conv.filtration_ok),
        yes(conv.ranks_add),
        yes(conv.torsion_multiplies)
    );
    let value = json!({ "pages": data, "convergence": conv });
    Ok(Output { text, value: serde_json::to_value(value).expect("reports serialize") })
}

fn run_uct(m: &Manifest, g: &FgAbGroup) -> Outcome {
    let Manifest::Complex(c) = m else { return Err(wrong_kind(m, "a complex")) };
    let degrees: Vec<i64> = if c.is_empty() { Vec::new() } else { (c.lo()..=c.hi() + 1).collect() };
    let reports = degrees.iter().map(|&n| uct_verify(c, g, n)).collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.degree.to_string(),
                r.tensor_term.to_string(),
                r.middle.to_string(),
                r.tor_term.to_string(),
                yes(r.sequence_exact),
            ]
        })
        .collect();
    let text = table(&["n", "H_n(C)⊗G", "H_n(C⊗G)", "Tor(H_{n-1}(C),G)", "exact"], &rows);
    let value = json!({
        "coefficients": group_json(g),
        "degrees": serde_json::to_value(&reports).expect("reports serialize"),
        "exact": reports.iter().all(|r| r.sequence_exact),
    });
    Ok(Output { text, value })
}

fn run_tensor_compare(m: &Manifest, module: &FgAbGroup) -> Outcome {
    let p = match m {
        Manifest::ProModule(p) => p.clone(),
        Manifest::Diagram(d) => ProModule::new(d.clone()),
        other => return Err(wrong_kind(other, "a pro-module")),
    };
    let cmp = compare_tensors(&p, module)?;
    let text = format!(
        "strong tensor at the initial index: {}\nweak tensor at the initial index: {}\nisomorphic: {}\n",
        cmp.strong,
        cmp.weak,
        yes(cmp.isomorphic)
    );
    Ok(Output { text, value: serde_json::to_value(&cmp).expect("reports serialize") })
}

fn run_witness(k: usize, n: usize, rank: usize) -> Outcome {
    let g = FgAbGroup::free(rank);
    let t = cluster_tower(k, n, &g)?;
    let matches = matches_truncated_p(&t);
    let strong = truncated_strong_homology(&t, k as i64);
    let lims = tower_lims(&t, k as i64);
    let gap = if rank > 0 { Some(uct_gap_report(k, n, &g)?) } else { None };
    let mut text = format!(
        "H_{k} of the tower matches the truncated P(G): {}\nH_{k} of the homotopy limit: {strong}\nlim^0 H_{k}: {}\nlim^1 H_{k}: {}\n",
        yes(matches),
        lims[0],
        lims[1]
    );
    if let Some(gap) = &gap {
        text += &format!(
            "stagewise universal coefficients exact: {}\nrow bounds that fail: {}\nfirst bound that holds: {}\n",
            yes(gap.stagewise_exact),
            if gap.failing_bounds.is_empty() {
                "none".to_string()
            } else {
                format!("0..{}", gap.failing_bounds.len())
            },
            gap.first_passing_bound.map_or("none".into(), |s| s.to_string())
        );
    }
    let value = json!({
        "k": k,
        "n": n,
        "rank": rank,
        "matches_truncated_p": matches,
        "strong_homology": group_json(&strong),
        "lims": lims.iter().map(group_json).collect::<Vec<_>>(),
        "uct_gap": gap.map(|g| serde_json::to_value(g).expect("reports serialize")),
    });
    Ok(Output { text, value })
}

fn generate(g: &mut Gen, kind: &str) -> Result<Manifest, Failure> {
    Ok(match kind {
        "group" => Manifest::Group(g.group()),
        "map" => {
            let p = prohom::poset::FinitePoset::chain(1);
            let d = g.group_diagram_on(&p, false);
            Manifest::Map(d.generating()[0].clone())
        }
        "complex" => Manifest::Complex(g.free_complex()),
        "poset" => Manifest::Poset(g.poset()),
        "diagram" => Manifest::Diagram(g.group_diagram()),
        "complex-diagram" => {
            let p = g.poset();
            Manifest::ComplexDiagram(g.complex_diagram_on(&p, 3, 3))
        }
        "bicomplex" => Manifest::Bicomplex(g.bicomplex(4, 4)),
        "promodule" => {
            let p = g.poset_with_initial();
            Manifest::ProModule(ProModule::new(g.group_diagram_on(&p, false)))
        }
        other => return Err(Failure::Validation(format!("unknown kind {other:?}; expected one of {}", KINDS.join(", ")))),
    })
}

fn run_corpus(seed: u64, count: usize, kind: &str, out: Option<&Path>) -> Outcome {
    let mut g = Gen::new(seed);
    let items = (0..count).map(|_| generate(&mut g, kind)).collect::<Result<Vec<_>, _>>()?;
    let mut text = String::new();
    let mut files = Vec::new();
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Failure::Other(format!("{}: {e}", dir.display())))?;
            for (i, m) in items.iter().enumerate() {
                let path = dir.join(format!("{kind}-{seed}-{i}.json"));
                fs::write(&path, m.to_json()).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
                text += &format!("{}\n", path.display());
                files.push(json!(path.display().to_string()));
            }
        }
        None => {
            for m in &items {
                text += &m.to_json();
            }
        }
    }
    let value = json!({
        "seed": seed,
        "kind": kind,
        "files": files,
        "instances": items.iter().map(Manifest::to_value).collect::<Vec<_>>(),
    });
    Ok(Output { text, value })
}
