use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn prohom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prohom")).args(args).env_remove("PROHOM_BUDGET").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TIMES_TWO: &str = r#"{"kind":"complex","version":1,"lo":0,"hi":1,
  "groups":[{"generators":1,"relations":[]},{"generators":1,"relations":[]}],
  "differentials":[[[2]]]}"#;

const V_POSET: &str = r#"{"kind":"diagram","version":1,
  "poset":{"objects":["a","b","c"],"arrows":[["a","c"],["b","c"]]},
  "groups":{"a":{"generators":0,"relations":[]},"b":{"generators":0,"relations":[]},"c":{"generators":1,"relations":[]}},
  "maps":{"a->c":[[]],"b->c":[[]]}}"#;

#[test]
fn homology_of_times_two() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "c.json", TIMES_TWO);
    let o = prohom(&["homology", s(&f)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["H_0", "Z/2"]));
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["H_1", "0"]));
    let v: Value = serde_json::from_str(&stdout(&prohom(&["--json", "homology", s(&f)]))).unwrap();
    assert_eq!(v["homology"][0]["group"], "Z/2");
    assert_eq!(v["homology"][1]["group"], "0");
}

#[test]
fn lims_of_the_v_poset() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "v.json", V_POSET);
    let o = prohom(&["--json", "lims", s(&f), "--max-s", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lims"][0]["group"], "0");
    assert_eq!(v["lims"][1]["group"], "Z");
}

#[test]
fn snf_of_identity() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "id.json",
        r#"{"kind":"map","version":1,"source":{"generators":2,"relations":[]},
            "target":{"generators":2,"relations":[]},"matrix":[[1,0],[0,1]]}"#,
    );
    let v: Value = serde_json::from_str(&stdout(&prohom(&["--json", "snf", s(&f)]))).unwrap();
    let id: Value = serde_json::from_str("[[1,0],[0,1]]").unwrap();
    assert_eq!(v["s"], id);
    assert_eq!(v["u"], id);
    assert_eq!(v["v"], id);
}

#[test]
fn validation_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let ok = write(&dir, "ok.json", TIMES_TWO);
    let o = prohom(&["validate", s(&ok)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("ok"));

    let bad = write(
        &dir,
        "dd.json",
        r#"{"kind":"complex","version":1,"lo":0,"hi":2,
           "groups":[{"generators":1,"relations":[]},{"generators":1,"relations":[]},{"generators":1,"relations":[]}],
           "differentials":[[[1]],[[1]]]}"#,
    );
    let o = prohom(&["validate", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("d_1 ∘ d_2"), "{}", stderr(&o));

    let square = write(
        &dir,
        "sq.json",
        r#"{"kind":"diagram","version":1,
           "poset":{"objects":["a","b","c","d"],"arrows":[["a","b"],["a","c"],["b","d"],["c","d"]]},
           "groups":{"a":{"generators":1,"relations":[]},"b":{"generators":1,"relations":[]},
                     "c":{"generators":1,"relations":[]},"d":{"generators":1,"relations":[]}},
           "maps":{"a->b":[[1]],"a->c":[[1]],"b->d":[[2]],"c->d":[[1]]}}"#,
    );
    let o = prohom(&["validate", s(&square)]);
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("functoriality") && msg.contains('a') && msg.contains('d'), "{msg}");

    let malformed = write(&dir, "m.json", "{\n  \"kind\": \"group\",\n  \"generators\": 1,,\n}");
    let o = prohom(&["homology", s(&malformed)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3, column"), "{}", stderr(&o));

    let unknown = write(&dir, "u.json", r#"{"kind":"sheaf","version":1}"#);
    assert_eq!(prohom(&["validate", s(&unknown)]).status.code(), Some(2));
}

#[test]
fn budget_exceeded_exits_three() {
    let dir = TempDir::new().unwrap();
    let gen = prohom(&["corpus", "--seed", "5", "--kind", "promodule"]);
    let f = write(&dir, "p.json", &stdout(&gen));
    let o = Command::new(env!("CARGO_BIN_EXE_prohom"))
        .args(["tensor-compare", s(&f), "--module", "Z/2"])
        .env("PROHOM_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = prohom(&["tensor-compare", s(&f), "--module", "Z/2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("isomorphic: yes"));
}

#[test]
fn uct_and_witness() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "c.json", TIMES_TWO);
    let v: Value = serde_json::from_str(&stdout(&prohom(&["--json", "uct", s(&f), "--coeff", "Z/2"]))).unwrap();
    assert_eq!(v["exact"], true);
    let o = prohom(&["--json", "witness", "--k", "2", "--n", "4", "--rank", "1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["matches_truncated_p"], true);
    assert_eq!(v["strong_homology"], "Z^5");
    assert_eq!(v["uct_gap"]["first_passing_bound"], 4);
}

#[test]
fn corpus_is_deterministic_and_round_trips() {
    let a = stdout(&prohom(&["corpus", "--seed", "1", "--count", "1", "--kind", "complex"]));
    let b = stdout(&prohom(&["corpus", "--seed", "1", "--count", "1", "--kind", "complex"]));
    assert_eq!(a, b);
    let dir = TempDir::new().unwrap();
    for kind in ["group", "map", "complex", "poset", "diagram", "complex-diagram", "bicomplex", "promodule"] {
        let o = prohom(&["corpus", "--seed", "7", "--count", "3", "--kind", kind, "--out", s(dir.path())]);
        assert!(o.status.success(), "{kind}: {}", stderr(&o));
        for line in stdout(&o).lines() {
            let o = prohom(&["validate", line]);
            assert!(o.status.success(), "{kind}: {}", stderr(&o));
            let first = fs::read_to_string(line).unwrap();
            let again = stdout(&prohom(&["corpus", "--seed", "7", "--count", "3", "--kind", kind]));
            assert!(again.contains(&first));
        }
    }
    let cd = dir.path().join("complex-diagram-7-0.json");
    let x = stdout(&prohom(&["--json", "holim", s(&cd)]));
    let y = stdout(&prohom(&["--json", "holim", s(&cd)]));
    assert_eq!(x, y);
    let bi = dir.path().join("bicomplex-7-0.json");
    let o = prohom(&["specseq", s(&bi), "--pages", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("E_2"));
    assert_eq!(prohom(&["corpus", "--seed", "1", "--kind", "sheaf"]).status.code(), Some(2));
}
