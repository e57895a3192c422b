//! JSON manifests for every input kind.
//!
//! Each top-level document carries `"kind"` and `"version"`. Nested objects
//! (the groups of a complex, the poset of a diagram) are bare payloads. Keys are
//! emitted in sorted order so equal values serialize to identical bytes.

use std::collections::{BTreeMap, HashSet};

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::complexes::{ChainComplex, ChainMap};
use crate::diagram::{ComplexDiagram, Diagram, GroupDiagram};
use crate::error::Error;
use crate::group::{AbMap, FgAbGroup};
use crate::integer::Integer;
use crate::matrix::IntMatrix;
use crate::poset::FinitePoset;
use crate::pro::{ProFlags, ProModule};
use crate::specseq::Bicomplex;

pub const FORMAT_VERSION: u64 = 1;

pub const KINDS: [&str; 8] = ["group", "map", "complex", "poset", "diagram", "complex-diagram", "bicomplex", "promodule"];

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error(transparent)]
    Engine(#[from] Error),
}

type IoResult<T> = std::result::Result<T, IoError>;

#[derive(Clone, Debug)]
pub enum Manifest {
    Group(FgAbGroup),
    Map(AbMap),
    Complex(ChainComplex),
    Poset(FinitePoset),
    Diagram(GroupDiagram),
    ComplexDiagram(ComplexDiagram),
    Bicomplex(Bicomplex),
    ProModule(ProModule),
}

impl Manifest {
    pub fn kind(&self) -> &'static str {
        match self {
            Manifest::Group(_) => "group",
            Manifest::Map(_) => "map",
            Manifest::Complex(_) => "complex",
            Manifest::Poset(_) => "poset",
            Manifest::Diagram(_) => "diagram",
            Manifest::ComplexDiagram(_) => "complex-diagram",
            Manifest::Bicomplex(_) => "bicomplex",
            Manifest::ProModule(_) => "promodule",
        }
    }

    /// Parses and validates; every type invariant is checked by construction.
    pub fn parse(text: &str) -> IoResult<Manifest> {
        let v: Value = serde_json::from_str(text).map_err(|e| IoError::Syntax {
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })?;
        Manifest::from_value(&v)
    }

    pub fn from_value(v: &Value) -> IoResult<Manifest> {
        let root = At::root(v);
        let kind = root.field("kind")?.str()?;
        let version = root.field("version")?.usize()?;
        if version as u64 != FORMAT_VERSION {
            return Err(root.field("version")?.err(format!("unsupported version {version}, expected {FORMAT_VERSION}")));
        }
        Ok(match kind {
            "group" => Manifest::Group(group(&root)?),
            "map" => Manifest::Map(map(&root)?),
            "complex" => Manifest::Complex(complex(&root)?),
            "poset" => Manifest::Poset(poset(&root)?),
            "diagram" => Manifest::Diagram(diagram(&root)?),
            "complex-diagram" => Manifest::ComplexDiagram(complex_diagram(&root)?),
            "bicomplex" => Manifest::Bicomplex(bicomplex(&root)?),
            "promodule" => Manifest::ProModule(promodule(&root)?),
            other => return Err(root.field("kind")?.err(format!("unknown kind {other:?}"))),
        })
    }

    pub fn to_value(&self) -> Value {
        let mut body = match self {
            Manifest::Group(g) => group_value(g),
            Manifest::Map(f) => map_value(f),
            Manifest::Complex(c) => complex_value(c),
            Manifest::Poset(p) => poset_value(p),
            Manifest::Diagram(d) => diagram_value(d),
            Manifest::ComplexDiagram(d) => complex_diagram_value(d),
            Manifest::Bicomplex(b) => bicomplex_value(b),
            Manifest::ProModule(p) => json!({ "diagram": diagram_value(p.diagram()), "flags": flags_value(p.flags()) }),
        };
        let obj = body.as_object_mut().expect("payloads are objects");
        obj.insert("kind".into(), json!(self.kind()));
        obj.insert("version".into(), json!(FORMAT_VERSION));
        body
    }

    /// Pretty-printed with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        to_canonical_string(&self.to_value())
    }
}

pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&sort_keys(v)).expect("values serialize");
    s.push('\n');
    s
}

fn sort_keys(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let sorted: BTreeMap<&String, Value> = m.iter().map(|(k, x)| (k, sort_keys(x))).collect();
            Value::Object(sorted.into_iter().map(|(k, x)| (k.clone(), x)).collect::<Map<_, _>>())
        }
        Value::Array(a) => Value::Array(a.iter().map(sort_keys).collect()),
        other => other.clone(),
    }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(k) => msg[..k].to_string(),
        None => msg.to_string(),
    }
}

/// Reads a group from `"Z^2 + Z/3"` notation (`"0"` is trivial) or from JSON.
pub fn parse_group(text: &str) -> IoResult<FgAbGroup> {
    let t = text.trim();
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(t).map_err(|e| IoError::Syntax {
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })?;
        return group(&At::root(&v));
    }
    let bad = |m: String| IoError::Schema { path: "group".into(), message: m };
    if t == "0" {
        return Ok(FgAbGroup::trivial());
    }
    let mut free = 0usize;
    let mut orders = Vec::new();
    for part in t.split('+').map(str::trim) {
        if part == "Z" {
            free += 1;
        } else if let Some(r) = part.strip_prefix("Z^") {
            free += r.trim().parse::<usize>().map_err(|_| bad(format!("bad rank in {part:?}")))?;
        } else if let Some(d) = part.strip_prefix("Z/") {
            let d: Integer = d.trim().parse().map_err(|_| bad(format!("bad order in {part:?}")))?;
            if d.signum() <= 0 {
                return Err(bad(format!("order must be positive in {part:?}")));
            }
            orders.push(d);
        } else {
            return Err(bad(format!("cannot read {part:?}; use Z, Z^r or Z/d joined by +")));
        }
    }
    Ok(FgAbGroup::from_cyclic(free, &orders))
}

/// A JSON value together with its location, for error messages.
#[derive(Clone)]
struct At<'a> {
    v: &'a Value,
    path: String,
}

impl<'a> At<'a> {
    fn root(v: &'a Value) -> At<'a> {
        At { v, path: "$".into() }
    }

    fn err(&self, message: impl Into<String>) -> IoError {
        IoError::Schema { path: self.path.clone(), message: message.into() }
    }

    fn field(&self, name: &str) -> IoResult<At<'a>> {
        let obj = self.v.as_object().ok_or_else(|| self.err("expected an object"))?;
        obj.get(name)
            .map(|v| At { v, path: format!("{}.{name}", self.path) })
            .ok_or_else(|| self.err(format!("missing field {name:?}")))
    }

    /// Nested payloads may repeat their kind; a wrong one is an error.
    fn expect_kind(&self, kind: &str) -> IoResult<()> {
        if let Some(k) = self.v.get("kind") {
            if k.as_str() != Some(kind) {
                return Err(self.err(format!("expected kind {kind:?}, found {k}")));
            }
        }
        Ok(())
    }

    fn str(&self) -> IoResult<&'a str> {
        self.v.as_str().ok_or_else(|| self.err("expected a string"))
    }

    fn bool(&self) -> IoResult<bool> {
        self.v.as_bool().ok_or_else(|| self.err("expected a boolean"))
    }

    fn usize(&self) -> IoResult<usize> {
        self.v.as_u64().map(|x| x as usize).ok_or_else(|| self.err("expected a non-negative integer"))
    }

    fn i64(&self) -> IoResult<i64> {
        self.v.as_i64().ok_or_else(|| self.err("expected an integer"))
    }

    fn integer(&self) -> IoResult<Integer> {
        serde_json::from_value(self.v.clone()).map_err(|_| self.err("expected an integer or a decimal string"))
    }

    fn array(&self) -> IoResult<Vec<At<'a>>> {
        let a = self.v.as_array().ok_or_else(|| self.err("expected an array"))?;
        Ok(a.iter().enumerate().map(|(k, v)| At { v, path: format!("{}[{k}]", self.path) }).collect())
    }

    fn object(&self) -> IoResult<Vec<(&'a str, At<'a>)>> {
        let m = self.v.as_object().ok_or_else(|| self.err("expected an object"))?;
        Ok(m.iter().map(|(k, v)| (k.as_str(), At { v, path: format!("{}[{k:?}]", self.path) })).collect())
    }

    fn vector(&self, len: usize) -> IoResult<Vec<Integer>> {
        let items = self.array()?;
        if items.len() != len {
            return Err(self.err(format!("expected {len} entries, found {}", items.len())));
        }
        items.iter().map(At::integer).collect()
    }

    /// A list of rows; the shape is known from context.
    fn matrix(&self, rows: usize, cols: usize) -> IoResult<IntMatrix> {
        let items = self.array()?;
        if items.len() != rows {
            return Err(self.err(format!("expected {rows} rows, found {}", items.len())));
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for r in &items {
            entries.extend(r.vector(cols)?);
        }
        Ok(IntMatrix::new(rows, cols, entries)?)
    }
}

fn group(at: &At) -> IoResult<FgAbGroup> {
    at.expect_kind("group")?;
    let n = at.field("generators")?.usize()?;
    let rels = at.field("relations")?;
    let cols = rels.array()?.iter().map(|c| c.vector(n)).collect::<IoResult<Vec<_>>>()?;
    let mut m = IntMatrix::zeros(n, cols.len());
    for (j, c) in cols.into_iter().enumerate() {
        for (i, x) in c.into_iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    Ok(FgAbGroup::new(n, m)?)
}

fn map(at: &At) -> IoResult<AbMap> {
    at.expect_kind("map")?;
    let source = group(&at.field("source")?)?;
    let target = group(&at.field("target")?)?;
    let m = at.field("matrix")?.matrix(target.generators(), source.generators())?;
    Ok(AbMap::new(source, target, m)?)
}

fn complex(at: &At) -> IoResult<ChainComplex> {
    at.expect_kind("complex")?;
    let lo = at.field("lo")?.i64()?;
    let hi = at.field("hi")?.i64()?;
    let groups = at.field("groups")?.array()?.iter().map(group).collect::<IoResult<Vec<_>>>()?;
    if hi - lo + 1 != groups.len() as i64 {
        return Err(at.field("groups")?.err(format!("degrees {lo}..={hi} need {} groups", (hi - lo + 1).max(0))));
    }
    if groups.is_empty() {
        return Ok(ChainComplex::empty());
    }
    let ds = at.field("differentials")?.array()?;
    if ds.len() != groups.len() - 1 {
        return Err(at.field("differentials")?.err(format!("expected {} differentials", groups.len() - 1)));
    }
    let mut diffs = Vec::new();
    for (k, d) in ds.iter().enumerate() {
        let m = d.matrix(groups[k].generators(), groups[k + 1].generators())?;
        diffs.push(AbMap::new(groups[k + 1].clone(), groups[k].clone(), m)?);
    }
    Ok(ChainComplex::new(lo, groups, diffs)?)
}

fn poset(at: &At) -> IoResult<FinitePoset> {
    at.expect_kind("poset")?;
    let labels = at.field("objects")?.array()?.iter().map(|l| l.str().map(String::from)).collect::<IoResult<Vec<_>>>()?;
    let mut arrows = Vec::new();
    let mut seen = HashSet::new();
    for a in at.field("arrows")?.array()? {
        let pair = a.array()?;
        if pair.len() != 2 {
            return Err(a.err("an arrow is a pair [from, to]"));
        }
        let (from, to) = (pair[0].str()?.to_string(), pair[1].str()?.to_string());
        if !seen.insert((from.clone(), to.clone())) {
            return Err(a.err(format!("duplicate arrow {from}->{to}")));
        }
        arrows.push((from, to));
    }
    Ok(FinitePoset::new(labels, &arrows)?)
}

fn arrow_key(p: &FinitePoset, k: usize) -> String {
    let (a, b) = p.arrows()[k];
    format!("{}->{}", p.label(a), p.label(b))
}

/// Per-object entries of `field`, in poset order, rejecting unknown labels.
fn per_object<'a>(at: &At<'a>, field: &str, p: &FinitePoset) -> IoResult<Vec<At<'a>>> {
    let f = at.field(field)?;
    let mut slots: Vec<Option<At>> = vec![None; p.len()];
    for (label, v) in f.object()? {
        let k = p.index_of(label).map_err(|_| v.err(format!("unknown object {label:?}")))?;
        slots[k] = Some(v);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(k, s)| s.ok_or_else(|| f.err(format!("missing object {:?}", p.label(k)))))
        .collect()
}

/// Per-arrow entries of `"maps"`, keyed `"from->to"`.
fn per_arrow<'a>(at: &At<'a>, p: &FinitePoset) -> IoResult<Vec<At<'a>>> {
    let f = at.field("maps")?;
    let entries: BTreeMap<&str, At> = f.object()?.into_iter().collect();
    let keys: Vec<String> = (0..p.arrows().len()).map(|k| arrow_key(p, k)).collect();
    if let Some(extra) = entries.keys().find(|k| !keys.iter().any(|x| x == *k)) {
        return Err(f.err(format!("{extra:?} is not an arrow of the poset")));
    }
    keys.iter()
        .map(|k| entries.get(k.as_str()).cloned().ok_or_else(|| f.err(format!("missing map {k:?}"))))
        .collect()
}

fn diagram(at: &At) -> IoResult<GroupDiagram> {
    at.expect_kind("diagram")?;
    let p = poset(&at.field("poset")?)?;
    let groups = per_object(at, "groups", &p)?.iter().map(group).collect::<IoResult<Vec<_>>>()?;
    let mut maps = Vec::new();
    for (k, m) in per_arrow(at, &p)?.iter().enumerate() {
        let (a, b) = p.arrows()[k];
        let mat = m.matrix(groups[b].generators(), groups[a].generators())?;
        maps.push(AbMap::new(groups[a].clone(), groups[b].clone(), mat)?);
    }
    Ok(Diagram::new(p, groups, maps)?)
}

fn complex_diagram(at: &At) -> IoResult<ComplexDiagram> {
    at.expect_kind("complex-diagram")?;
    let p = poset(&at.field("poset")?)?;
    let complexes = per_object(at, "complexes", &p)?.iter().map(complex).collect::<IoResult<Vec<_>>>()?;
    let mut maps = Vec::new();
    for (k, m) in per_arrow(at, &p)?.iter().enumerate() {
        let (a, b) = p.arrows()[k];
        let (src, tgt) = (&complexes[a], &complexes[b]);
        let comps = m.array()?;
        let degrees: Vec<i64> = if src.is_empty() { Vec::new() } else { (src.lo()..=src.hi()).collect() };
        if comps.len() != degrees.len() {
            return Err(m.err(format!("expected one matrix per source degree, {} in all", degrees.len())));
        }
        let mats = degrees
            .iter()
            .zip(&comps)
            .map(|(&n, c)| c.matrix(tgt.rank(n), src.rank(n)))
            .collect::<IoResult<Vec<_>>>()?;
        let f = ChainMap::new(src.clone(), tgt.clone(), mats).map_err(|e| match e {
            Error::NotChainMap { degree, .. } => Error::NotChainMap { degree, context: arrow_key(&p, k) },
            e => e,
        })?;
        maps.push(f);
    }
    Ok(Diagram::new(p, complexes, maps)?)
}

fn bicomplex(at: &At) -> IoResult<Bicomplex> {
    at.expect_kind("bicomplex")?;
    let mut cells = BTreeMap::new();
    for c in at.field("cells")?.array()? {
        let s = c.field("s")?.usize()?;
        let t = c.field("t")?.i64()?;
        if cells.insert((s, t), group(&c.field("group")?)?).is_some() {
            return Err(c.err(format!("cell ({s},{t}) listed twice")));
        }
    }
    let rank = |c: (usize, i64)| cells.get(&c).map_or(0, FgAbGroup::generators);
    let read = |field: &str, step: fn((usize, i64)) -> (usize, i64)| -> IoResult<BTreeMap<(usize, i64), IntMatrix>> {
        let mut out = BTreeMap::new();
        for e in at.field(field)?.array()? {
            let c = (e.field("s")?.usize()?, e.field("t")?.i64()?);
            let m = e.field("matrix")?.matrix(rank(step(c)), rank(c))?;
            if out.insert(c, m).is_some() {
                return Err(e.err(format!("{field} at ({},{}) listed twice", c.0, c.1)));
            }
        }
        Ok(out)
    };
    let d = read("d", |(s, t)| (s + 1, t))?;
    let delta = read("delta", |(s, t)| (s, t + 1))?;
    Ok(Bicomplex::new(cells, d, delta)?)
}

fn promodule(at: &At) -> IoResult<ProModule> {
    let d = diagram(&at.field("diagram")?)?;
    let f = at.field("flags")?;
    let flags = ProFlags { levelwise_free: f.field("levelwise_free")?.bool()?, cofiltered: f.field("cofiltered")?.bool()? };
    ProModule::with_flags(d, flags).map_err(|e| f.err(e.to_string()))
}

fn int(x: &Integer) -> Value {
    serde_json::to_value(x).expect("integers serialize")
}

fn rows_value(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(int).collect())).collect())
}

pub fn group_value(g: &FgAbGroup) -> Value {
    let rels: Vec<Value> = g
        .relations()
        .columns()
        .iter()
        .map(|c| Value::Array((0..g.generators()).map(|i| int(&c.get(i))).collect()))
        .collect();
    json!({ "generators": g.generators(), "relations": rels })
}

fn map_value(f: &AbMap) -> Value {
    json!({ "source": group_value(f.source()), "target": group_value(f.target()), "matrix": rows_value(f.matrix()) })
}

fn complex_value(c: &ChainComplex) -> Value {
    let (lo, hi) = if c.is_empty() { (0, -1) } else { (c.lo(), c.hi()) };
    json!({
        "lo": lo,
        "hi": hi,
        "groups": c.groups().iter().map(group_value).collect::<Vec<_>>(),
        "differentials": c.differentials().iter().map(|d| rows_value(d.matrix())).collect::<Vec<_>>(),
    })
}

fn poset_value(p: &FinitePoset) -> Value {
    let arrows: Vec<Value> = p.arrows().iter().map(|&(a, b)| json!([p.label(a), p.label(b)])).collect();
    json!({ "objects": p.labels(), "arrows": arrows })
}

fn diagram_value(d: &GroupDiagram) -> Value {
    let p = d.poset();
    let groups: Map<String, Value> = (0..p.len()).map(|k| (p.label(k).to_string(), group_value(d.object(k)))).collect();
    let maps: Map<String, Value> =
        d.generating().iter().enumerate().map(|(k, f)| (arrow_key(p, k), rows_value(f.matrix()))).collect();
    json!({ "poset": poset_value(p), "groups": groups, "maps": maps })
}

fn complex_diagram_value(d: &ComplexDiagram) -> Value {
    let p = d.poset();
    let complexes: Map<String, Value> =
        (0..p.len()).map(|k| (p.label(k).to_string(), complex_value(d.object(k)))).collect();
    let maps: Map<String, Value> = d
        .generating()
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let src = f.source();
            let comps: Vec<Value> =
                if src.is_empty() { Vec::new() } else { (src.lo()..=src.hi()).map(|n| rows_value(&f.matrix(n))).collect() };
            (arrow_key(p, k), Value::Array(comps))
        })
        .collect();
    json!({ "poset": poset_value(p), "complexes": complexes, "maps": maps })
}

fn bicomplex_value(b: &Bicomplex) -> Value {
    let cells: Vec<Value> = b.cells().iter().map(|(&(s, t), g)| json!({ "s": s, "t": t, "group": group_value(g) })).collect();
    let maps = |m: &BTreeMap<(usize, i64), AbMap>| -> Vec<Value> {
        m.iter().map(|(&(s, t), f)| json!({ "s": s, "t": t, "matrix": rows_value(f.matrix()) })).collect()
    };
    json!({ "cells": cells, "d": maps(b.d_maps()), "delta": maps(b.delta_maps()) })
}

fn flags_value(f: ProFlags) -> Value {
    json!({ "levelwise_free": f.levelwise_free, "cofiltered": f.cofiltered })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Gen;

    fn roundtrip(m: &Manifest) {
        let text = m.to_json();
        let back = Manifest::parse(&text).unwrap();
        assert_eq!(back.to_json(), text, "{}", m.kind());
    }

    #[test]
    fn every_kind_roundtrips() {
        let mut g = Gen::new(3);
        let d = g.group_diagram();
        let p = d.poset().clone();
        let f = AbMap::new(FgAbGroup::free(2), FgAbGroup::cyclic(6), IntMatrix::from_rows(&[vec![1, 4]])).unwrap();
        let cd = g.complex_diagram_on(&p, 3, 2);
        let items = vec![
            Manifest::Group(g.group()),
            Manifest::Map(f),
            Manifest::Complex(g.free_complex()),
            Manifest::Poset(p.clone()),
            Manifest::Diagram(d.clone()),
            Manifest::ComplexDiagram(cd),
            Manifest::Bicomplex(g.bicomplex(3, 3)),
            Manifest::ProModule(ProModule::new(d)),
        ];
        for m in &items {
            roundtrip(m);
        }
    }

    #[test]
    fn keys_are_sorted() {
        let text = Manifest::Group(FgAbGroup::cyclic(4)).to_json();
        let gen = text.find("\"generators\"").unwrap();
        let kind = text.find("\"kind\"").unwrap();
        let rel = text.find("\"relations\"").unwrap();
        assert!(gen < kind && kind < rel);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match Manifest::parse("{\n  \"kind\": \"group\",\n  \"generators\": ,\n}") {
            Err(IoError::Syntax { line, column, .. }) => assert_eq!((line, column), (3, 17)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invariant_failures() {
        let bad_complex = r#"{"kind":"complex","version":1,"lo":0,"hi":2,
            "groups":[{"generators":1,"relations":[]},{"generators":1,"relations":[]},{"generators":1,"relations":[]}],
            "differentials":[[[1]],[[1]]]}"#;
        match Manifest::parse(bad_complex) {
            Err(IoError::Engine(Error::DifferentialSquareNonzero { degree: 1 })) => {}
            other => panic!("{other:?}"),
        }
        let square = r#"{"kind":"diagram","version":1,
            "poset":{"objects":["a","b","c","d"],"arrows":[["a","b"],["a","c"],["b","d"],["c","d"]]},
            "groups":{"a":{"generators":1,"relations":[]},"b":{"generators":1,"relations":[]},
                      "c":{"generators":1,"relations":[]},"d":{"generators":1,"relations":[]}},
            "maps":{"a->b":[[1]],"a->c":[[1]],"b->d":[[2]],"c->d":[[1]]}}"#;
        match Manifest::parse(square) {
            Err(IoError::Engine(Error::Functoriality { .. })) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            Manifest::parse(r#"{"kind":"sheaf","version":1}"#),
            Err(IoError::Schema { .. })
        ));
    }

    #[test]
    fn group_notation() {
        assert_eq!(parse_group("Z^2 + Z/3 + Z/6").unwrap().to_string(), "Z^2 + Z/3 + Z/6");
        assert_eq!(parse_group("Z/2 + Z/3").unwrap().to_string(), "Z/6");
        assert!(parse_group("0").unwrap().is_trivial());
        assert!(parse_group("Q").is_err());
        assert_eq!(parse_group(r#"{"generators":1,"relations":[[5]]}"#).unwrap().to_string(), "Z/5");
    }
}
