//! Text formats: instances, matchings, certificates, witnesses and DIMACS CNF.
//!
//! All formats are line based. In instance, matching and certificate files a
//! token starting with `#` ends the line, so `#` may still appear inside an
//! identifier.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use popmax_core::hardness::{CnfFormula, HardnessError};
use popmax_core::{
    DualCertificate, Edge, Instance, InstanceBuilder, InstanceError, Matching, MatchingError, Node,
    Side, Witness, WitnessKind,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Formula(#[from] HardnessError),
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

/// Tokens of one line with their 1-based columns, comment stripped.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    let end = out
        .iter()
        .position(|(_, t)| t.starts_with('#'))
        .unwrap_or(out.len());
    out.truncate(end);
    out.into_iter().map(|(c, t)| (c + 1, t)).collect()
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut sides: Vec<(Side, String)> = Vec::new();
    let mut prefs: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut costs: Vec<(String, String, i64)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let toks = tokens(line);
        let Some(&(col, kw)) = toks.first() else {
            continue;
        };
        match kw {
            "side" => {
                let side = match toks.get(1) {
                    Some((_, "A")) => Side::A,
                    Some((_, "B")) => Side::B,
                    Some(&(c, _)) => return Err(syntax(ln, c, "expected `A` or `B`")),
                    None => return Err(syntax(ln, col, "missing side")),
                };
                sides.extend(toks[2..].iter().map(|(_, t)| (side, t.to_string())));
            }
            "pref" => {
                let Some(&(c, first)) = toks.get(1) else {
                    return Err(syntax(ln, col, "missing node"));
                };
                let (name, rest) = if let Some(n) = first.strip_suffix(':') {
                    (n, &toks[2..])
                } else if toks.get(2).map(|t| t.1) == Some(":") {
                    (first, &toks[3..])
                } else {
                    return Err(syntax(ln, c + first.len(), "expected `:`"));
                };
                if name.is_empty() {
                    return Err(syntax(ln, c, "missing node"));
                }
                prefs.push((ln, name.into(), rest.iter().map(|t| t.1.into()).collect()));
            }
            "cost" => {
                if toks.len() != 4 {
                    return Err(syntax(ln, col, "expected `cost <a> <b> <integer>`"));
                }
                let (c, v) = toks[3];
                let v: i64 = v.parse().map_err(|_| syntax(ln, c, "expected an integer"))?;
                costs.push((toks[1].1.into(), toks[2].1.into(), v));
            }
            _ => return Err(syntax(ln, col, format!("unknown keyword `{kw}`"))),
        }
    }
    let mut b = InstanceBuilder::new();
    for (side, name) in &sides {
        b.add_node(*side, name)?;
    }
    for (_, name, list) in &prefs {
        b.set_prefs(name, list)?;
    }
    for (x, y, c) in &costs {
        b.set_cost(x, y, *c);
    }
    Ok(b.build()?)
}

/// Canonical text: sides, then one `pref` line per node in declaration
/// order, then non-zero costs in edge order.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut s = String::new();
    for (side, names) in [("A", inst.names_a()), ("B", inst.names_b())] {
        s.push_str("side ");
        s.push_str(side);
        for n in names {
            s.push(' ');
            s.push_str(n);
        }
        s.push('\n');
    }
    for a in 0..inst.num_a() {
        let _ = write!(s, "pref {}:", inst.name_a(a));
        for &b in inst.prefs_a(a) {
            let _ = write!(s, " {}", inst.name_b(b));
        }
        s.push('\n');
    }
    for b in 0..inst.num_b() {
        let _ = write!(s, "pref {}:", inst.name_b(b));
        for &a in inst.prefs_b(b) {
            let _ = write!(s, " {}", inst.name_a(a));
        }
        s.push('\n');
    }
    for (e, &c) in inst.edges().iter().zip(inst.costs()) {
        if c != 0 {
            let _ = writeln!(s, "cost {} {} {}", inst.name_a(e.a), inst.name_b(e.b), c);
        }
    }
    s
}

fn lookup(inst: &Instance, ln: usize, col: usize, name: &str, side: Side) -> Result<usize, FormatError> {
    match inst.lookup(name) {
        Some(n) if n.side() == side => Ok(n.index()),
        Some(_) => Err(syntax(ln, col, format!("`{name}` is on the wrong side"))),
        None => Err(syntax(ln, col, format!("unknown node `{name}`"))),
    }
}

/// One `<a> <b>` pair per line.
pub fn parse_matching(inst: &Instance, text: &str) -> Result<Matching, FormatError> {
    let mut edges = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let toks = tokens(line);
        match toks.as_slice() {
            [] => {}
            [(ca, a), (cb, b)] => {
                let a = lookup(inst, ln, *ca, a, Side::A)?;
                let b = lookup(inst, ln, *cb, b, Side::B)?;
                edges.push(Edge::new(a, b));
            }
            [(c, _), ..] => return Err(syntax(ln, *c, "expected `<a> <b>`")),
        }
    }
    Ok(Matching::from_edges(inst, &edges)?)
}

/// Pairs sorted by name.
pub fn matching_pairs(inst: &Instance, m: &Matching) -> Vec<(String, String)> {
    let mut pairs: Vec<(String, String)> = m
        .edges()
        .map(|e| (inst.name_a(e.a).to_string(), inst.name_b(e.b).to_string()))
        .collect();
    pairs.sort();
    pairs
}

pub fn serialize_matching(inst: &Instance, m: &Matching) -> String {
    let mut s = String::new();
    for (a, b) in matching_pairs(inst, m) {
        let _ = writeln!(s, "{a} {b}");
    }
    s
}

pub fn parse_certificate(inst: &Instance, text: &str) -> Result<DualCertificate, FormatError> {
    let mut alpha = BTreeMap::new();
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let toks = tokens(line);
        match toks.as_slice() {
            [] => {}
            [(_, "alpha"), (cn, name), (cv, v)] => {
                let node = inst
                    .lookup(name)
                    .ok_or_else(|| syntax(ln, *cn, format!("unknown node `{name}`")))?;
                let v: i64 = v.parse().map_err(|_| syntax(ln, *cv, "expected an integer"))?;
                if alpha.insert(node, v).is_some() {
                    return Err(syntax(ln, *cn, format!("`{name}` given twice")));
                }
            }
            [(c, _), ..] => return Err(syntax(ln, *c, "expected `alpha <node> <integer>`")),
        }
    }
    Ok(DualCertificate::new(alpha))
}

/// `alpha` lines, A nodes then B nodes, in declaration order.
pub fn serialize_certificate(inst: &Instance, cert: &DualCertificate) -> String {
    let mut s = String::new();
    for (&node, v) in cert.alpha() {
        let _ = writeln!(s, "alpha {} {}", inst.name(node), v);
    }
    s
}

/// Header `cycle: …` or `path: …` with matched pairs as `(b,a)` and the
/// weight, then the edges in traversal order.
pub fn format_witness(inst: &Instance, w: &Witness) -> String {
    let mut s = String::from(match w.kind {
        WitnessKind::Cycle => "cycle:",
        WitnessKind::Path => "path:",
    });
    let mut i = 0;
    while i < w.nodes.len() {
        match (w.nodes[i], w.nodes.get(i + 1)) {
            (Node::B(b), Some(&Node::A(a))) => {
                let _ = write!(s, " ({},{})", inst.name_b(b), inst.name_a(a));
                i += 2;
            }
            (n, _) => {
                let _ = write!(s, " {}", inst.name(n));
                i += 1;
            }
        }
    }
    let _ = writeln!(s, " wt={}", w.weight);
    for e in w.edges() {
        let _ = writeln!(s, "{} {}", inst.name_a(e.a), inst.name_b(e.b));
    }
    s
}

/// DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>` header, and
/// clauses terminated by `0` (possibly spanning lines).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur: Vec<i32> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let t = line.trim_start();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        let col0 = line.len() - t.len() + 1;
        if t.starts_with('p') {
            let f: Vec<&str> = t.split_whitespace().collect();
            if header.is_some() || f.len() != 4 || f[1] != "cnf" {
                return Err(syntax(ln, col0, "expected `p cnf <vars> <clauses>`"));
            }
            let v = f[2].parse().map_err(|_| syntax(ln, col0, "bad variable count"))?;
            let c = f[3].parse().map_err(|_| syntax(ln, col0, "bad clause count"))?;
            header = Some((v, c));
            continue;
        }
        if header.is_none() {
            return Err(syntax(ln, col0, "clause before `p cnf` header"));
        }
        for (col, tok) in tokens(line) {
            let l: i32 = tok.parse().map_err(|_| syntax(ln, col, "expected a literal"))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut cur));
            } else {
                cur.push(l);
            }
        }
    }
    let Some((nv, nc)) = header else {
        return Err(syntax(1, 1, "missing `p cnf` header"));
    };
    if !cur.is_empty() {
        clauses.push(cur);
    }
    if clauses.len() != nc {
        return Err(syntax(
            text.lines().count().max(1),
            1,
            format!("header announces {nc} clauses, found {}", clauses.len()),
        ));
    }
    Ok(CnfFormula::new(nv, clauses)?)
}

pub fn serialize_dimacs(psi: &CnfFormula) -> String {
    let mut s = format!("p cnf {} {}\n", psi.num_vars(), psi.clauses().len());
    for c in psi.clauses() {
        for l in c {
            let _ = write!(s, "{l} ");
        }
        s.push_str("0\n");
    }
    s
}
