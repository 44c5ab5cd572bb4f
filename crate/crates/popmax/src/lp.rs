//! CPLEX-LP text for the extended formulation over `G*`.
//!
//! Variables: `x(u,v)` for every edge of `G*`, named after the `G*` nodes, and
//! `y(a,b)` for every source edge. Rows:
//!
//! - `stab_<k>`: stability of the k-th image edge `(a_i, b~)`:
//!   `x(a_i,b~)` plus every edge `a_i` or `b~` prefers to it, `>= 1`;
//! - `deg_<u>`: at most one edge at every node of `G*`;
//! - `must_<u>`: exactly one edge at the nodes matched in every stable
//!   matching, `a_0 … a_{n0-2}` and all dummies;
//! - `link_<k>`: `y(a,b) - Σ_i x(a_i,b~) = 0` for the k-th source edge.
//!
//! The objective is `min Σ c(a,b) y(a,b)`. All variables are continuous and
//! non-negative; there is no `Generals` section.

use std::fmt::Write as _;

use popmax_core::{build_gstar, Edge, GStarNode, Instance, Node};

const TERMS_PER_LINE: usize = 8;

fn x_name(inner: &Instance, e: Edge) -> String {
    format!("x({},{})", inner.name_a(e.a), inner.name_b(e.b))
}

fn y_name(inst: &Instance, e: Edge) -> String {
    format!("y({},{})", inst.name_a(e.a), inst.name_b(e.b))
}

/// Writes ` name: t1 + t2 …` wrapping long rows.
fn row(out: &mut String, name: &str, terms: &[(i64, String)], tail: &str) {
    let _ = write!(out, " {name}:");
    for (k, (c, v)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if *c < 0 { '-' } else { '+' };
        let mag = c.unsigned_abs();
        if k == 0 && *c >= 0 {
            if mag == 1 {
                let _ = write!(out, " {v}");
            } else {
                let _ = write!(out, " {mag} {v}");
            }
        } else if mag == 1 {
            let _ = write!(out, " {sign} {v}");
        } else {
            let _ = write!(out, " {sign} {mag} {v}");
        }
    }
    if !tail.is_empty() {
        let _ = write!(out, " {tail}");
    }
    out.push('\n');
}

pub fn emit_lp(inst: &Instance) -> String {
    let gs = build_gstar(inst);
    let inner = gs.inner();
    let n0 = gs.n0();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ popular max-matching extended formulation: {} A nodes, {} B nodes, {} edges",
        inst.num_a(),
        inst.num_b(),
        inst.num_edges()
    );

    out.push_str("Minimize\n");
    let obj: Vec<(i64, String)> = inst
        .edges()
        .iter()
        .map(|&e| (inst.cost(e).unwrap_or(0), y_name(inst, e)))
        .collect();
    row(&mut out, "obj", &obj, "");

    out.push_str("Subject To\n");
    let mut k = 0;
    for &e in inner.edges() {
        if !matches!(gs.role(Node::B(e.b)), GStarNode::Image { .. }) {
            continue;
        }
        k += 1;
        let ra = inner.rank_a(e.a, e.b).expect("edge");
        let rb = inner.rank_b(e.b, e.a).expect("edge");
        let mut terms = vec![(1, x_name(inner, e))];
        terms.extend(
            inner.prefs_a(e.a)[..ra]
                .iter()
                .map(|&w| (1, x_name(inner, Edge::new(e.a, w)))),
        );
        terms.extend(
            inner.prefs_b(e.b)[..rb]
                .iter()
                .map(|&z| (1, x_name(inner, Edge::new(z, e.b)))),
        );
        row(&mut out, &format!("stab_{k}"), &terms, ">= 1");
    }

    let at = |node: Node| -> Vec<(i64, String)> {
        match node {
            Node::A(a) => inner
                .prefs_a(a)
                .iter()
                .map(|&b| (1, x_name(inner, Edge::new(a, b))))
                .collect(),
            Node::B(b) => inner
                .prefs_b(b)
                .iter()
                .map(|&a| (1, x_name(inner, Edge::new(a, b))))
                .collect(),
        }
    };
    let nodes: Vec<Node> = (0..inner.num_a())
        .map(Node::A)
        .chain((0..inner.num_b()).map(Node::B))
        .collect();
    for &u in &nodes {
        let terms = at(u);
        if !terms.is_empty() {
            row(&mut out, &format!("deg_{}", inner.name(u)), &terms, "<= 1");
        }
    }
    for &u in &nodes {
        let must = match gs.role(u) {
            GStarNode::Copy { level, .. } => level + 1 < n0,
            GStarNode::Dummy { .. } => true,
            GStarNode::Image { .. } => false,
        };
        if must {
            row(&mut out, &format!("must_{}", inner.name(u)), &at(u), "= 1");
        }
    }
    for (k, &e) in inst.edges().iter().enumerate() {
        let mut terms = vec![(1, y_name(inst, e))];
        terms.extend((0..n0).map(|i| (-1, x_name(inner, Edge::new(gs.copy(e.a, i), gs.image(e.b))))));
        row(&mut out, &format!("link_{}", k + 1), &terms, "= 0");
    }

    out.push_str("Bounds\n");
    for &e in inner.edges() {
        let _ = writeln!(out, " {} >= 0", x_name(inner, e));
    }
    for &e in inst.edges() {
        let _ = writeln!(out, " {} >= 0", y_name(inst, e));
    }
    out.push_str("End\n");
    out
}
