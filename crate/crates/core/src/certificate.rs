//! Dual certificates of popularity among maximum matchings.
//!
//! For a maximum matching `M` with unmatched nodes `U`, a certificate gives
//! every matched node an even integer `α`. Writing `n0' = |M|`, it must
//! satisfy:
//!
//! - (F) `α_a + α_b >= wt_M(a, b)` on every edge outside `M`, where an
//!   unmatched A node counts as `−2(n0'−1)` and an unmatched B node as 0;
//! - (CS) `α_a + α_b = 0` on every edge of `M`;
//! - (Z) `Σ α = 0`;
//! - (R) `α_a ∈ {0, −2, …, −2(n0'−1)}` and `α_b ∈ {0, 2, …, 2(n0'−1)}`;
//! - (P1) `α_a = 0` for every A node adjacent to an unmatched B node;
//! - (P2) `α_b = 2(n0'−1)` for every B node adjacent to an unmatched A node.
//!
//! By (CS) a certificate is the same thing as a *level* `L = −α_a / 2` per
//! matched pair; (F) then reads `L(M(b)) >= L(a) + wt_M(a, b) / 2`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::gstar::{build_gstar, levels, project, GStarError, GStarInstance};
use crate::instance::{Edge, Instance, Node, Side};
use crate::matching::{is_maximum, wt_unchecked, Matching};
use crate::mincost::min_cost_stable;
use crate::popularity::{verify_popular_max, PopularityError};
use crate::stable::gale_shapley;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("matching is not maximum")]
    NotMaximum,
    #[error("matching does not belong to this instance")]
    SizeMismatch,
    #[error("certificate domain differs from the matched nodes at {0:?}")]
    DomainMismatch(Node),
    #[error("certificate rejected ({} violation(s))", .0.len())]
    Rejected(Vec<Violation>),
    #[error("no level assignment satisfies the boundary conditions")]
    Unanchored,
    #[error("matching is not stable in G*")]
    NotStable,
    #[error("matching is not a popular max-matching")]
    NotPopularMax,
    #[error("no stable matching of G* projects to the matching")]
    NoPreimage,
}

/// One violated condition. Edges and nodes are source-instance indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    Feasibility { edge: Edge, sum: i64, wt: i64 },
    Slackness { edge: Edge, sum: i64 },
    Sum(i64),
    Range { node: Node, value: i64 },
    P1 { node: Node, value: i64 },
    P2 { node: Node, value: i64 },
}

impl Violation {
    /// Short tag of the condition: `F`, `CS`, `Z`, `R`, `P1` or `P2`.
    pub fn tag(&self) -> &'static str {
        match self {
            Violation::Feasibility { .. } => "F",
            Violation::Slackness { .. } => "CS",
            Violation::Sum(_) => "Z",
            Violation::Range { .. } => "R",
            Violation::P1 { .. } => "P1",
            Violation::P2 { .. } => "P2",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Feasibility { edge, sum, wt } => {
                write!(f, "F at {edge}: {sum} < {wt}")
            }
            Violation::Slackness { edge, sum } => write!(f, "CS at {edge}: {sum} != 0"),
            Violation::Sum(s) => write!(f, "Z: sum is {s}"),
            Violation::Range { node, value } => write!(f, "R at {node:?}: {value}"),
            Violation::P1 { node, value } => write!(f, "P1 at {node:?}: {value} != 0"),
            Violation::P2 { node, value } => write!(f, "P2 at {node:?}: {value}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualCertificate {
    alpha: BTreeMap<Node, i64>,
    n0_prime: usize,
}

impl DualCertificate {
    /// `n0'` is taken to be the number of A nodes in the domain.
    pub fn new(alpha: BTreeMap<Node, i64>) -> Self {
        let n0_prime = alpha.keys().filter(|n| n.side() == Side::A).count();
        DualCertificate { alpha, n0_prime }
    }

    pub fn alpha(&self) -> &BTreeMap<Node, i64> {
        &self.alpha
    }

    pub fn get(&self, node: Node) -> Option<i64> {
        self.alpha.get(&node).copied()
    }

    pub fn n0_prime(&self) -> usize {
        self.n0_prime
    }

    /// Certificate whose pair `(a, M(a))` sits at `level[a]`.
    fn from_levels(m: &Matching, level: &[usize]) -> Self {
        let mut alpha = BTreeMap::new();
        for e in m.edges() {
            let v = 2 * level[e.a] as i64;
            alpha.insert(Node::A(e.a), -v);
            alpha.insert(Node::B(e.b), v);
        }
        DualCertificate::new(alpha)
    }
}

/// Checks the six conditions and lists every violation, in the order F, CS,
/// Z, R, P1, P2.
pub fn verify_certificate(
    inst: &Instance,
    m: &Matching,
    cert: &DualCertificate,
) -> Result<Vec<Violation>, CertificateError> {
    if !m.fits(inst) {
        return Err(CertificateError::SizeMismatch);
    }
    if !is_maximum(inst, m) {
        return Err(CertificateError::NotMaximum);
    }
    for &node in cert.alpha.keys() {
        let inside = match node {
            Node::A(a) => a < inst.num_a(),
            Node::B(b) => b < inst.num_b(),
        };
        if !inside || !m.is_matched(node) {
            return Err(CertificateError::DomainMismatch(node));
        }
    }
    for e in m.edges() {
        for node in [Node::A(e.a), Node::B(e.b)] {
            if !cert.alpha.contains_key(&node) {
                return Err(CertificateError::DomainMismatch(node));
            }
        }
    }

    let hi = 2 * (m.len() as i64 - 1);
    // an unmatched A node counts as -hi and an unmatched B node as 0; at
    // wt = 0 this is (P1)/(P2), so only blocking edges are checked there
    let al = |n: Node| match (cert.alpha.get(&n), n) {
        (Some(&v), _) => v,
        (None, Node::A(_)) => -hi,
        (None, Node::B(_)) => 0,
    };
    let mut out = Vec::new();
    for &e in inst.edges() {
        if m.contains(e) {
            continue;
        }
        let sum = al(Node::A(e.a)) + al(Node::B(e.b));
        let wt = wt_unchecked(inst, m, e);
        let inner = m.is_matched(Node::A(e.a)) && m.is_matched(Node::B(e.b));
        if sum < wt && (inner || wt > 0) {
            out.push(Violation::Feasibility { edge: e, sum, wt });
        }
    }
    for e in m.edges() {
        let sum = al(Node::A(e.a)) + al(Node::B(e.b));
        if sum != 0 {
            out.push(Violation::Slackness { edge: e, sum });
        }
    }
    let total: i64 = cert.alpha.values().sum();
    if total != 0 {
        out.push(Violation::Sum(total));
    }
    for (&node, &value) in &cert.alpha {
        let v = if node.side() == Side::A { -value } else { value };
        if v % 2 != 0 || v < 0 || v > hi {
            out.push(Violation::Range { node, value });
        }
    }
    for a in nbr_unmatched(inst, m, Side::B) {
        let value = al(Node::A(a));
        if value != 0 {
            out.push(Violation::P1 { node: Node::A(a), value });
        }
    }
    for b in nbr_unmatched(inst, m, Side::A) {
        let value = al(Node::B(b));
        if value != hi {
            out.push(Violation::P2 { node: Node::B(b), value });
        }
    }
    Ok(out)
}

/// Indices of the nodes adjacent to an unmatched node of `side`, ascending.
/// In a maximum matching all of them are matched.
fn nbr_unmatched(inst: &Instance, m: &Matching, side: Side) -> Vec<usize> {
    let (n_self, n_other) = match side {
        Side::A => (inst.num_a(), inst.num_b()),
        Side::B => (inst.num_b(), inst.num_a()),
    };
    let mut hit = vec![false; n_other];
    for u in 0..n_self {
        let node = match side {
            Side::A => Node::A(u),
            Side::B => Node::B(u),
        };
        if !m.is_matched(node) {
            for v in inst.neighbours(node) {
                hit[v.index()] = true;
            }
        }
    }
    (0..n_other).filter(|&v| hit[v]).collect()
}

/// Pair levels `−α_a / 2`, indexed by A node; unmatched A nodes get 0.
/// Assumes a verified certificate.
pub(crate) fn pair_levels(inst: &Instance, m: &Matching, cert: &DualCertificate) -> Vec<usize> {
    (0..inst.num_a())
        .map(|a| match cert.get(Node::A(a)) {
            Some(v) if m.mate_a(a).is_some() => (-v / 2).max(0) as usize,
            _ => 0,
        })
        .collect()
}

/// Least pair levels `>= floor` that satisfy (F), with every pair containing
/// a neighbour of an unmatched A node pinned at `top`.
///
/// `None` when some level would exceed `top`, or when a pair that (P1) keeps
/// at level 0 would have to rise.
pub(crate) fn raise_levels(
    inst: &Instance,
    m: &Matching,
    floor: Vec<usize>,
    top: usize,
) -> Option<Vec<usize>> {
    let mut level = floor;
    for b in nbr_unmatched(inst, m, Side::A) {
        let a = m.mate_b(b)?;
        level[a] = level[a].max(top);
    }
    // (a, b) with both ends matched and outside M demands
    // L(M(b)) >= L(a) + wt / 2
    let rules: Vec<(usize, usize, i64)> = inst
        .edges()
        .iter()
        .filter(|&&e| !m.contains(e))
        .filter_map(|&e| {
            m.mate_a(e.a)?;
            let partner = m.mate_b(e.b)?;
            Some((e.a, partner, wt_unchecked(inst, m, e) / 2))
        })
        .collect();
    loop {
        let mut changed = false;
        for &(a, partner, step) in &rules {
            let need = level[a] as i64 + step;
            if need > level[partner] as i64 {
                if need > top as i64 {
                    return None;
                }
                level[partner] = need as usize;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for a in nbr_unmatched(inst, m, Side::B) {
        if level[a] != 0 {
            return None;
        }
    }
    Some(level)
}

/// Reads a certificate off a stable matching of `G*`.
///
/// Pair levels come from the copy subscripts of `s`. Unused levels are
/// squeezed out so that they fit `0 … n0'−1`, then raised as little as
/// needed to put the neighbours of unmatched A nodes on the top level.
pub fn extract_certificate(
    gs: &GStarInstance,
    s: &Matching,
) -> Result<DualCertificate, CertificateError> {
    let lp = match levels(gs, s) {
        Ok(lp) => lp,
        Err(GStarError::SizeMismatch) => return Err(CertificateError::SizeMismatch),
        Err(_) => return Err(CertificateError::NotStable),
    };
    let inst = gs.source();
    let m = project(gs, s).map_err(|_| CertificateError::NotStable)?;
    if m.is_empty() {
        return Ok(DualCertificate::default());
    }
    let mut used: Vec<usize> = m.edges().map(|e| lp.level_a[e.a]).collect();
    used.sort_unstable();
    used.dedup();
    let mut floor = vec![0; inst.num_a()];
    for e in m.edges() {
        floor[e.a] = used.binary_search(&lp.level_a[e.a]).expect("level in use");
    }
    let level = raise_levels(inst, &m, floor, m.len() - 1).ok_or(CertificateError::Unanchored)?;
    Ok(DualCertificate::from_levels(&m, &level))
}

/// A certificate for a popular max-matching `m`.
///
/// Takes the A-proposing stable matching of `G*` when it already projects
/// to `m`. Otherwise solves a min-cost stable matching problem on `G*` where
/// image edges outside the copies of `m` cost 1: a cost-0 optimum is a
/// stable preimage of `m`.
pub fn certify_popular_max(
    inst: &Instance,
    m: &Matching,
) -> Result<DualCertificate, CertificateError> {
    match verify_popular_max(inst, m) {
        Ok(v) if v.popular => {}
        Ok(_) => return Err(CertificateError::NotPopularMax),
        Err(PopularityError::NotMaximum(_)) => return Err(CertificateError::NotMaximum),
        Err(PopularityError::SizeMismatch) => return Err(CertificateError::SizeMismatch),
    }
    let gs = build_gstar(inst);
    let s = gale_shapley(gs.inner(), Side::A);
    if project(&gs, &s).as_ref() == Ok(m) {
        return extract_certificate(&gs, &s);
    }

    let n0 = gs.n0();
    let gs_ref = &gs;
    let penalties = inst
        .edges()
        .iter()
        .filter(|&&e| !m.contains(e))
        .flat_map(|&e| (0..n0).map(move |i| (Edge::new(gs_ref.copy(e.a, i), gs_ref.image(e.b)), 1)))
        .collect::<Vec<_>>();
    let search = gs
        .inner()
        .clone()
        .with_costs(penalties)
        .expect("penalised edges are image edges of G*");
    let s = min_cost_stable(&search);
    if project(&gs, &s).as_ref() != Ok(m) {
        return Err(CertificateError::NoPreimage);
    }
    extract_certificate(&gs, &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn cert(inst: &Instance, vals: &[(&str, i64)]) -> DualCertificate {
        DualCertificate::new(
            vals.iter()
                .map(|(n, v)| (inst.lookup(n).unwrap(), *v))
                .collect(),
        )
    }

    #[test]
    fn verify_examples() {
        let i1 = i1();
        let mm = m(&i1, &[("a1", "b1"), ("a2", "b2")]);
        let good = cert(&i1, &[("a1", -2), ("a2", 0), ("b1", 2), ("b2", 0)]);
        assert_eq!(verify_certificate(&i1, &mm, &good).unwrap(), vec![]);

        let zero = cert(&i1, &[("a1", 0), ("a2", 0), ("b1", 0), ("b2", 0)]);
        assert_eq!(
            verify_certificate(&i1, &mm, &zero).unwrap(),
            vec![Violation::Feasibility {
                edge: Edge::new(1, 0),
                sum: 0,
                wt: 2
            }]
        );

        let i0 = i0();
        let z = cert(&i0, &[("a", 0), ("b", 0)]);
        assert!(verify_certificate(&i0, &m(&i0, &[("a", "b")]), &z)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn blocking_edge_at_unmatched_node_fails_feasibility() {
        let i = build(&[("a1", &["b1"]), ("a2", &["b1"])], &[("b1", &["a1", "a2"])]);
        let mm = m(&i, &[("a2", "b1")]);
        let z = cert(&i, &[("a2", 0), ("b1", 0)]);
        assert_eq!(
            verify_certificate(&i, &mm, &z).unwrap(),
            vec![Violation::Feasibility {
                edge: Edge::new(0, 0),
                sum: 0,
                wt: 2
            }]
        );
    }

    #[test]
    fn verify_errors_and_each_condition() {
        let i1 = i1();
        let mm = m(&i1, &[("a1", "b1"), ("a2", "b2")]);
        let short = cert(&i1, &[("a1", -2), ("b1", 2)]);
        assert_eq!(
            verify_certificate(&i1, &mm, &short),
            Err(CertificateError::DomainMismatch(Node::A(1)))
        );
        assert_eq!(
            verify_certificate(&i1, &m(&i1, &[("a2", "b1")]), &short),
            Err(CertificateError::NotMaximum)
        );

        let odd = cert(&i1, &[("a1", -3), ("a2", 1), ("b1", 3), ("b2", -1)]);
        let tags: Vec<&str> = verify_certificate(&i1, &mm, &odd)
            .unwrap()
            .iter()
            .map(Violation::tag)
            .collect();
        assert!(tags.contains(&"R"));

        let slack = cert(&i1, &[("a1", -2), ("a2", 0), ("b1", 2), ("b2", 2)]);
        let tags: Vec<&str> = verify_certificate(&i1, &mm, &slack)
            .unwrap()
            .iter()
            .map(Violation::tag)
            .collect();
        assert_eq!(tags, ["CS", "Z"]);

        // a3 unmatched next to b1 pins b1 at 2(n0'−1) = 0; make it 2 instead
        let i3 = i3();
        let one = m(&i3, &[("a1", "b1")]);
        let tags: Vec<&str> = verify_certificate(&i3, &one, &cert(&i3, &[("a1", -2), ("b1", 2)]))
            .unwrap()
            .iter()
            .map(Violation::tag)
            .collect();
        assert_eq!(tags, ["R", "R", "P2"]);
    }

    #[test]
    fn p1_flagged() {
        // b3 is unmatched and adjacent to a1
        let inst = build(
            &[("a1", &["b1", "b3"]), ("a2", &["b2"])],
            &[("b1", &["a1"]), ("b2", &["a2"]), ("b3", &["a1"])],
        );
        let mm = m(&inst, &[("a1", "b1"), ("a2", "b2")]);
        let c = cert(&inst, &[("a1", -2), ("b1", 2), ("a2", 0), ("b2", 0)]);
        assert_eq!(
            verify_certificate(&inst, &mm, &c).unwrap(),
            vec![Violation::P1 {
                node: Node::A(0),
                value: -2
            }]
        );
    }

    #[test]
    fn extract_examples() {
        let i0 = i0();
        let gs = build_gstar(&i0);
        let c = extract_certificate(&gs, &gale_shapley(gs.inner(), Side::A)).unwrap();
        assert_eq!(c, cert(&i0, &[("a", 0), ("b", 0)]));

        let i1 = i1();
        let gs = build_gstar(&i1);
        let s = Matching::from_edges(
            gs.inner(),
            &[
                Edge::new(gs.copy(0, 1), gs.image(0)),
                Edge::new(gs.copy(1, 0), gs.image(1)),
                Edge::new(gs.copy(0, 0), gs.dummy(0, 1)),
                Edge::new(gs.copy(1, 1), gs.dummy(1, 1)),
            ],
        )
        .unwrap();
        let c = extract_certificate(&gs, &s).unwrap();
        assert_eq!(c, cert(&i1, &[("a1", -2), ("b1", 2), ("a2", 0), ("b2", 0)]));

        let i3 = i3();
        let gs = build_gstar(&i3);
        let c = extract_certificate(&gs, &gale_shapley(gs.inner(), Side::A)).unwrap();
        assert_eq!(c, cert(&i3, &[("a1", 0), ("b1", 0)]));
        assert_eq!(c.n0_prime(), 1);

        assert_eq!(
            extract_certificate(&gs, &Matching::empty_for(gs.inner())),
            Err(CertificateError::NotStable)
        );
    }

    #[test]
    fn certify_examples() {
        let i0 = i0();
        let c = certify_popular_max(&i0, &m(&i0, &[("a", "b")])).unwrap();
        assert_eq!(c, cert(&i0, &[("a", 0), ("b", 0)]));

        let i2 = i2();
        for pairs in [
            [("a1", "b1"), ("a2", "b2")],
            [("a1", "b2"), ("a2", "b1")],
        ] {
            let mm = m(&i2, &pairs);
            let c = certify_popular_max(&i2, &mm).unwrap();
            assert!(verify_certificate(&i2, &mm, &c).unwrap().is_empty());
        }

        let i3 = i3();
        let c = certify_popular_max(&i3, &m(&i3, &[("a1", "b1")])).unwrap();
        assert_eq!(c, cert(&i3, &[("a1", 0), ("b1", 0)]));
        assert_eq!(
            certify_popular_max(&i3, &m(&i3, &[("a3", "b1")])),
            Err(CertificateError::NotPopularMax)
        );
    }
}
