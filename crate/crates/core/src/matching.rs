//! Matchings, votes between matchings and the `wt_M` edge weights.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::instance::{Edge, Instance, Node};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("({}, {}) is not an edge", .0.a, .0.b)]
    NotAnEdge(Edge),
    #[error("node {0:?} is matched twice")]
    Conflict(Node),
    #[error("matching was built for a different instance")]
    SizeMismatch,
}

/// A set of node-disjoint edges, stored as a partner map on both sides.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    mate_a: Vec<Option<usize>>,
    mate_b: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(num_a: usize, num_b: usize) -> Self {
        Matching {
            mate_a: vec![None; num_a],
            mate_b: vec![None; num_b],
        }
    }

    pub fn empty_for(inst: &Instance) -> Self {
        Self::empty(inst.num_a(), inst.num_b())
    }

    pub fn from_edges(inst: &Instance, edges: &[Edge]) -> Result<Self, MatchingError> {
        let mut m = Self::empty_for(inst);
        for &e in edges {
            if !inst.has_edge(e.a, e.b) {
                return Err(MatchingError::NotAnEdge(e));
            }
            if m.mate_a[e.a].is_some() {
                return Err(MatchingError::Conflict(Node::A(e.a)));
            }
            if m.mate_b[e.b].is_some() {
                return Err(MatchingError::Conflict(Node::B(e.b)));
            }
            m.mate_a[e.a] = Some(e.b);
            m.mate_b[e.b] = Some(e.a);
        }
        Ok(m)
    }

    pub fn num_a(&self) -> usize {
        self.mate_a.len()
    }

    pub fn num_b(&self) -> usize {
        self.mate_b.len()
    }

    pub fn fits(&self, inst: &Instance) -> bool {
        self.num_a() == inst.num_a() && self.num_b() == inst.num_b()
    }

    pub fn mate_a(&self, a: usize) -> Option<usize> {
        self.mate_a[a]
    }

    pub fn mate_b(&self, b: usize) -> Option<usize> {
        self.mate_b[b]
    }

    pub fn mate(&self, node: Node) -> Option<Node> {
        match node {
            Node::A(a) => self.mate_a[a].map(Node::B),
            Node::B(b) => self.mate_b[b].map(Node::A),
        }
    }

    pub fn is_matched(&self, node: Node) -> bool {
        self.mate(node).is_some()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.mate_a.get(e.a).copied().flatten() == Some(e.b)
    }

    pub fn len(&self) -> usize {
        self.mate_a.iter().filter(|m| m.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Edges ordered by their A endpoint.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.mate_a
            .iter()
            .enumerate()
            .filter_map(|(a, b)| b.map(|b| Edge::new(a, b)))
    }

    pub fn to_edges(&self) -> Vec<Edge> {
        self.edges().collect()
    }

    /// Adds `(a, b)`, dropping whatever either endpoint was matched to.
    pub(crate) fn set(&mut self, a: usize, b: usize) {
        if let Some(old) = self.mate_a[a].take() {
            self.mate_b[old] = None;
        }
        if let Some(old) = self.mate_b[b].take() {
            self.mate_a[old] = None;
        }
        self.mate_a[a] = Some(b);
        self.mate_b[b] = Some(a);
    }

    pub(crate) fn unset_a(&mut self, a: usize) {
        if let Some(b) = self.mate_a[a].take() {
            self.mate_b[b] = None;
        }
    }

    /// `M ⊕ edges`. The result must again be a matching.
    pub fn symmetric_difference(
        &self,
        inst: &Instance,
        edges: &[Edge],
    ) -> Result<Matching, MatchingError> {
        let mut set: Vec<Edge> = self.to_edges();
        for &e in edges {
            if let Some(pos) = set.iter().position(|&x| x == e) {
                set.swap_remove(pos);
            } else {
                set.push(e);
            }
        }
        set.sort_unstable();
        Matching::from_edges(inst, &set)
    }
}

/// Outcome of a head-to-head vote between two matchings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VoteTally {
    /// Nodes preferring the first matching.
    pub phi_mn: usize,
    /// Nodes preferring the second matching.
    pub phi_nm: usize,
    pub delta: i64,
}

impl VoteTally {
    pub fn new(phi_mn: usize, phi_nm: usize) -> Self {
        VoteTally {
            phi_mn,
            phi_nm,
            delta: phi_mn as i64 - phi_nm as i64,
        }
    }
}

/// Counts the nodes preferring `m` to `n` and vice versa. Being matched beats
/// being unmatched; a node unmatched in both is indifferent.
pub fn compare(inst: &Instance, m: &Matching, n: &Matching) -> VoteTally {
    let mut for_m = 0;
    let mut for_n = 0;
    for a in 0..inst.num_a() {
        let (x, y) = (m.mate_a(a), n.mate_a(a));
        if inst.a_prefers(a, x, y) {
            for_m += 1;
        } else if inst.a_prefers(a, y, x) {
            for_n += 1;
        }
    }
    for b in 0..inst.num_b() {
        let (x, y) = (m.mate_b(b), n.mate_b(b));
        if inst.b_prefers(b, x, y) {
            for_m += 1;
        } else if inst.b_prefers(b, y, x) {
            for_n += 1;
        }
    }
    VoteTally::new(for_m, for_n)
}

/// `wt_M(e)`: +2 if `e` blocks `m`, −2 if both endpoints are matched and
/// prefer their partners to each other, 0 otherwise.
pub fn wt_edge(inst: &Instance, m: &Matching, e: Edge) -> Result<i64, MatchingError> {
    if !inst.has_edge(e.a, e.b) {
        return Err(MatchingError::NotAnEdge(e));
    }
    Ok(wt_unchecked(inst, m, e))
}

pub(crate) fn wt_unchecked(inst: &Instance, m: &Matching, e: Edge) -> i64 {
    if m.contains(e) {
        return 0;
    }
    let (ma, mb) = (m.mate_a(e.a), m.mate_b(e.b));
    let a_wants = inst.a_prefers(e.a, Some(e.b), ma);
    let b_wants = inst.b_prefers(e.b, Some(e.a), mb);
    if a_wants && b_wants {
        2
    } else if inst.a_prefers(e.a, ma, Some(e.b)) && inst.b_prefers(e.b, mb, Some(e.a)) {
        -2
    } else {
        0
    }
}

pub fn matching_cost(inst: &Instance, m: &Matching) -> i64 {
    m.edges().map(|e| inst.cost(e).unwrap_or(0)).sum()
}

/// An augmenting path with respect to `m`, as a node sequence from an
/// unmatched A node to an unmatched B node, if one exists.
///
/// Breadth-first from all unmatched A nodes at once, so the path is a
/// shortest one.
pub fn augmenting_path(inst: &Instance, m: &Matching) -> Option<Vec<Node>> {
    let na = inst.num_a();
    // parent of each B node in the BFS forest: the A node it was reached from
    let mut parent_b: Vec<Option<usize>> = vec![None; inst.num_b()];
    let mut seen_a = vec![false; na];
    let mut queue = VecDeque::new();
    for a in 0..na {
        if m.mate_a(a).is_none() {
            seen_a[a] = true;
            queue.push_back(a);
        }
    }
    while let Some(a) = queue.pop_front() {
        for &b in inst.prefs_a(a) {
            if parent_b[b].is_some() || m.mate_a(a) == Some(b) {
                continue;
            }
            parent_b[b] = Some(a);
            match m.mate_b(b) {
                None => {
                    let mut path = vec![Node::B(b)];
                    let mut cur_b = b;
                    loop {
                        let pa = parent_b[cur_b].unwrap();
                        path.push(Node::A(pa));
                        match m.mate_a(pa) {
                            Some(prev_b) => {
                                path.push(Node::B(prev_b));
                                cur_b = prev_b;
                            }
                            None => break,
                        }
                    }
                    path.reverse();
                    return Some(path);
                }
                Some(next_a) => {
                    if !seen_a[next_a] {
                        seen_a[next_a] = true;
                        queue.push_back(next_a);
                    }
                }
            }
        }
    }
    None
}

/// True iff no augmenting path exists.
pub fn is_maximum(inst: &Instance, m: &Matching) -> bool {
    augmenting_path(inst, m).is_none()
}

/// Edges of a node path, oriented A→B.
pub(crate) fn path_edges(path: &[Node]) -> Vec<Edge> {
    path.windows(2)
        .map(|w| match (w[0], w[1]) {
            (Node::A(a), Node::B(b)) | (Node::B(b), Node::A(a)) => Edge::new(a, b),
            _ => unreachable!("paths alternate sides"),
        })
        .collect()
}

/// Some maximum matching, by repeated augmentation from the empty matching.
pub fn maximum_matching(inst: &Instance) -> Matching {
    let mut m = Matching::empty_for(inst);
    while let Some(path) = augmenting_path(inst, &m) {
        m = m
            .symmetric_difference(inst, &path_edges(&path))
            .expect("augmenting along a path keeps a matching");
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn wt_examples() {
        let i1 = i1();
        let mm = m(&i1, &[("a1", "b1"), ("a2", "b2")]);
        assert_eq!(wt_edge(&i1, &mm, Edge::new(1, 0)), Ok(2));
        assert_eq!(wt_edge(&i1, &mm, Edge::new(0, 0)), Ok(0));

        let i2 = i2();
        let mm = m(&i2, &[("a1", "b1"), ("a2", "b2")]);
        // a1 prefers b1, b2 prefers a1: exactly one endpoint wants the edge
        assert_eq!(wt_edge(&i2, &mm, Edge::new(0, 1)), Ok(0));
        assert_eq!(
            wt_edge(&i2, &mm, Edge::new(5, 0)),
            Err(MatchingError::NotAnEdge(Edge::new(5, 0)))
        );
    }

    #[test]
    fn wt_minus_two_needs_both_matched() {
        let i1 = i1();
        // a2-b1 matched; (a2,b2): a2 prefers b1, b2 unmatched wants a2
        let mm = m(&i1, &[("a2", "b1")]);
        assert_eq!(wt_edge(&i1, &mm, Edge::new(1, 1)), Ok(0));
        let i2 = i2();
        let mm = m(&i2, &[("a1", "b2"), ("a2", "b1")]);
        // a1: b1 ≻ b2 so a1 wants b1; b1 has a2 (top) so not blocking
        assert_eq!(wt_edge(&i2, &mm, Edge::new(0, 0)), Ok(0));
        let i5 = i5();
        let mm = m(&i5, &[("a1", "b2"), ("a2", "b1")]);
        assert_eq!(wt_edge(&i5, &mm, Edge::new(0, 0)), Ok(-2));
    }

    #[test]
    fn compare_examples() {
        let i1 = i1();
        let mm = m(&i1, &[("a1", "b1"), ("a2", "b2")]);
        let nn = m(&i1, &[("a2", "b1")]);
        assert_eq!(compare(&i1, &mm, &mm), VoteTally::new(0, 0));
        assert_eq!(compare(&i1, &mm, &nn), VoteTally::new(2, 2));
        assert_eq!(compare(&i1, &mm, &nn).delta, 0);

        let i5 = i5();
        let mm = m(&i5, &[("a1", "b1"), ("a2", "b2")]);
        let nn = m(&i5, &[("a1", "b2"), ("a2", "b1")]);
        let t = compare(&i5, &mm, &nn);
        assert_eq!((t.phi_mn, t.phi_nm, t.delta), (0, 4, -4));
    }

    #[test]
    fn maximality() {
        let i0 = i0();
        assert!(is_maximum(&i0, &m(&i0, &[("a", "b")])));

        let i1 = i1();
        let path = augmenting_path(&i1, &m(&i1, &[("a2", "b1")])).unwrap();
        let names: Vec<&str> = path.iter().map(|&n| i1.name(n)).collect();
        assert_eq!(names, ["a1", "b1", "a2", "b2"]);

        let i3 = i3();
        assert!(is_maximum(&i3, &m(&i3, &[("a2", "b1")])));
        assert_eq!(maximum_matching(&i1).len(), 2);
    }

    #[test]
    fn costs() {
        let i2 = i2_costed();
        assert_eq!(matching_cost(&i2, &Matching::empty_for(&i2)), 0);
        assert_eq!(matching_cost(&i2, &m(&i2, &[("a1", "b1"), ("a2", "b2")])), 2);
        assert_eq!(matching_cost(&i2, &m(&i2, &[("a1", "b2"), ("a2", "b1")])), 0);
    }

    #[test]
    fn invalid_matchings() {
        let i1 = i1();
        assert_eq!(
            Matching::from_edges(&i1, &[Edge::new(0, 1)]),
            Err(MatchingError::NotAnEdge(Edge::new(0, 1)))
        );
        assert_eq!(
            Matching::from_edges(&i1, &[Edge::new(0, 0), Edge::new(1, 0)]),
            Err(MatchingError::Conflict(Node::B(0)))
        );
    }
}
