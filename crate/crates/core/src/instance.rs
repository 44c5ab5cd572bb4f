//! Bipartite preference instances.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// The two sides of the bipartition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// A node, addressed by side and declaration index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    A(usize),
    B(usize),
}

impl Node {
    pub fn side(self) -> Side {
        match self {
            Node::A(_) => Side::A,
            Node::B(_) => Side::B,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Node::A(i) | Node::B(i) => i,
        }
    }
}

/// An edge `(a, b)` with `a` on side A and `b` on side B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
}

impl Edge {
    pub const fn new(a: usize, b: usize) -> Self {
        Edge { a, b }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("node `{0}` has more than one preference line")]
    DuplicatePrefLine(String),
    #[error("node `{0}` has no preference line")]
    MissingPrefLine(String),
    #[error("`{node}` lists `{other}`, which is not on the opposite side")]
    SameSide { node: String, other: String },
    #[error("`{node}` lists `{other}` more than once")]
    RepeatedInList { node: String, other: String },
    #[error("non-mutual preference: `{from}` lists `{to}` but `{to}` does not list `{from}`")]
    NonMutual { from: String, to: String },
    #[error("cost given for non-edge ({a}, {b})")]
    CostOnNonEdge { a: String, b: String },
    #[error("cost given twice for edge ({a}, {b})")]
    DuplicateCost { a: String, b: String },
    #[error("node index {0} out of range")]
    IndexOutOfRange(usize),
}

const NO_EDGE: u32 = u32::MAX;

/// A bipartite graph `G = (A ∪ B, E)` with strict preference lists and
/// integer edge costs.
///
/// Nodes are addressed by their declaration index on each side. The edge set
/// is the set of mutually listed pairs; edges are numbered in canonical order
/// (side-A declaration order, then preference order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    names_a: Vec<String>,
    names_b: Vec<String>,
    prefs_a: Vec<Vec<usize>>,
    prefs_b: Vec<Vec<usize>>,
    // dense `na * nb` tables, `NO_EDGE` marks a non-edge
    rank_a: Vec<u32>,
    rank_b: Vec<u32>,
    edge_id: Vec<u32>,
    edges: Vec<Edge>,
    costs: Vec<i64>,
}

impl Instance {
    /// Builds an instance from index-based preference lists. All costs are 0.
    pub fn new(
        names_a: Vec<String>,
        names_b: Vec<String>,
        prefs_a: Vec<Vec<usize>>,
        prefs_b: Vec<Vec<usize>>,
    ) -> Result<Self, InstanceError> {
        let na = names_a.len();
        let nb = names_b.len();
        if prefs_a.len() != na {
            return Err(InstanceError::IndexOutOfRange(prefs_a.len()));
        }
        if prefs_b.len() != nb {
            return Err(InstanceError::IndexOutOfRange(prefs_b.len()));
        }
        {
            let mut seen = BTreeMap::new();
            for name in names_a.iter().chain(names_b.iter()) {
                if seen.insert(name.as_str(), ()).is_some() {
                    return Err(InstanceError::DuplicateNode(name.clone()));
                }
            }
        }

        let mut rank_a = vec![NO_EDGE; na * nb];
        let mut rank_b = vec![NO_EDGE; na * nb];
        for (a, list) in prefs_a.iter().enumerate() {
            for (r, &b) in list.iter().enumerate() {
                if b >= nb {
                    return Err(InstanceError::IndexOutOfRange(b));
                }
                if rank_a[a * nb + b] != NO_EDGE {
                    return Err(InstanceError::RepeatedInList {
                        node: names_a[a].clone(),
                        other: names_b[b].clone(),
                    });
                }
                rank_a[a * nb + b] = r as u32;
            }
        }
        for (b, list) in prefs_b.iter().enumerate() {
            for (r, &a) in list.iter().enumerate() {
                if a >= na {
                    return Err(InstanceError::IndexOutOfRange(a));
                }
                if rank_b[a * nb + b] != NO_EDGE {
                    return Err(InstanceError::RepeatedInList {
                        node: names_b[b].clone(),
                        other: names_a[a].clone(),
                    });
                }
                rank_b[a * nb + b] = r as u32;
            }
        }
        for a in 0..na {
            for b in 0..nb {
                let ia = rank_a[a * nb + b] != NO_EDGE;
                let ib = rank_b[a * nb + b] != NO_EDGE;
                if ia && !ib {
                    return Err(InstanceError::NonMutual {
                        from: names_a[a].clone(),
                        to: names_b[b].clone(),
                    });
                }
                if ib && !ia {
                    return Err(InstanceError::NonMutual {
                        from: names_b[b].clone(),
                        to: names_a[a].clone(),
                    });
                }
            }
        }

        let mut edges = Vec::new();
        let mut edge_id = vec![NO_EDGE; na * nb];
        for (a, list) in prefs_a.iter().enumerate() {
            for &b in list {
                edge_id[a * nb + b] = edges.len() as u32;
                edges.push(Edge::new(a, b));
            }
        }
        let costs = vec![0; edges.len()];
        Ok(Instance {
            names_a,
            names_b,
            prefs_a,
            prefs_b,
            rank_a,
            rank_b,
            edge_id,
            edges,
            costs,
        })
    }

    /// Replaces edge costs. Edges not mentioned keep cost 0.
    pub fn with_costs<I>(mut self, costs: I) -> Result<Self, InstanceError>
    where
        I: IntoIterator<Item = (Edge, i64)>,
    {
        self.costs.iter_mut().for_each(|c| *c = 0);
        let mut seen = vec![false; self.edges.len()];
        for (e, c) in costs {
            let id = self.edge_index(e).ok_or_else(|| InstanceError::CostOnNonEdge {
                a: self.names_a.get(e.a).cloned().unwrap_or_default(),
                b: self.names_b.get(e.b).cloned().unwrap_or_default(),
            })?;
            if seen[id] {
                return Err(InstanceError::DuplicateCost {
                    a: self.names_a[e.a].clone(),
                    b: self.names_b[e.b].clone(),
                });
            }
            seen[id] = true;
            self.costs[id] = c;
        }
        Ok(self)
    }

    pub fn num_a(&self) -> usize {
        self.names_a.len()
    }

    pub fn num_b(&self) -> usize {
        self.names_b.len()
    }

    pub fn name(&self, node: Node) -> &str {
        match node {
            Node::A(a) => &self.names_a[a],
            Node::B(b) => &self.names_b[b],
        }
    }

    pub fn name_a(&self, a: usize) -> &str {
        &self.names_a[a]
    }

    pub fn name_b(&self, b: usize) -> &str {
        &self.names_b[b]
    }

    pub fn names_a(&self) -> &[String] {
        &self.names_a
    }

    pub fn names_b(&self) -> &[String] {
        &self.names_b
    }

    /// Looks a node up by identifier. Linear in the number of nodes.
    pub fn lookup(&self, name: &str) -> Option<Node> {
        if let Some(a) = self.names_a.iter().position(|n| n == name) {
            return Some(Node::A(a));
        }
        self.names_b.iter().position(|n| n == name).map(Node::B)
    }

    pub fn prefs_a(&self, a: usize) -> &[usize] {
        &self.prefs_a[a]
    }

    pub fn prefs_b(&self, b: usize) -> &[usize] {
        &self.prefs_b[b]
    }

    /// Position of `b` in `a`'s list (0 = most preferred).
    pub fn rank_a(&self, a: usize, b: usize) -> Option<usize> {
        let r = self.rank_a[a * self.num_b() + b];
        (r != NO_EDGE).then_some(r as usize)
    }

    /// Position of `a` in `b`'s list (0 = most preferred).
    pub fn rank_b(&self, b: usize, a: usize) -> Option<usize> {
        let r = self.rank_b[a * self.num_b() + b];
        (r != NO_EDGE).then_some(r as usize)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.num_a() && b < self.num_b() && self.edge_id[a * self.num_b() + b] != NO_EDGE
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Canonical index of an edge, if `e` is an edge.
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        if e.a >= self.num_a() || e.b >= self.num_b() {
            return None;
        }
        let id = self.edge_id[e.a * self.num_b() + e.b];
        (id != NO_EDGE).then_some(id as usize)
    }

    /// Cost of an edge; non-edges report `None`.
    pub fn cost(&self, e: Edge) -> Option<i64> {
        self.edge_index(e).map(|i| self.costs[i])
    }

    /// Costs indexed like [`Instance::edges`].
    pub fn costs(&self) -> &[i64] {
        &self.costs
    }

    pub fn has_costs(&self) -> bool {
        self.costs.iter().any(|&c| c != 0)
    }

    /// Does `a` strictly prefer `x` to `y`? `None` stands for being unmatched,
    /// which is worse than any partner.
    pub fn a_prefers(&self, a: usize, x: Option<usize>, y: Option<usize>) -> bool {
        let rx = x.map_or(usize::MAX, |b| self.rank_a(a, b).unwrap_or(usize::MAX));
        let ry = y.map_or(usize::MAX, |b| self.rank_a(a, b).unwrap_or(usize::MAX));
        rx < ry
    }

    /// Does `b` strictly prefer `x` to `y`? See [`Instance::a_prefers`].
    pub fn b_prefers(&self, b: usize, x: Option<usize>, y: Option<usize>) -> bool {
        let rx = x.map_or(usize::MAX, |a| self.rank_b(b, a).unwrap_or(usize::MAX));
        let ry = y.map_or(usize::MAX, |a| self.rank_b(b, a).unwrap_or(usize::MAX));
        rx < ry
    }

    /// Neighbours of a node, in preference order.
    pub fn neighbours(&self, node: Node) -> impl Iterator<Item = Node> + '_ {
        let (list, wrap): (&[usize], fn(usize) -> Node) = match node {
            Node::A(a) => (&self.prefs_a[a], Node::B),
            Node::B(b) => (&self.prefs_b[b], Node::A),
        };
        list.iter().map(move |&x| wrap(x))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Name-based construction of an [`Instance`], used by parsers.
///
/// Every declared node must receive exactly one preference line.
#[derive(Debug, Default, Clone)]
pub struct InstanceBuilder {
    names_a: Vec<String>,
    names_b: Vec<String>,
    index: BTreeMap<String, Node>,
    prefs: BTreeMap<Node, Vec<String>>,
    costs: Vec<(String, String, i64)>,
}

impl InstanceBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, side: Side, name: &str) -> Result<Node, InstanceError> {
        if self.index.contains_key(name) {
            return Err(InstanceError::DuplicateNode(name.into()));
        }
        let node = match side {
            Side::A => {
                self.names_a.push(name.into());
                Node::A(self.names_a.len() - 1)
            }
            Side::B => {
                self.names_b.push(name.into());
                Node::B(self.names_b.len() - 1)
            }
        };
        self.index.insert(name.into(), node);
        Ok(node)
    }

    pub fn node(&self, name: &str) -> Option<Node> {
        self.index.get(name).copied()
    }

    pub fn set_prefs<S: AsRef<str>>(&mut self, name: &str, list: &[S]) -> Result<(), InstanceError> {
        let node = self
            .node(name)
            .ok_or_else(|| InstanceError::UnknownNode(name.into()))?;
        if self.prefs.contains_key(&node) {
            return Err(InstanceError::DuplicatePrefLine(name.into()));
        }
        self.prefs
            .insert(node, list.iter().map(|s| String::from(s.as_ref())).collect());
        Ok(())
    }

    pub fn set_cost(&mut self, a: &str, b: &str, cost: i64) {
        self.costs.push((a.into(), b.into(), cost));
    }

    pub fn build(self) -> Result<Instance, InstanceError> {
        let mut prefs_a = vec![Vec::new(); self.names_a.len()];
        let mut prefs_b = vec![Vec::new(); self.names_b.len()];
        for (name, node) in &self.index {
            if !self.prefs.contains_key(node) {
                return Err(InstanceError::MissingPrefLine(name.clone()));
            }
        }
        for (&node, list) in &self.prefs {
            let (own_name, own_side) = match node {
                Node::A(i) => (&self.names_a[i], Side::A),
                Node::B(i) => (&self.names_b[i], Side::B),
            };
            let mut resolved = Vec::with_capacity(list.len());
            for other in list {
                let target = self
                    .node(other)
                    .ok_or_else(|| InstanceError::UnknownNode(other.clone()))?;
                if target.side() == own_side {
                    return Err(InstanceError::SameSide {
                        node: own_name.clone(),
                        other: other.clone(),
                    });
                }
                resolved.push(target.index());
            }
            match node {
                Node::A(i) => prefs_a[i] = resolved,
                Node::B(i) => prefs_b[i] = resolved,
            }
        }
        let inst = Instance::new(self.names_a, self.names_b, prefs_a, prefs_b)?;
        let mut costs = Vec::with_capacity(self.costs.len());
        for (a, b, c) in &self.costs {
            let (na, nb) = match (inst.lookup(a), inst.lookup(b)) {
                (Some(Node::A(x)), Some(Node::B(y))) => (x, y),
                (None, _) => return Err(InstanceError::UnknownNode(a.clone())),
                (_, None) => return Err(InstanceError::UnknownNode(b.clone())),
                _ => {
                    return Err(InstanceError::CostOnNonEdge {
                        a: a.clone(),
                        b: b.clone(),
                    })
                }
            };
            costs.push((Edge::new(na, nb), *c));
        }
        inst.with_costs(costs)
    }
}
