//! Popularity among maximum matchings, and Pareto-optimality.
//!
//! A maximum matching `M` is a popular max-matching iff no alternating cycle
//! has positive `wt_M` weight and no alternating path with an unmatched
//! endpoint has positive weight. Both conditions are checked on the
//! [`AlternatingDigraph`], where a directed walk spells out an alternating
//! walk in `G`.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::instance::{Edge, Instance, Node};
use crate::matching::{augmenting_path, wt_unchecked, Matching};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PopularityError {
    #[error("matching is not maximum (an augmenting path exists)")]
    NotMaximum(Vec<Node>),
    #[error("matching does not belong to this instance")]
    SizeMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vertex {
    Pair(Edge),
    FreeA(usize),
    FreeB(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub edge: Edge,
    pub weight: i64,
}

/// One vertex per matched pair and per unmatched node; one arc per
/// non-matching edge `(a, b)`, from the vertex of `a` to the vertex of `b`,
/// weighted `wt_M(a, b)`.
///
/// Entering a pair vertex through its B node and leaving through its A node
/// crosses the matched edge, so directed walks are alternating walks.
#[derive(Clone, Debug)]
pub struct AlternatingDigraph {
    pub vertices: Vec<Vertex>,
    pub arcs: Vec<Arc>,
    vertex_of_a: Vec<usize>,
    vertex_of_b: Vec<usize>,
}

impl AlternatingDigraph {
    pub fn new(inst: &Instance, m: &Matching) -> Self {
        let mut vertices = Vec::new();
        let mut vertex_of_a = vec![usize::MAX; inst.num_a()];
        let mut vertex_of_b = vec![usize::MAX; inst.num_b()];
        for e in m.edges() {
            vertex_of_a[e.a] = vertices.len();
            vertex_of_b[e.b] = vertices.len();
            vertices.push(Vertex::Pair(e));
        }
        for (a, v) in vertex_of_a.iter_mut().enumerate() {
            if *v == usize::MAX {
                *v = vertices.len();
                vertices.push(Vertex::FreeA(a));
            }
        }
        for (b, v) in vertex_of_b.iter_mut().enumerate() {
            if *v == usize::MAX {
                *v = vertices.len();
                vertices.push(Vertex::FreeB(b));
            }
        }
        let arcs = inst
            .edges()
            .iter()
            .filter(|&&e| !m.contains(e))
            .map(|&e| Arc {
                from: vertex_of_a[e.a],
                to: vertex_of_b[e.b],
                edge: e,
                weight: wt_unchecked(inst, m, e),
            })
            .collect();
        AlternatingDigraph {
            vertices,
            arcs,
            vertex_of_a,
            vertex_of_b,
        }
    }

    pub fn vertex_of(&self, node: Node) -> usize {
        match node {
            Node::A(a) => self.vertex_of_a[a],
            Node::B(b) => self.vertex_of_b[b],
        }
    }

    /// Expands a directed cycle (as vertex ids, no repetition) into the node
    /// sequence `b1 a1 b2 a2 …` of the alternating cycle.
    fn expand_cycle(&self, cycle: &[usize]) -> Vec<Node> {
        let mut nodes = Vec::with_capacity(2 * cycle.len());
        for &v in cycle {
            if let Vertex::Pair(e) = self.vertices[v] {
                nodes.push(Node::B(e.b));
                nodes.push(Node::A(e.a));
            }
        }
        nodes
    }

    /// Expands a directed walk into alternating-path nodes. Free vertices
    /// contribute their single node, pair vertices `b a`.
    fn expand_path(&self, walk: &[usize]) -> Vec<Node> {
        let mut nodes = Vec::with_capacity(2 * walk.len());
        for &v in walk {
            match self.vertices[v] {
                Vertex::Pair(e) => {
                    nodes.push(Node::B(e.b));
                    nodes.push(Node::A(e.a));
                }
                Vertex::FreeA(a) => nodes.push(Node::A(a)),
                Vertex::FreeB(b) => nodes.push(Node::B(b)),
            }
        }
        nodes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    Cycle,
    Path,
}

/// An alternating cycle or path, as its node sequence, with its `wt_M`
/// weight. Matched pairs appear as consecutive `b, a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub kind: WitnessKind,
    pub nodes: Vec<Node>,
    pub weight: i64,
}

impl Witness {
    /// Edges in traversal order; a cycle includes its closing edge.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .nodes
            .windows(2)
            .map(|w| to_edge(w[0], w[1]))
            .collect();
        if self.kind == WitnessKind::Cycle && self.nodes.len() > 1 {
            out.push(to_edge(self.nodes[self.nodes.len() - 1], self.nodes[0]));
        }
        out
    }
}

fn to_edge(x: Node, y: Node) -> Edge {
    match (x, y) {
        (Node::A(a), Node::B(b)) | (Node::B(b), Node::A(a)) => Edge::new(a, b),
        _ => unreachable!("witness nodes alternate sides"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PopularityVerdict {
    pub popular: bool,
    pub witness: Option<Witness>,
}

/// Decides whether a maximum matching is a popular max-matching.
///
/// Positive cycles are found by Bellman-Ford on negated weights, seeded at
/// every vertex; positive paths by longest paths from the unmatched A
/// vertices and, on the reversed graph, into the unmatched B vertices. A
/// cycle is reported in preference to a path.
pub fn verify_popular_max(
    inst: &Instance,
    m: &Matching,
) -> Result<PopularityVerdict, PopularityError> {
    if !m.fits(inst) {
        return Err(PopularityError::SizeMismatch);
    }
    if let Some(path) = augmenting_path(inst, m) {
        return Err(PopularityError::NotMaximum(path));
    }
    let g = AlternatingDigraph::new(inst, m);

    if let Some(cycle) = positive_cycle(&g) {
        let weight = cycle.iter().map(|&i| g.arcs[i].weight).sum();
        let verts: Vec<usize> = cycle.iter().map(|&i| g.arcs[i].from).collect();
        return Ok(PopularityVerdict {
            popular: false,
            witness: Some(Witness {
                kind: WitnessKind::Cycle,
                nodes: g.expand_cycle(&verts),
                weight,
            }),
        });
    }

    let n = g.vertices.len();
    let from_free_a: Vec<usize> = (0..n)
        .filter(|&v| matches!(g.vertices[v], Vertex::FreeA(_)))
        .collect();
    if let Some((walk, weight)) = longest_positive_walk(&g, &from_free_a, false) {
        return Ok(PopularityVerdict {
            popular: false,
            witness: Some(Witness {
                kind: WitnessKind::Path,
                nodes: g.expand_path(&walk),
                weight,
            }),
        });
    }
    let into_free_b: Vec<usize> = (0..n)
        .filter(|&v| matches!(g.vertices[v], Vertex::FreeB(_)))
        .collect();
    if let Some((mut walk, weight)) = longest_positive_walk(&g, &into_free_b, true) {
        walk.reverse();
        return Ok(PopularityVerdict {
            popular: false,
            witness: Some(Witness {
                kind: WitnessKind::Path,
                nodes: g.expand_path(&walk),
                weight,
            }),
        });
    }

    Ok(PopularityVerdict {
        popular: true,
        witness: None,
    })
}

/// Arc ids of a directed cycle with positive total weight, in order.
fn positive_cycle(g: &AlternatingDigraph) -> Option<Vec<usize>> {
    let n = g.vertices.len();
    // shortest paths on cost = -weight from a virtual source reaching every vertex
    let mut dist = vec![0i64; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut last = None;
    for _ in 0..n {
        last = None;
        for (i, arc) in g.arcs.iter().enumerate() {
            let cand = dist[arc.from] - arc.weight;
            if cand < dist[arc.to] {
                dist[arc.to] = cand;
                pred[arc.to] = Some(i);
                last = Some(arc.to);
            }
        }
        last?;
    }
    let mut v = last?;
    for _ in 0..n {
        v = g.arcs[pred[v]?].from;
    }
    let start = v;
    let mut cycle = Vec::new();
    loop {
        let arc = pred[v]?;
        cycle.push(arc);
        v = g.arcs[arc].from;
        if v == start {
            break;
        }
    }
    cycle.reverse();
    Some(cycle)
}

/// Longest walk from any of `roots` (or, with `reversed`, into any of them)
/// ending at a pair vertex with positive weight. Assumes no positive cycle.
///
/// Returns the vertex walk (root first) and its weight; the maximum weight
/// wins, lowest vertex id on ties.
fn longest_positive_walk(
    g: &AlternatingDigraph,
    roots: &[usize],
    reversed: bool,
) -> Option<(Vec<usize>, i64)> {
    let n = g.vertices.len();
    let mut dist: Vec<Option<i64>> = vec![None; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    for &r in roots {
        dist[r] = Some(0);
    }
    for _ in 0..n {
        let mut changed = false;
        for (i, arc) in g.arcs.iter().enumerate() {
            let (from, to) = if reversed {
                (arc.to, arc.from)
            } else {
                (arc.from, arc.to)
            };
            if let Some(d) = dist[from] {
                let cand = d - arc.weight;
                if dist[to].is_none_or(|cur| cand < cur) {
                    dist[to] = Some(cand);
                    pred[to] = Some(i);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let (end, best) = (0..n)
        .filter(|&v| matches!(g.vertices[v], Vertex::Pair(_)))
        .filter_map(|v| dist[v].map(|d| (v, d)))
        .filter(|&(_, d)| d < 0)
        .min_by_key(|&(v, d)| (d, v))?;
    let mut walk = vec![end];
    let mut v = end;
    while let Some(arc) = pred[v] {
        v = if reversed { g.arcs[arc].to } else { g.arcs[arc].from };
        walk.push(v);
    }
    walk.reverse();
    Some((walk, -best))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParetoVerdict {
    pub optimal: bool,
    pub witness: Option<Witness>,
}

/// Decides Pareto-optimality of any matching.
///
/// `M` is dominated iff some alternating cycle uses only blocking edges
/// outside `M`, or some augmenting path does (an edge to an unmatched node is
/// blocking exactly when the matched endpoint prefers it). Switching along
/// the witness makes every node on it strictly better off.
pub fn is_pareto_optimal(inst: &Instance, m: &Matching) -> ParetoVerdict {
    let g = AlternatingDigraph::new(inst, m);
    let n = g.vertices.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, arc) in g.arcs.iter().enumerate() {
        if arc.weight == 2 {
            out[arc.from].push(i);
        }
    }

    if let Some(cycle) = find_cycle(&g, &out) {
        let verts: Vec<usize> = cycle.iter().map(|&i| g.arcs[i].from).collect();
        return ParetoVerdict {
            optimal: false,
            witness: Some(Witness {
                kind: WitnessKind::Cycle,
                nodes: g.expand_cycle(&verts),
                weight: 2 * cycle.len() as i64,
            }),
        };
    }

    // BFS from all unmatched A vertices to an unmatched B vertex
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = alloc::collections::VecDeque::new();
    for v in 0..n {
        if matches!(g.vertices[v], Vertex::FreeA(_)) {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        if matches!(g.vertices[v], Vertex::FreeB(_)) {
            let mut walk = vec![v];
            let mut cur = v;
            while let Some(arc) = pred[cur] {
                cur = g.arcs[arc].from;
                walk.push(cur);
            }
            walk.reverse();
            let arcs = walk.len() as i64 - 1;
            return ParetoVerdict {
                optimal: false,
                witness: Some(Witness {
                    kind: WitnessKind::Path,
                    nodes: g.expand_path(&walk),
                    weight: 2 * arcs,
                }),
            };
        }
        for &i in &out[v] {
            let t = g.arcs[i].to;
            if !seen[t] {
                seen[t] = true;
                pred[t] = Some(i);
                queue.push_back(t);
            }
        }
    }
    ParetoVerdict {
        optimal: true,
        witness: None,
    }
}

/// Any directed cycle in the subgraph given by `out`, as arc ids in order.
fn find_cycle(g: &AlternatingDigraph, out: &[Vec<usize>]) -> Option<Vec<usize>> {
    const WHITE: u8 = 0;
    const GREY: u8 = 1;
    const BLACK: u8 = 2;
    let n = g.vertices.len();
    let mut colour = vec![WHITE; n];
    let mut via: Vec<Option<usize>> = vec![None; n];
    for root in 0..n {
        if colour[root] != WHITE {
            continue;
        }
        // iterative DFS: (vertex, next out-arc position)
        let mut stack = vec![(root, 0usize)];
        colour[root] = GREY;
        while let Some(&mut (v, ref mut pos)) = stack.last_mut() {
            if *pos < out[v].len() {
                let arc = out[v][*pos];
                *pos += 1;
                let t = g.arcs[arc].to;
                match colour[t] {
                    WHITE => {
                        colour[t] = GREY;
                        via[t] = Some(arc);
                        stack.push((t, 0));
                    }
                    GREY => {
                        let mut cycle = vec![arc];
                        let mut cur = v;
                        while cur != t {
                            let a = via[cur].expect("grey vertices sit on the DFS path");
                            cycle.push(a);
                            cur = g.arcs[a].from;
                        }
                        cycle.reverse();
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                colour[v] = BLACK;
                stack.pop();
            }
        }
    }
    None
}
