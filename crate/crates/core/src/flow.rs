//! Max-flow / min-cut (Dinic) with integer capacities.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// Capacity standing in for "unbounded".
pub const INF: i64 = i64::MAX / 4;

#[derive(Clone, Debug)]
struct FlowArc {
    to: usize,
    cap: i64,
    orig: i64,
}

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    n: usize,
    source: usize,
    sink: usize,
    // arc 2k is the forward arc, 2k+1 its residual twin
    arcs: Vec<FlowArc>,
    adj: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: i64,
    /// Nodes reachable from the source in the final residual network.
    pub source_side: Vec<bool>,
    /// Total capacity of the arcs leaving `source_side`.
    pub cut_capacity: i64,
}

impl FlowNetwork {
    pub fn new(n: usize, source: usize, sink: usize) -> Self {
        assert!(source < n && sink < n && source != sink);
        FlowNetwork {
            n,
            source,
            sink,
            arcs: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    /// Adds arc `from → to`; capacities must be non-negative.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64) {
        assert!(cap >= 0, "negative capacity");
        self.adj[from].push(self.arcs.len());
        self.arcs.push(FlowArc { to, cap, orig: cap });
        self.adj[to].push(self.arcs.len());
        self.arcs.push(FlowArc {
            to: from,
            cap: 0,
            orig: 0,
        });
    }

    fn bfs(&self, level: &mut [i32]) -> bool {
        level.iter_mut().for_each(|l| *l = -1);
        level[self.source] = 0;
        let mut queue = VecDeque::from([self.source]);
        while let Some(v) = queue.pop_front() {
            for &i in &self.adj[v] {
                let arc = &self.arcs[i];
                if arc.cap > 0 && level[arc.to] < 0 {
                    level[arc.to] = level[v] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        level[self.sink] >= 0
    }

    fn dfs(&mut self, v: usize, pushed: i64, level: &[i32], it: &mut [usize]) -> i64 {
        if v == self.sink {
            return pushed;
        }
        while it[v] < self.adj[v].len() {
            let i = self.adj[v][it[v]];
            let (to, cap) = (self.arcs[i].to, self.arcs[i].cap);
            if cap > 0 && level[to] == level[v] + 1 {
                let got = self.dfs(to, pushed.min(cap), level, it);
                if got > 0 {
                    self.arcs[i].cap -= got;
                    self.arcs[i ^ 1].cap += got;
                    return got;
                }
            }
            it[v] += 1;
        }
        0
    }

    /// Runs Dinic's algorithm to completion. The network keeps its residual
    /// state, so call this once.
    pub fn max_flow(&mut self) -> MaxFlow {
        let mut value = 0i64;
        let mut level = vec![-1i32; self.n];
        while self.bfs(&mut level) {
            let mut it = vec![0usize; self.n];
            loop {
                let f = self.dfs(self.source, INF, &level, &mut it);
                if f == 0 {
                    break;
                }
                value += f;
            }
        }
        self.bfs(&mut level);
        let source_side: Vec<bool> = level.iter().map(|&l| l >= 0).collect();
        let mut cut_capacity = 0i64;
        for v in 0..self.n {
            if !source_side[v] {
                continue;
            }
            for &i in &self.adj[v] {
                if i % 2 == 0 && !source_side[self.arcs[i].to] {
                    cut_capacity = cut_capacity.saturating_add(self.arcs[i].orig);
                }
            }
        }
        debug_assert_eq!(value, cut_capacity);
        MaxFlow {
            value,
            source_side,
            cut_capacity,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc() {
        let mut net = FlowNetwork::new(2, 0, 1);
        net.add_arc(0, 1, 3);
        let r = net.max_flow();
        assert_eq!(r.value, 3);
        assert_eq!(r.cut_capacity, 3);
        assert_eq!(r.source_side, vec![true, false]);
    }

    #[test]
    fn diamond() {
        // s → x (2), s → y (1), x → t (1), y → t (2), x → y (1)
        let mut net = FlowNetwork::new(4, 0, 3);
        net.add_arc(0, 1, 2);
        net.add_arc(0, 2, 1);
        net.add_arc(1, 3, 1);
        net.add_arc(2, 3, 2);
        net.add_arc(1, 2, 1);
        let r = net.max_flow();
        assert_eq!(r.value, 3);
        assert_eq!(r.cut_capacity, 3);
    }

    #[test]
    fn disconnected() {
        let mut net = FlowNetwork::new(3, 0, 2);
        net.add_arc(0, 1, 5);
        let r = net.max_flow();
        assert_eq!(r.value, 0);
        assert_eq!(r.cut_capacity, 0);
        assert_eq!(r.source_side, vec![true, true, false]);
    }

    #[test]
    fn infinite_arcs_stay_off_the_cut() {
        let mut net = FlowNetwork::new(4, 0, 3);
        net.add_arc(0, 1, 4);
        net.add_arc(1, 2, INF);
        net.add_arc(2, 3, 7);
        let r = net.max_flow();
        assert_eq!(r.value, 4);
        assert_eq!(r.cut_capacity, 4);
    }
}
