#![allow(dead_code)]

use popmax_core::{Edge, Instance, Matching};
use proptest::prelude::*;

/// Generous enumeration bound for the instance sizes used in these tests.
pub const BOUND: usize = 40;

/// Builds an instance from an adjacency mask and sort keys: each node ranks
/// its neighbours by ascending key.
pub fn assemble(na: usize, nb: usize, adj: &[bool], ka: &[u32], kb: &[u32], costs: &[i64]) -> Instance {
    let mut prefs_a: Vec<Vec<usize>> = vec![Vec::new(); na];
    let mut prefs_b: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for a in 0..na {
        for b in 0..nb {
            if adj[a * nb + b] {
                prefs_a[a].push(b);
                prefs_b[b].push(a);
            }
        }
    }
    for (a, l) in prefs_a.iter_mut().enumerate() {
        l.sort_by_key(|&b| (ka[a * nb + b], b));
    }
    for (b, l) in prefs_b.iter_mut().enumerate() {
        l.sort_by_key(|&a| (kb[a * nb + b], a));
    }
    let names_a = (1..=na).map(|i| format!("a{i}")).collect();
    let names_b = (1..=nb).map(|i| format!("b{i}")).collect();
    let inst = Instance::new(names_a, names_b, prefs_a, prefs_b).expect("valid instance");
    if costs.iter().all(|&c| c == 0) {
        return inst;
    }
    let cs: Vec<(Edge, i64)> = inst
        .edges()
        .iter()
        .map(|&e| (e, costs[e.a * nb + e.b]))
        .collect();
    inst.with_costs(cs).expect("costs on edges")
}

/// Random instances with `1..=max_a` A nodes and `1..=max_b` B nodes.
pub fn instance(max_a: usize, max_b: usize) -> impl Strategy<Value = Instance> {
    instance_with_costs(max_a, max_b, 0)
}

pub fn instance_with_costs(max_a: usize, max_b: usize, max_cost: i64) -> impl Strategy<Value = Instance> {
    (1..=max_a, 1..=max_b, 0.3f64..=1.0).prop_flat_map(move |(na, nb, p)| {
        let k = na * nb;
        (
            proptest::collection::vec(proptest::bool::weighted(p), k),
            proptest::collection::vec(any::<u32>(), k),
            proptest::collection::vec(any::<u32>(), k),
            proptest::collection::vec(0..=max_cost, k),
        )
            .prop_map(move |(adj, ka, kb, c)| assemble(na, nb, &adj, &ka, &kb, &c))
    })
}

pub fn pairs(inst: &Instance, m: &Matching) -> Vec<(String, String)> {
    let mut v: Vec<_> = m
        .edges()
        .map(|e| (inst.name_a(e.a).to_string(), inst.name_b(e.b).to_string()))
        .collect();
    v.sort();
    v
}
