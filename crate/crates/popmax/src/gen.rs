//! Seeded random instances and formulas.

use popmax_core::hardness::CnfFormula;
use popmax_core::{Edge, Instance};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `na × nb` instance named `a1…`, `b1…`. Each pair is an edge with
/// probability `density`; afterwards every node's incident list is shuffled
/// independently. With `max_cost`, edge costs are uniform in `0..=max_cost`,
/// drawn in canonical edge order.
pub fn random_instance(
    na: usize,
    nb: usize,
    density: f64,
    seed: u64,
    max_cost: Option<i64>,
) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = density.clamp(0.0, 1.0);
    let mut prefs_a: Vec<Vec<usize>> = vec![Vec::new(); na];
    let mut prefs_b: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for (a, list) in prefs_a.iter_mut().enumerate() {
        for (b, back) in prefs_b.iter_mut().enumerate() {
            if rng.random_bool(p) {
                list.push(b);
                back.push(a);
            }
        }
    }
    for list in prefs_a.iter_mut().chain(prefs_b.iter_mut()) {
        list.shuffle(&mut rng);
    }
    let names_a = (1..=na).map(|i| format!("a{i}")).collect();
    let names_b = (1..=nb).map(|i| format!("b{i}")).collect();
    let inst = Instance::new(names_a, names_b, prefs_a, prefs_b).expect("mutual by construction");
    match max_cost {
        Some(k) if k > 0 => {
            let costs: Vec<(Edge, i64)> = inst
                .edges()
                .iter()
                .map(|&e| (e, rng.random_range(0..=k)))
                .collect();
            inst.with_costs(costs).expect("costs on edges")
        }
        _ => inst,
    }
}

/// `num_clauses` clauses over `num_vars` variables, each of 1 to 3 literals
/// with uniformly chosen variables and signs.
pub fn random_cnf(num_vars: usize, num_clauses: usize, seed: u64) -> CnfFormula {
    assert!(num_vars > 0 || num_clauses == 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..num_clauses)
        .map(|_| {
            let len = rng.random_range(1..=3);
            (0..len)
                .map(|_| {
                    let v = rng.random_range(1..=num_vars) as i32;
                    if rng.random_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    CnfFormula::new(num_vars, clauses).expect("literals in range")
}
