//! Small named instances shared by unit tests.

use alloc::vec::Vec;

use crate::instance::{Edge, Instance, InstanceBuilder, Side};
use crate::matching::Matching;

pub fn build(a_side: &[(&str, &[&str])], b_side: &[(&str, &[&str])]) -> Instance {
    let mut bld = InstanceBuilder::new();
    for (n, _) in a_side {
        bld.add_node(Side::A, n).unwrap();
    }
    for (n, _) in b_side {
        bld.add_node(Side::B, n).unwrap();
    }
    for (n, l) in a_side.iter().chain(b_side) {
        bld.set_prefs(n, l).unwrap();
    }
    bld.build().unwrap()
}

/// Single edge.
pub fn i0() -> Instance {
    build(&[("a", &["b"])], &[("b", &["a"])])
}

/// a1: b1; a2: b1 b2; b1: a2 a1; b2: a2.
pub fn i1() -> Instance {
    build(
        &[("a1", &["b1"]), ("a2", &["b1", "b2"])],
        &[("b1", &["a2", "a1"]), ("b2", &["a2"])],
    )
}

/// Two stable matchings.
pub fn i2() -> Instance {
    build(
        &[("a1", &["b1", "b2"]), ("a2", &["b2", "b1"])],
        &[("b1", &["a2", "a1"]), ("b2", &["a1", "a2"])],
    )
}

/// `i2` with c(a1,b1) = c(a2,b2) = 1.
pub fn i2_costed() -> Instance {
    i2().with_costs([(Edge::new(0, 0), 1), (Edge::new(1, 1), 1)])
        .unwrap()
}

/// Three applicants for one post.
pub fn i3() -> Instance {
    build(
        &[("a1", &["b1"]), ("a2", &["b1"]), ("a3", &["b1"])],
        &[("b1", &["a1", "a2", "a3"])],
    )
}

/// Everybody gets their top choice by swapping.
pub fn i5() -> Instance {
    build(
        &[("a1", &["b2", "b1"]), ("a2", &["b1", "b2"])],
        &[("b1", &["a2", "a1"]), ("b2", &["a1", "a2"])],
    )
}

/// Matching from `(a, b)` names.
pub fn m(inst: &Instance, pairs: &[(&str, &str)]) -> Matching {
    let pairs: Vec<Edge> = pairs
        .iter()
        .map(|(a, b)| {
            Edge::new(
                inst.lookup(a).unwrap().index(),
                inst.lookup(b).unwrap().index(),
            )
        })
        .collect();
    Matching::from_edges(inst, &pairs).unwrap()
}
