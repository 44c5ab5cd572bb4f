//! Gale-Shapley and stability.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::instance::{Edge, Instance, Side};
use crate::matching::{wt_unchecked, Matching};

/// Proposer-optimal stable matching with `proposing` side making offers.
///
/// Free proposers are served first-in first-out, seeded in declaration
/// order. A proposer whose list runs out stays unmatched.
pub fn gale_shapley(inst: &Instance, proposing: Side) -> Matching {
    let (np, nr) = match proposing {
        Side::A => (inst.num_a(), inst.num_b()),
        Side::B => (inst.num_b(), inst.num_a()),
    };
    let list = |p: usize| -> &[usize] {
        match proposing {
            Side::A => inst.prefs_a(p),
            Side::B => inst.prefs_b(p),
        }
    };
    let rank = |r: usize, p: usize| -> usize {
        match proposing {
            Side::A => inst.rank_b(r, p),
            Side::B => inst.rank_a(r, p),
        }
        .expect("mutual lists")
    };

    let mut next = vec![0usize; np];
    let mut held: Vec<Option<usize>> = vec![None; nr];
    let mut free: VecDeque<usize> = (0..np).collect();
    while let Some(p) = free.pop_front() {
        let prefs = list(p);
        while next[p] < prefs.len() {
            let r = prefs[next[p]];
            next[p] += 1;
            match held[r] {
                None => {
                    held[r] = Some(p);
                    break;
                }
                Some(q) if rank(r, p) < rank(r, q) => {
                    held[r] = Some(p);
                    free.push_back(q);
                    break;
                }
                Some(_) => {}
            }
        }
    }

    let mut m = Matching::empty_for(inst);
    for (r, p) in held.iter().enumerate() {
        if let Some(p) = *p {
            match proposing {
                Side::A => m.set(p, r),
                Side::B => m.set(r, p),
            }
        }
    }
    m
}

/// Edges whose endpoints both strictly prefer each other to their current
/// assignment, in canonical edge order.
pub fn blocking_edges(inst: &Instance, m: &Matching) -> Vec<Edge> {
    inst.edges()
        .iter()
        .copied()
        .filter(|&e| wt_unchecked(inst, m, e) == 2)
        .collect()
}

pub fn is_stable(inst: &Instance, m: &Matching) -> bool {
    inst.edges().iter().all(|&e| wt_unchecked(inst, m, e) != 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn gale_shapley_examples() {
        let i0 = i0();
        assert_eq!(gale_shapley(&i0, Side::A), m(&i0, &[("a", "b")]));

        let i1 = i1();
        assert_eq!(gale_shapley(&i1, Side::A), m(&i1, &[("a2", "b1")]));

        let i2 = i2();
        assert_eq!(
            gale_shapley(&i2, Side::A),
            m(&i2, &[("a1", "b1"), ("a2", "b2")])
        );
        assert_eq!(
            gale_shapley(&i2, Side::B),
            m(&i2, &[("a1", "b2"), ("a2", "b1")])
        );
    }

    #[test]
    fn empty_instance() {
        let inst = Instance::new(Vec::new(), Vec::new(), Vec::new(), Vec::new()).unwrap();
        assert!(gale_shapley(&inst, Side::A).is_empty());
    }

    #[test]
    fn blocking_examples() {
        let i1 = i1();
        assert_eq!(
            blocking_edges(&i1, &m(&i1, &[("a1", "b1"), ("a2", "b2")])),
            vec![Edge::new(1, 0)]
        );
        assert!(!is_stable(&i1, &m(&i1, &[("a1", "b1"), ("a2", "b2")])));

        let i3 = i3();
        assert_eq!(
            blocking_edges(&i3, &m(&i3, &[("a3", "b1")])),
            vec![Edge::new(0, 0), Edge::new(1, 0)]
        );

        let i0 = i0();
        assert!(!is_stable(&i0, &Matching::empty_for(&i0)));
        assert!(is_stable(&i0, &gale_shapley(&i0, Side::A)));
    }
}
