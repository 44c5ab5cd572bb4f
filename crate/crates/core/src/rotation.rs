//! Rotations of a marriage instance and the closed-subset enumeration of its
//! stable matchings.
//!
//! A is the proposing ("men") side throughout. Rotations are discovered by a
//! maximal elimination chain from the A-optimal stable matching, which ends
//! at the B-optimal one and meets every rotation exactly once.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::instance::{Edge, Instance, Side};
use crate::matching::Matching;
use crate::stable::gale_shapley;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("more than {0} stable matchings")]
    LimitExceeded(usize),
}

/// `(a_0, b_0), …, (a_{r-1}, b_{r-1})`: eliminating it moves every `a_i` to
/// `b_{i+1}` (indices mod `r`). Stored starting at the lowest A index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rotation {
    pub pairs: Vec<Edge>,
}

impl Rotation {
    fn new(mut pairs: Vec<Edge>) -> Self {
        let start = (0..pairs.len())
            .min_by_key(|&i| pairs[i].a)
            .unwrap_or(0);
        pairs.rotate_left(start);
        Rotation { pairs }
    }

    pub fn removed(&self) -> &[Edge] {
        &self.pairs
    }

    pub fn added(&self) -> Vec<Edge> {
        let r = self.pairs.len();
        (0..r)
            .map(|i| Edge::new(self.pairs[i].a, self.pairs[(i + 1) % r].b))
            .collect()
    }

    /// Cost change caused by eliminating the rotation.
    pub fn delta(&self, inst: &Instance) -> i64 {
        let cost = |e: &Edge| inst.cost(*e).unwrap_or(0);
        self.added().iter().map(cost).sum::<i64>() - self.pairs.iter().map(cost).sum::<i64>()
    }
}

#[derive(Clone, Debug)]
pub struct RotationPoset {
    /// In discovery order, which is also a topological order.
    pub rotations: Vec<Rotation>,
    /// `preds[i]`: rotations that must be eliminated before rotation `i`,
    /// ascending and duplicate-free.
    pub preds: Vec<Vec<usize>>,
    /// The A-optimal stable matching.
    pub base: Matching,
}

impl RotationPoset {
    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    pub fn is_closed(&self, chosen: &[bool]) -> bool {
        (0..self.len()).all(|i| !chosen[i] || self.preds[i].iter().all(|&p| chosen[p]))
    }

    /// The stable matching reached by eliminating the chosen rotations (a
    /// closed subset) from the base, in discovery order.
    pub fn matching_for(&self, chosen: &[bool]) -> Matching {
        let mut m = self.base.clone();
        for (i, rot) in self.rotations.iter().enumerate() {
            if chosen[i] {
                eliminate(&mut m, rot);
            }
        }
        m
    }
}

fn eliminate(m: &mut Matching, rot: &Rotation) {
    for e in rot.pairs.iter() {
        m.unset_a(e.a);
    }
    for e in rot.added() {
        m.set(e.a, e.b);
    }
}

/// `s_M(a)`: the first B node after `M(a)` on `a`'s list that prefers `a` to
/// its partner. `None` if there is none, or if an unmatched B node comes
/// first (then `a` can never move down).
fn next_choice(inst: &Instance, m: &Matching, a: usize) -> Option<usize> {
    let cur = m.mate_a(a)?;
    let from = inst.rank_a(a, cur)? + 1;
    for &b in &inst.prefs_a(a)[from..] {
        let mb = m.mate_b(b)?;
        if inst.b_prefers(b, Some(a), Some(mb)) {
            return Some(b);
        }
    }
    None
}

/// A rotation exposed in `m`, found by following `a → M(s_M(a))` from A
/// nodes in index order (reverse order when `reverse`).
fn exposed_rotation(inst: &Instance, m: &Matching, reverse: bool) -> Option<Rotation> {
    let na = inst.num_a();
    let next: Vec<Option<usize>> = (0..na)
        .map(|a| next_choice(inst, m, a).and_then(|b| m.mate_b(b)))
        .collect();
    // 0 = unvisited, 1 = on the current walk, 2 = finished
    let mut state = vec![0u8; na];
    let order: Vec<usize> = if reverse {
        (0..na).rev().collect()
    } else {
        (0..na).collect()
    };
    for start in order {
        let mut walk = Vec::new();
        let mut cur = start;
        loop {
            if state[cur] == 2 {
                break;
            }
            if state[cur] == 1 {
                let pos = walk.iter().position(|&x| x == cur).expect("on walk");
                let cycle = &walk[pos..];
                let pairs = cycle
                    .iter()
                    .map(|&a| Edge::new(a, m.mate_a(a).expect("matched")))
                    .collect();
                return Some(Rotation::new(pairs));
            }
            state[cur] = 1;
            walk.push(cur);
            match next[cur] {
                Some(n) => cur = n,
                None => break,
            }
        }
        for a in walk {
            state[a] = 2;
        }
    }
    None
}

pub fn find_rotations(inst: &Instance) -> RotationPoset {
    find_rotations_ordered(inst, false)
}

/// As [`find_rotations`]; `reverse` flips the tie-breaking used to choose
/// among exposed rotations.
pub fn find_rotations_ordered(inst: &Instance, reverse: bool) -> RotationPoset {
    let base = gale_shapley(inst, Side::A);
    let mut m = base.clone();
    let mut rotations = Vec::new();
    // which rotation created each pair; pairs of the base are absent
    let mut producer: BTreeMap<Edge, usize> = BTreeMap::new();
    // per B node: successive partners with the rotation that brought them
    let mut history: Vec<Vec<(usize, Option<usize>)>> = (0..inst.num_b())
        .map(|b| base.mate_b(b).map(|a| (a, None)).into_iter().collect())
        .collect();

    while let Some(rot) = exposed_rotation(inst, &m, reverse) {
        let idx = rotations.len();
        for e in rot.added() {
            producer.insert(e, idx);
            history[e.b].push((e.a, Some(idx)));
        }
        eliminate(&mut m, &rot);
        rotations.push(rot);
    }

    let preds = rotations
        .iter()
        .enumerate()
        .map(|(idx, rot)| {
            let mut ps = Vec::new();
            let r = rot.pairs.len();
            for i in 0..r {
                let e = rot.pairs[i];
                if let Some(&p) = producer.get(&e) {
                    ps.push(p);
                }
                let (hi, lo) = (
                    inst.rank_a(e.a, e.b).expect("edge"),
                    inst.rank_a(e.a, rot.pairs[(i + 1) % r].b).expect("edge"),
                );
                for &w in &inst.prefs_a(e.a)[hi + 1..lo] {
                    // the rotation after which w holds someone she prefers to e.a
                    let first_better = history[w]
                        .iter()
                        .find(|&&(p, _)| inst.b_prefers(w, Some(p), Some(e.a)));
                    if let Some(&(_, Some(j))) = first_better {
                        debug_assert!(j < idx);
                        ps.push(j);
                    }
                }
            }
            ps.sort_unstable();
            ps.dedup();
            ps
        })
        .collect();

    RotationPoset {
        rotations,
        preds,
        base,
    }
}

/// All stable matchings, one per closed subset of the rotation poset.
///
/// Subsets are generated by include/exclude decisions in discovery order,
/// excluding before including.
pub fn enumerate_stable(inst: &Instance, limit: usize) -> Result<Vec<Matching>, EnumerationError> {
    let poset = find_rotations(inst);
    let mut out = Vec::new();
    let mut chosen = vec![false; poset.len()];
    walk_closed(&poset, 0, &mut chosen, &mut out, limit)?;
    Ok(out)
}

fn walk_closed(
    poset: &RotationPoset,
    i: usize,
    chosen: &mut [bool],
    out: &mut Vec<Matching>,
    limit: usize,
) -> Result<(), EnumerationError> {
    if i == poset.len() {
        if out.len() == limit {
            return Err(EnumerationError::LimitExceeded(limit));
        }
        out.push(poset.matching_for(chosen));
        return Ok(());
    }
    walk_closed(poset, i + 1, chosen, out, limit)?;
    if poset.preds[i].iter().all(|&p| chosen[p]) {
        chosen[i] = true;
        walk_closed(poset, i + 1, chosen, out, limit)?;
        chosen[i] = false;
    }
    Ok(())
}
