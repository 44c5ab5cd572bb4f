//! Min-cost stable matchings and min-cost popular max-matchings.

use alloc::vec;
use alloc::vec::Vec;

use crate::certificate::{extract_certificate, DualCertificate};
use crate::flow::{FlowNetwork, INF};
use crate::gstar::{build_gstar, project};
use crate::instance::Instance;
use crate::matching::{matching_cost, Matching};
use crate::rotation::{find_rotations, RotationPoset};

/// Closed subset of minimum total `δ`, the inclusion-minimal one among the
/// optima.
///
/// Rotation `ρ` with `δ < 0` hangs off the source with capacity `−δ`, with
/// `δ > 0` it feeds the sink with capacity `δ`, and `ρ → π` is unbounded for
/// every predecessor `π`. The source side of the residual cut is the answer.
pub fn min_closure(poset: &RotationPoset, delta: &[i64]) -> Vec<bool> {
    let k = poset.len();
    let (s, t) = (k, k + 1);
    let mut net = FlowNetwork::new(k + 2, s, t);
    for (i, &d) in delta.iter().enumerate() {
        if d < 0 {
            net.add_arc(s, i, -d);
        } else if d > 0 {
            net.add_arc(i, t, d);
        }
        for &p in &poset.preds[i] {
            net.add_arc(i, p, INF);
        }
    }
    let cut = net.max_flow();
    debug_assert_eq!(cut.value, cut.cut_capacity);
    cut.source_side[..k].to_vec()
}

/// A stable matching of least total cost. Among several, the one whose
/// rotation set is smallest.
pub fn min_cost_stable(inst: &Instance) -> Matching {
    let poset = find_rotations(inst);
    let delta: Vec<i64> = poset.rotations.iter().map(|r| r.delta(inst)).collect();
    let chosen = if delta.iter().all(|&d| d >= 0) {
        vec![false; poset.len()]
    } else {
        min_closure(&poset, &delta)
    };
    poset.matching_for(&chosen)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinCostSolution {
    pub matching: Matching,
    pub cost: i64,
    pub certificate: DualCertificate,
}

/// Cheapest popular max-matching: min-cost stable matching of `G*` under
/// lifted costs, projected, with the certificate read off its levels.
pub fn min_cost_popular_max(inst: &Instance) -> MinCostSolution {
    let gs = build_gstar(inst);
    let s = min_cost_stable(gs.inner());
    let matching = project(&gs, &s).expect("stable matchings of G* project to matchings");
    let certificate =
        extract_certificate(&gs, &s).expect("stable matchings of G* carry a certificate");
    MinCostSolution {
        cost: matching_cost(inst, &matching),
        matching,
        certificate,
    }
}
