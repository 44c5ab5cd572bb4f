//! Exhaustive ground truth for small instances.
//!
//! Everything here is a direct transcription of the definitions over full
//! enumeration. Votes and blocking are recomputed from the preference lists;
//! nothing is shared with the polynomial-time solvers beyond the data model.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::hardness::CnfFormula;
use crate::instance::{Edge, Instance};
use crate::matching::Matching;

/// Default cap on `|E|` for enumeration.
pub const DEFAULT_BOUND: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {edges} edges, above the enumeration bound {bound}")]
    BoundExceeded { edges: usize, bound: usize },
}

fn check_bound(inst: &Instance, bound: usize) -> Result<(), OracleError> {
    if inst.num_edges() > bound {
        Err(OracleError::BoundExceeded {
            edges: inst.num_edges(),
            bound,
        })
    } else {
        Ok(())
    }
}

/// Every matching, the empty one included, by include/exclude over the
/// edges in canonical order.
pub fn enum_matchings(inst: &Instance, bound: usize) -> Result<Vec<Matching>, OracleError> {
    check_bound(inst, bound)?;
    let edges = inst.edges();
    let mut used_a = vec![false; inst.num_a()];
    let mut used_b = vec![false; inst.num_b()];
    let mut chosen = Vec::new();
    let mut out = Vec::new();
    fn rec(
        inst: &Instance,
        edges: &[Edge],
        i: usize,
        used_a: &mut [bool],
        used_b: &mut [bool],
        chosen: &mut Vec<Edge>,
        out: &mut Vec<Matching>,
    ) {
        if i == edges.len() {
            out.push(Matching::from_edges(inst, chosen).expect("disjoint edges"));
            return;
        }
        rec(inst, edges, i + 1, used_a, used_b, chosen, out);
        let e = edges[i];
        if !used_a[e.a] && !used_b[e.b] {
            used_a[e.a] = true;
            used_b[e.b] = true;
            chosen.push(e);
            rec(inst, edges, i + 1, used_a, used_b, chosen, out);
            chosen.pop();
            used_a[e.a] = false;
            used_b[e.b] = false;
        }
    }
    rec(inst, edges, 0, &mut used_a, &mut used_b, &mut chosen, &mut out);
    Ok(out)
}

pub fn enum_max_matchings(inst: &Instance, bound: usize) -> Result<Vec<Matching>, OracleError> {
    let all = enum_matchings(inst, bound)?;
    let best = all.iter().map(Matching::len).max().unwrap_or(0);
    Ok(all.into_iter().filter(|m| m.len() == best).collect())
}

pub fn max_matching_size(inst: &Instance, bound: usize) -> Result<usize, OracleError> {
    Ok(enum_matchings(inst, bound)?
        .iter()
        .map(Matching::len)
        .max()
        .unwrap_or(0))
}

/// Position of `x` on `list`, `None` meaning unmatched (worst).
fn pos(list: &[usize], x: Option<usize>) -> usize {
    match x {
        Some(x) => list.iter().position(|&y| y == x).expect("partner is on the list"),
        None => usize::MAX,
    }
}

/// `(φ(M, N), φ(N, M))`: nodes preferring `m`, nodes preferring `n`.
pub fn votes(inst: &Instance, m: &Matching, n: &Matching) -> (usize, usize) {
    let mut for_m = 0;
    let mut for_n = 0;
    let mut tally = |list: &[usize], x: Option<usize>, y: Option<usize>| {
        let (px, py) = (pos(list, x), pos(list, y));
        if px < py {
            for_m += 1;
        } else if py < px {
            for_n += 1;
        }
    };
    for a in 0..inst.num_a() {
        tally(inst.prefs_a(a), m.mate_a(a), n.mate_a(a));
    }
    for b in 0..inst.num_b() {
        tally(inst.prefs_b(b), m.mate_b(b), n.mate_b(b));
    }
    (for_m, for_n)
}

/// Popular among maximum matchings: maximum, and no maximum `N` gets more
/// votes than `m`.
pub fn brute_is_popular_max(
    inst: &Instance,
    m: &Matching,
    bound: usize,
) -> Result<bool, OracleError> {
    let maxes = enum_max_matchings(inst, bound)?;
    if maxes.first().is_some_and(|x| x.len() != m.len()) {
        return Ok(false);
    }
    Ok(maxes.iter().all(|n| {
        let (for_m, for_n) = votes(inst, m, n);
        for_m >= for_n
    }))
}

/// All popular max-matchings, in enumeration order.
pub fn brute_popular_max(inst: &Instance, bound: usize) -> Result<Vec<Matching>, OracleError> {
    let maxes = enum_max_matchings(inst, bound)?;
    Ok(maxes
        .iter()
        .filter(|m| {
            maxes.iter().all(|n| {
                let (for_m, for_n) = votes(inst, m, n);
                for_m >= for_n
            })
        })
        .cloned()
        .collect())
}

/// Cheapest popular max-matching; ties go to the lexicographically smallest
/// edge list.
pub fn brute_min_cost_popular_max(
    inst: &Instance,
    bound: usize,
) -> Result<(Matching, i64), OracleError> {
    let cost = |m: &Matching| -> i64 {
        m.edges()
            .map(|e| {
                let i = inst.edges().iter().position(|&x| x == e).expect("edge");
                inst.costs()[i]
            })
            .sum()
    };
    let best = brute_popular_max(inst, bound)?
        .into_iter()
        .map(|m| (cost(&m), m.to_edges(), m))
        .min_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)))
        .expect("a popular max-matching always exists");
    Ok((best.2, best.0))
}

/// `u(M)` as a reduced fraction, or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unpopularity {
    Finite { num: usize, den: usize },
    Infinite,
}

impl Unpopularity {
    /// True iff `self <= 1`.
    pub fn at_most_one(&self) -> bool {
        match *self {
            Unpopularity::Finite { num, den } => num <= den,
            Unpopularity::Infinite => false,
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Max over all matchings `N ≠ M` of `φ(N, M) / φ(M, N)`. A matching with
/// `φ(N, M) = 0` contributes 0; one with `φ(N, M) > 0 = φ(M, N)` makes the
/// factor infinite. Both votes are 0 only when `N = M`, which is skipped.
pub fn brute_unpopularity_factor(
    inst: &Instance,
    m: &Matching,
    bound: usize,
) -> Result<Unpopularity, OracleError> {
    let mut best = (0usize, 1usize);
    for n in enum_matchings(inst, bound)? {
        if &n == m {
            continue;
        }
        let (for_m, for_n) = votes(inst, m, &n);
        if for_n == 0 {
            continue;
        }
        if for_m == 0 {
            return Ok(Unpopularity::Infinite);
        }
        // for_n / for_m > best.0 / best.1
        if for_n * best.1 > best.0 * for_m {
            best = (for_n, for_m);
        }
    }
    let g = gcd(best.0, best.1).max(1);
    Ok(Unpopularity::Finite {
        num: best.0 / g,
        den: best.1 / g,
    })
}

/// No `N` makes somebody better off and nobody worse off.
pub fn brute_is_pareto_optimal(
    inst: &Instance,
    m: &Matching,
    bound: usize,
) -> Result<bool, OracleError> {
    Ok(enum_matchings(inst, bound)?.iter().all(|n| {
        let (for_m, for_n) = votes(inst, m, n);
        !(for_n > 0 && for_m == 0)
    }))
}

/// An edge both of whose endpoints strictly prefer each other to their
/// assignment.
pub fn brute_blocks(inst: &Instance, m: &Matching, e: Edge) -> bool {
    let la = inst.prefs_a(e.a);
    let lb = inst.prefs_b(e.b);
    pos(la, Some(e.b)) < pos(la, m.mate_a(e.a)) && pos(lb, Some(e.a)) < pos(lb, m.mate_b(e.b))
}

pub fn brute_stable(inst: &Instance, bound: usize) -> Result<Vec<Matching>, OracleError> {
    Ok(enum_matchings(inst, bound)?
        .into_iter()
        .filter(|m| inst.edges().iter().all(|&e| !brute_blocks(inst, m, e)))
        .collect())
}

/// First satisfying assignment in counting order (variable `i` is bit
/// `i - 1`), if any.
pub fn brute_sat(psi: &CnfFormula) -> Option<Vec<bool>> {
    let n = psi.num_vars();
    assert!(n < 31, "brute_sat is for tiny formulas");
    (0u32..1 << n)
        .map(|bits| (0..n).map(|i| bits >> i & 1 == 1).collect::<Vec<bool>>())
        .find(|x| {
            psi.clauses().iter().all(|c| {
                c.iter()
                    .any(|&l| x[l.unsigned_abs() as usize - 1] == (l > 0))
            })
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use alloc::vec;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enum_matchings(&i0(), DEFAULT_BOUND).unwrap().len(), 2);
        assert_eq!(enum_matchings(&i1(), DEFAULT_BOUND).unwrap().len(), 5);
        assert_eq!(enum_matchings(&i3(), DEFAULT_BOUND).unwrap().len(), 4);
        assert_eq!(enum_max_matchings(&i1(), DEFAULT_BOUND).unwrap().len(), 1);
        assert_eq!(enum_max_matchings(&i3(), DEFAULT_BOUND).unwrap().len(), 3);
        assert_eq!(enum_max_matchings(&i0(), DEFAULT_BOUND).unwrap().len(), 1);
        assert_eq!(
            enum_matchings(&i1(), 2),
            Err(OracleError::BoundExceeded { edges: 3, bound: 2 })
        );
    }

    #[test]
    fn popular_max_sets() {
        let i2 = i2();
        assert_eq!(brute_popular_max(&i2, DEFAULT_BOUND).unwrap().len(), 2);
        assert_eq!(brute_popular_max(&i1(), DEFAULT_BOUND).unwrap().len(), 1);
        let i3 = i3();
        assert_eq!(
            brute_popular_max(&i3, DEFAULT_BOUND).unwrap(),
            vec![m(&i3, &[("a1", "b1")])]
        );
    }

    #[test]
    fn min_cost() {
        let (mm, c) = brute_min_cost_popular_max(&i2_costed(), DEFAULT_BOUND).unwrap();
        assert_eq!(c, 0);
        assert_eq!(mm.len(), 2);
        let (_, c) = brute_min_cost_popular_max(&i0(), DEFAULT_BOUND).unwrap();
        assert_eq!(c, 0);
    }

    #[test]
    fn unpopularity() {
        let i5 = i5();
        assert_eq!(
            brute_unpopularity_factor(&i5, &m(&i5, &[("a1", "b1"), ("a2", "b2")]), DEFAULT_BOUND)
                .unwrap(),
            Unpopularity::Infinite
        );
        let i0 = i0();
        assert_eq!(
            brute_unpopularity_factor(&i0, &m(&i0, &[("a", "b")]), DEFAULT_BOUND).unwrap(),
            Unpopularity::Finite { num: 0, den: 1 }
        );
        let i2 = i2();
        let s = m(&i2, &[("a1", "b1"), ("a2", "b2")]);
        assert!(brute_unpopularity_factor(&i2, &s, DEFAULT_BOUND)
            .unwrap()
            .at_most_one());
    }

    #[test]
    fn stable_and_pareto() {
        assert_eq!(brute_stable(&i2(), DEFAULT_BOUND).unwrap().len(), 2);
        let i1 = i1();
        assert_eq!(
            brute_stable(&i1, DEFAULT_BOUND).unwrap(),
            vec![m(&i1, &[("a2", "b1")])]
        );
        assert!(brute_is_pareto_optimal(&i1, &m(&i1, &[("a2", "b1")]), DEFAULT_BOUND).unwrap());
        let i5 = i5();
        assert!(
            !brute_is_pareto_optimal(&i5, &m(&i5, &[("a1", "b1"), ("a2", "b2")]), DEFAULT_BOUND)
                .unwrap()
        );
    }

    #[test]
    fn sat() {
        let f = CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap();
        assert_eq!(brute_sat(&f), None);
        let g = CnfFormula::new(3, vec![vec![1, 2, 3]]).unwrap();
        assert_eq!(brute_sat(&g), Some(vec![true, false, false]));
        assert_eq!(brute_sat(&CnfFormula::new(0, vec![]).unwrap()), Some(vec![]));
    }
}
