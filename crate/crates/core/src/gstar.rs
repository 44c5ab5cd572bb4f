//! The auxiliary marriage instance `G*`.
//!
//! Every A node `a` of the source instance gets `n0 = |A|` copies
//! `a_0 … a_{n0-1}`, chained together by dummy nodes `d_1(a) … d_{n0-1}(a)`;
//! every B node `b` becomes an image `b̃` that ranks higher-subscript copies
//! above lower ones. Stable matchings of `G*` project onto exactly the
//! popular max-matchings of the source.
//!
//! Index layout of the inner instance:
//!
//! - copy `a_i` is A node `a * n0 + i`;
//! - image `b̃` is B node `b`;
//! - dummy `d_i(a)` is B node `|B| + a * (n0 - 1) + (i - 1)`.
//!
//! Names are `<a>#<i>`, `<a>!d<i>` and `<b>~`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::certificate::{self, CertificateError, DualCertificate};
use crate::instance::{Edge, Instance, Node, Side};
use crate::matching::Matching;
use crate::stable::{gale_shapley, is_stable};

/// Characters that source identifiers may not contain, because the derived
/// names use them.
pub const RESERVED_CHARS: [char; 3] = ['#', '!', '~'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GStarError {
    #[error("matching is not stable in G*")]
    NotStable,
    #[error("two copies of source node {0} are matched to images")]
    DuplicateCopy(usize),
    #[error("matching does not belong to this instance")]
    SizeMismatch,
    #[error("invalid certificate: {0}")]
    Certificate(#[from] CertificateError),
}

/// Role of a node of `G*` with respect to the source instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GStarNode {
    Copy { a: usize, level: usize },
    Dummy { a: usize, index: usize },
    Image { b: usize },
}

#[derive(Clone, Debug)]
pub struct GStarInstance {
    source: Instance,
    inner: Instance,
    n0: usize,
}

impl GStarInstance {
    pub fn source(&self) -> &Instance {
        &self.source
    }

    /// The derived marriage instance.
    pub fn inner(&self) -> &Instance {
        &self.inner
    }

    /// Number of copies per A node, `|A|` of the source.
    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn copy(&self, a: usize, level: usize) -> usize {
        debug_assert!(level < self.n0);
        a * self.n0 + level
    }

    pub fn image(&self, b: usize) -> usize {
        b
    }

    /// `d_index(a)`, for `1 <= index < n0`.
    pub fn dummy(&self, a: usize, index: usize) -> usize {
        debug_assert!(index >= 1 && index < self.n0);
        self.source.num_b() + a * (self.n0 - 1) + (index - 1)
    }

    pub fn role(&self, node: Node) -> GStarNode {
        match node {
            Node::A(x) => GStarNode::Copy {
                a: x / self.n0,
                level: x % self.n0,
            },
            Node::B(y) if y < self.source.num_b() => GStarNode::Image { b: y },
            Node::B(y) => {
                let k = y - self.source.num_b();
                GStarNode::Dummy {
                    a: k / (self.n0 - 1),
                    index: k % (self.n0 - 1) + 1,
                }
            }
        }
    }
}

/// First source identifier containing a reserved character, if any.
pub fn reserved_name(inst: &Instance) -> Option<&str> {
    inst.names_a()
        .iter()
        .chain(inst.names_b())
        .map(String::as_str)
        .find(|n| n.contains(&RESERVED_CHARS[..]))
}

pub fn build_gstar(inst: &Instance) -> GStarInstance {
    let n0 = inst.num_a();
    let (na, nb) = (inst.num_a(), inst.num_b());
    let dummies = n0.saturating_sub(1);
    let mut gs = GStarInstance {
        source: inst.clone(),
        inner: Instance::new(Vec::new(), Vec::new(), Vec::new(), Vec::new())
            .expect("empty instance"),
        n0,
    };

    let mut names_a = Vec::with_capacity(na * n0);
    let mut prefs_a = Vec::with_capacity(na * n0);
    for a in 0..na {
        let images: Vec<usize> = inst.prefs_a(a).iter().map(|&b| gs.image(b)).collect();
        for i in 0..n0 {
            names_a.push(format!("{}#{}", inst.name_a(a), i));
            let mut list = Vec::with_capacity(images.len() + 2);
            if i > 0 {
                list.push(gs.dummy(a, i));
            }
            list.extend_from_slice(&images);
            if i + 1 < n0 {
                list.push(gs.dummy(a, i + 1));
            }
            prefs_a.push(list);
        }
    }

    let mut names_b = Vec::with_capacity(nb + na * dummies);
    let mut prefs_b = Vec::with_capacity(nb + na * dummies);
    for b in 0..nb {
        names_b.push(format!("{}~", inst.name_b(b)));
        let mut list = Vec::with_capacity(inst.prefs_b(b).len() * n0);
        for i in (0..n0).rev() {
            list.extend(inst.prefs_b(b).iter().map(|&a| gs.copy(a, i)));
        }
        prefs_b.push(list);
    }
    for a in 0..na {
        for i in 1..n0 {
            names_b.push(format!("{}!d{}", inst.name_a(a), i));
            prefs_b.push(vec![gs.copy(a, i - 1), gs.copy(a, i)]);
        }
    }

    let base = Instance::new(names_a, names_b, prefs_a, prefs_b)
        .expect("G* lists are mutual by construction");
    let mut lifted = Vec::with_capacity(inst.num_edges() * n0);
    for e in inst.edges() {
        let c = inst.cost(*e).unwrap_or(0);
        if c != 0 {
            for i in 0..n0 {
                lifted.push((Edge::new(gs.copy(e.a, i), gs.image(e.b)), c));
            }
        }
    }
    gs.inner = base.with_costs(lifted).expect("lifted costs sit on image edges");
    gs
}

/// `S'`: drop dummy edges and rename `(a_i, b̃)` to `(a, b)`.
pub fn project(gs: &GStarInstance, s: &Matching) -> Result<Matching, GStarError> {
    if !s.fits(&gs.inner) {
        return Err(GStarError::SizeMismatch);
    }
    let mut out = Matching::empty_for(&gs.source);
    for e in s.edges() {
        if let GStarNode::Image { b } = gs.role(Node::B(e.b)) {
            let a = e.a / gs.n0;
            if out.mate_a(a).is_some() {
                return Err(GStarError::DuplicateCopy(a));
            }
            out.set(a, b);
        }
    }
    Ok(out)
}

/// Level of every source node, read off a stable matching of `G*`.
///
/// `A_i` (i < n0 − 1) holds the nodes whose copy `a_i` is matched to an
/// image; the rest of A is level `n0 − 1`. `B_i` (i ≥ 1) holds the nodes whose
/// image is matched to a subscript-`i` copy; the rest of B is level 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelPartition {
    pub level_a: Vec<usize>,
    pub level_b: Vec<usize>,
}

impl LevelPartition {
    pub fn level(&self, node: Node) -> usize {
        match node {
            Node::A(a) => self.level_a[a],
            Node::B(b) => self.level_b[b],
        }
    }
}

pub fn levels(gs: &GStarInstance, s: &Matching) -> Result<LevelPartition, GStarError> {
    if !s.fits(&gs.inner) {
        return Err(GStarError::SizeMismatch);
    }
    if !is_stable(&gs.inner, s) {
        return Err(GStarError::NotStable);
    }
    let top = gs.n0.saturating_sub(1);
    let mut level_a = vec![top; gs.source.num_a()];
    let mut level_b = vec![0; gs.source.num_b()];
    for e in s.edges() {
        if let GStarNode::Image { b } = gs.role(Node::B(e.b)) {
            let a = e.a / gs.n0;
            let i = e.a % gs.n0;
            level_a[a] = i;
            level_b[b] = i;
        }
    }
    Ok(LevelPartition { level_a, level_b })
}

/// A popular max-matching: A-proposing Gale-Shapley in `G*`, projected.
pub fn popular_max_matching(inst: &Instance) -> Matching {
    let gs = build_gstar(inst);
    let s = gale_shapley(&gs.inner, Side::A);
    project(&gs, &s).expect("stable matchings of G* project to matchings")
}

/// A stable matching of `G*` whose projection is `m`, built from a verified
/// dual certificate.
///
/// Certificate levels are re-anchored so that partners of the neighbours of
/// unmatched A nodes sit on the top copy `n0 − 1`; when `m` leaves no A node
/// unmatched the certificate levels are used as they are.
pub fn lift(
    gs: &GStarInstance,
    m: &Matching,
    cert: &DualCertificate,
) -> Result<Matching, GStarError> {
    let inst = &gs.source;
    let violations = certificate::verify_certificate(inst, m, cert)?;
    if !violations.is_empty() {
        return Err(CertificateError::Rejected(violations).into());
    }
    let floor = certificate::pair_levels(inst, m, cert);
    let top = gs.n0.saturating_sub(1);
    let pair_level = certificate::raise_levels(inst, m, floor, top)
        .ok_or(CertificateError::Unanchored)?;

    let mut s = Matching::empty_for(&gs.inner);
    for a in 0..inst.num_a() {
        let level = match m.mate_a(a) {
            Some(b) => {
                let i = pair_level[a];
                s.set(gs.copy(a, i), gs.image(b));
                i
            }
            None => top,
        };
        for j in 0..level {
            s.set(gs.copy(a, j), gs.dummy(a, j + 1));
        }
        for j in level + 1..gs.n0 {
            s.set(gs.copy(a, j), gs.dummy(a, j));
        }
    }
    debug_assert!(is_stable(&gs.inner, &s));
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::DualCertificate;
    use crate::fixtures::*;
    use crate::matching::is_maximum;
    use crate::popularity::verify_popular_max;
    use alloc::collections::BTreeMap;

    fn inner_names(gs: &GStarInstance, list: &[usize], side: Side) -> Vec<String> {
        list.iter()
            .map(|&x| match side {
                Side::A => gs.inner().name_a(x).into(),
                Side::B => gs.inner().name_b(x).into(),
            })
            .collect()
    }

    #[test]
    fn single_copy_is_isomorphic() {
        let i0 = i0();
        let gs = build_gstar(&i0);
        assert_eq!(gs.n0(), 1);
        assert_eq!(gs.inner().num_a(), 1);
        assert_eq!(gs.inner().num_b(), 1);
        assert_eq!(gs.inner().num_edges(), 1);
        assert_eq!(gs.inner().name_a(0), "a#0");
        assert_eq!(gs.inner().name_b(0), "b~");
    }

    #[test]
    fn sizes_for_i1() {
        let gs = build_gstar(&i1());
        assert_eq!(gs.inner().num_a(), 4);
        assert_eq!(gs.inner().num_b(), 4);
        assert_eq!(gs.inner().num_edges(), 10);
    }

    #[test]
    fn preference_orders() {
        let gs = build_gstar(&i1());
        let inner = gs.inner();
        // b1: a2 ≻ a1 in the source
        assert_eq!(
            inner_names(&gs, inner.prefs_b(gs.image(0)), Side::A),
            ["a2#1", "a1#1", "a2#0", "a1#0"]
        );
        // a2: b1 b2
        assert_eq!(
            inner_names(&gs, inner.prefs_a(gs.copy(1, 0)), Side::B),
            ["b1~", "b2~", "a2!d1"]
        );
        assert_eq!(
            inner_names(&gs, inner.prefs_a(gs.copy(1, 1)), Side::B),
            ["a2!d1", "b1~", "b2~"]
        );
        assert_eq!(
            inner_names(&gs, inner.prefs_b(gs.dummy(1, 1)), Side::A),
            ["a2#0", "a2#1"]
        );

        let gs = build_gstar(&i3());
        let inner = gs.inner();
        assert_eq!(
            inner_names(&gs, inner.prefs_a(gs.copy(0, 1)), Side::B),
            ["a1!d1", "b1~", "a1!d2"]
        );
        assert_eq!(gs.role(Node::B(gs.dummy(2, 2))), GStarNode::Dummy { a: 2, index: 2 });
        assert_eq!(gs.role(Node::A(gs.copy(2, 1))), GStarNode::Copy { a: 2, level: 1 });
    }

    fn i1_stable_preimage(gs: &GStarInstance) -> Matching {
        let inner = gs.inner();
        Matching::from_edges(
            inner,
            &[
                Edge::new(gs.copy(0, 1), gs.image(0)),
                Edge::new(gs.copy(1, 0), gs.image(1)),
                Edge::new(gs.copy(0, 0), gs.dummy(0, 1)),
                Edge::new(gs.copy(1, 1), gs.dummy(1, 1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn projection_examples() {
        let i1 = i1();
        let gs = build_gstar(&i1);
        let s = i1_stable_preimage(&gs);
        assert_eq!(project(&gs, &s).unwrap(), m(&i1, &[("a1", "b1"), ("a2", "b2")]));

        let dummies_only = Matching::from_edges(
            gs.inner(),
            &[
                Edge::new(gs.copy(0, 0), gs.dummy(0, 1)),
                Edge::new(gs.copy(1, 0), gs.dummy(1, 1)),
            ],
        )
        .unwrap();
        assert!(project(&gs, &dummies_only).unwrap().is_empty());

        let i2 = i2();
        let gs = build_gstar(&i2);
        let s = gale_shapley(gs.inner(), Side::A);
        assert!(crate::stable::is_stable(&i2, &project(&gs, &s).unwrap()));
    }

    #[test]
    fn duplicate_copies_rejected() {
        let i1 = i1();
        let gs = build_gstar(&i1);
        let s = Matching::from_edges(
            gs.inner(),
            &[
                Edge::new(gs.copy(1, 0), gs.image(0)),
                Edge::new(gs.copy(1, 1), gs.image(1)),
            ],
        )
        .unwrap();
        assert_eq!(project(&gs, &s), Err(GStarError::DuplicateCopy(1)));
    }

    #[test]
    fn level_examples() {
        let i0 = i0();
        let gs = build_gstar(&i0);
        let lp = levels(&gs, &gale_shapley(gs.inner(), Side::A)).unwrap();
        assert_eq!(lp.level_a, vec![0]);
        assert_eq!(lp.level_b, vec![0]);

        let i1 = i1();
        let gs = build_gstar(&i1);
        let lp = levels(&gs, &i1_stable_preimage(&gs)).unwrap();
        assert_eq!(lp.level_a, vec![1, 0]);
        assert_eq!(lp.level_b, vec![1, 0]);

        let i3 = i3();
        let gs = build_gstar(&i3);
        let s = gale_shapley(gs.inner(), Side::A);
        let lp = levels(&gs, &s).unwrap();
        let mm = project(&gs, &s).unwrap();
        for a in 0..3 {
            if mm.mate_a(a).is_none() {
                assert_eq!(lp.level_a[a], 2);
            }
        }

        let not_stable = Matching::empty_for(gs.inner());
        assert_eq!(levels(&gs, &not_stable), Err(GStarError::NotStable));
    }

    #[test]
    fn popular_max_examples() {
        let i0 = i0();
        assert_eq!(popular_max_matching(&i0), m(&i0, &[("a", "b")]));
        let i1 = i1();
        assert_eq!(
            popular_max_matching(&i1),
            m(&i1, &[("a1", "b1"), ("a2", "b2")])
        );
        let i3 = i3();
        let pm = popular_max_matching(&i3);
        assert_eq!(pm, m(&i3, &[("a1", "b1")]));
        assert!(is_maximum(&i3, &pm));
        assert!(verify_popular_max(&i3, &pm).unwrap().popular);
    }

    fn cert(inst: &Instance, vals: &[(&str, i64)]) -> DualCertificate {
        let alpha: BTreeMap<Node, i64> = vals
            .iter()
            .map(|(n, v)| (inst.lookup(n).unwrap(), *v))
            .collect();
        DualCertificate::new(alpha)
    }

    #[test]
    fn lift_examples() {
        let i0 = i0();
        let gs = build_gstar(&i0);
        let s = lift(&gs, &m(&i0, &[("a", "b")]), &cert(&i0, &[("a", 0), ("b", 0)])).unwrap();
        assert_eq!(s.to_edges(), vec![Edge::new(0, 0)]);

        let i1 = i1();
        let gs = build_gstar(&i1);
        let mm = m(&i1, &[("a1", "b1"), ("a2", "b2")]);
        let c = cert(&i1, &[("a1", -2), ("a2", 0), ("b1", 2), ("b2", 0)]);
        let s = lift(&gs, &mm, &c).unwrap();
        assert_eq!(s, i1_stable_preimage(&gs));
        assert!(is_stable(gs.inner(), &s));

        let bad = cert(&i1, &[("a1", 0), ("a2", 0), ("b1", 0), ("b2", 0)]);
        assert!(matches!(
            lift(&gs, &mm, &bad),
            Err(GStarError::Certificate(CertificateError::Rejected(_)))
        ));
    }

    #[test]
    fn lift_with_unmatched_a_nodes_uses_top_copy() {
        let i3 = i3();
        let gs = build_gstar(&i3);
        let mm = m(&i3, &[("a1", "b1")]);
        let s = lift(&gs, &mm, &cert(&i3, &[("a1", 0), ("b1", 0)])).unwrap();
        assert!(is_stable(gs.inner(), &s));
        assert_eq!(project(&gs, &s).unwrap(), mm);
        assert!(s.contains(Edge::new(gs.copy(0, 2), gs.image(0))));
    }

    #[test]
    fn reserved_names_detected() {
        assert_eq!(reserved_name(&i1()), None);
        let odd = build(&[("a#1", &["b"])], &[("b", &["a#1"])]);
        assert_eq!(reserved_name(&odd), Some("a#1"));
    }
}
