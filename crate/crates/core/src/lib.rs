//! Popular max-matchings in bipartite graphs with strict two-sided preferences.
//!
//! The crate is `no_std` (it needs `alloc`) and purely computational: the
//! companion `popmax` crate carries file formats, generators and the CLI.
//!
//! Layout:
//!
//! - [`instance`], [`matching`]: the data model, vote arithmetic and the
//!   `wt_M` edge weights.
//! - [`stable`]: Gale-Shapley and blocking edges.
//! - [`gstar`]: the auxiliary marriage instance whose stable matchings project
//!   onto the popular max-matchings, plus level partitions and lifting.
//! - [`popularity`]: popularity and Pareto-optimality verifiers with witnesses.
//! - [`certificate`]: dual certificates (extraction and verification).
//! - [`rotation`], [`flow`], [`mincost`]: rotation posets, max-flow and the
//!   exact min-cost solvers.
//! - [`oracle`]: exhaustive ground truth for small instances.
//! - [`hardness`]: the 3SAT gadget reduction for min-cost Pareto-optimality.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod certificate;
pub mod flow;
pub mod gstar;
pub mod hardness;
pub mod instance;
pub mod matching;
pub mod mincost;
pub mod oracle;
pub mod popularity;
pub mod rotation;
pub mod stable;

#[cfg(test)]
pub(crate) mod fixtures;

pub use certificate::{
    certify_popular_max, extract_certificate, verify_certificate, CertificateError,
    DualCertificate, Violation,
};
pub use gstar::{build_gstar, lift, popular_max_matching, GStarInstance, GStarNode, LevelPartition};
pub use instance::{Edge, Instance, InstanceBuilder, InstanceError, Node, Side};
pub use matching::{
    augmenting_path, compare, is_maximum, matching_cost, maximum_matching, wt_edge, Matching,
    MatchingError, VoteTally,
};
pub use mincost::{min_cost_popular_max, min_cost_stable, MinCostSolution};
pub use popularity::{is_pareto_optimal, verify_popular_max, PopularityVerdict, Witness, WitnessKind};
pub use stable::{blocking_edges, gale_shapley, is_stable};
