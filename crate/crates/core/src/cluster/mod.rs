//! Learning clusterable distributions by sampling and projected distances,
//! and the bounded-VC learner and tester built on top.

mod brute;
mod learn;
mod params;
mod rounding;
mod vc;

pub use brute::{brute_is_clusterable, brute_is_clustered_around, ClusteredAroundSpec};
pub use learn::{
    approx_centers, assign_to_centers, test_and_learn, CenterAssignment, LearnOutcome, LearnTag,
};
pub use params::{ClusterLearnParams, VcLearnParams};
pub use rounding::round_counts;
pub use vc::{haussler_radius, learn_close_vc, test_vc_property};
