//! The gap property machinery: special vectors, permutation recovery, the
//! support estimators, and the adaptive tester.

mod adaptive;
mod find_perm;
mod special;
mod support;

pub use adaptive::{alg_adaptive, GapConstants, GapRejectReason, GapRunReport};
pub use find_perm::{find_permutation, FindPermOutcome, PermutationRecovery};
pub use special::GapSpecialVectors;
pub use support::{
    supp_est, support_one_test, DecodedBit, DecodedVectorStream, SuppEstConstants, VecStream,
};
