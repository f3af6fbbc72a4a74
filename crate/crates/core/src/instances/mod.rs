//! Generators for all hard and easy instance families, plus the
//! two-palindrome string property and its tester.

mod codewords;
mod gapdist;
mod palindrome;
mod pvc;

pub use codewords::gen_far_codeword_set;
pub use gapdist::{
    gen_gap_distribution, gen_supp_hard, BaseDistribution, GapInstance, SuppHardMode,
    SuppHardParams,
};
pub use palindrome::{
    encode_quad_string, gen_pal_yes, lift_one_p_test, pal_adaptive_test, QuadString,
    QuadStringOracle,
};
pub use pvc::{
    blow_up, gen_pvc_matrix, gen_pvc_no_query, gen_pvc_no_sample, gen_pvc_yes, PvcInstance,
    PvcMatrix, PvcParams,
};
