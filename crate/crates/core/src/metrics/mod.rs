//! Distances: Hamming, projected estimates, exact EMD, and
//! permutation-minimized matrix distance.

mod assignment;
mod emd;
mod matrix;

pub use assignment::min_cost_assignment;
pub use emd::{emd_exact, FlowSolution};
pub use matrix::{
    emd_up_to_index_permutation, min_perm_matrix_distance, CorrespondingMatrix, PermutationMode,
};

use crate::bits::BitVector;
use crate::{Error, Result};

pub use crate::bits::{hamming_abs, hamming_norm};

/// Normalized Hamming distance of `u` and `v` restricted to the index set `K`
/// (1-based, drawn without replacement by the caller).
pub fn projected_distance(u: &BitVector, v: &BitVector, k: &[usize]) -> Result<f64> {
    if k.is_empty() {
        return Err(Error::InvalidParameter("projection index set must be non-empty".into()));
    }
    let pu = u.project(k)?;
    let pv = v.project(k)?;
    hamming_norm(&pu, &pv)
}
