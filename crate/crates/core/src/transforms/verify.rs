//! Structural non-adaptiveness check: the query cells must not depend on
//! the answers.

use crate::oracle::ConstantOracle;
use crate::transforms::tester::{run_tester, TesterProgram};
use crate::Result;

/// Replays the tester against the all-zeros and all-ones oracles; true iff
/// the `(slot, index)` query multisets coincide for the given coins.
pub fn verify_nonadaptive(t: &TesterProgram, n: usize, seed: u64) -> Result<bool> {
    let mut zero = ConstantOracle::new(0, n);
    let mut one = ConstantOracle::new(1, n);
    let mut cells_zero = run_tester(t, &mut zero, seed)?.queries;
    let mut cells_one = run_tester(t, &mut one, seed)?.queries;
    cells_zero.sort_unstable();
    cells_one.sort_unstable();
    Ok(cells_zero == cells_one)
}
