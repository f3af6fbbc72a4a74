//! Rounding a real-valued composition to an integer one.

use crate::{Error, Result};

/// Rounds non-negative reals summing to `n` into integers summing to `n`,
/// each being the floor or ceiling of its input.
///
/// Uses the largest-remainder method; ties go to the earlier index, so the
/// output is deterministic in the input order.
pub fn round_counts(alphas: &[f64], n: usize) -> Result<Vec<usize>> {
    let total: f64 = alphas.iter().sum();
    if alphas.iter().any(|&a| !a.is_finite() || a < 0.0) {
        return Err(Error::InvalidParameter("round_counts requires non-negative finite inputs".into()));
    }
    if (total - n as f64).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "round_counts inputs sum to {total}, expected {n}"
        )));
    }
    let mut counts: Vec<usize> = alphas.iter().map(|&a| a.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut remainders: Vec<(usize, f64)> =
        alphas.iter().enumerate().map(|(i, &a)| (i, a - a.floor())).collect();
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    for &(i, _) in remainders.iter().take(n.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    debug_assert_eq!(counts.iter().sum::<usize>(), n);
    Ok(counts)
}
