//! Exhaustive reference checkers for the two clusterability notions.

use crate::bits::{hamming_norm, BitVector};
use crate::dist::ExplicitDistribution;
use crate::{Error, Result};

const MASS_SLACK: f64 = 1e-12;

/// A center sequence with radius `eta` and mass slack `xi`.
#[derive(Clone, Debug)]
pub struct ClusteredAroundSpec {
    pub centers: Vec<BitVector>,
    pub eta: f64,
    pub xi: f64,
}

impl ClusteredAroundSpec {
    pub fn new(centers: Vec<BitVector>, eta: f64, xi: f64) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::InvalidParameter("center sequence must be non-empty".into()));
        }
        if eta <= 0.0 || eta >= 1.0 || xi <= 0.0 || xi >= 1.0 {
            return Err(Error::InvalidParameter("eta and xi must lie in (0,1)".into()));
        }
        Ok(Self { centers, eta, xi })
    }
}

/// Exhaustively decides whether the support partitions into at most `r`
/// parts of diameter at most `delta` plus a leftover of mass at most `zeta`.
///
/// Supports up to 12 vectors; a subset-DP computes the minimum number of
/// diameter-bounded parts covering each subset.
pub fn brute_is_clusterable(
    d: &ExplicitDistribution,
    zeta: f64,
    delta: f64,
    r: usize,
) -> Result<bool> {
    let s = d.support_size();
    if s > 12 {
        return Err(Error::InvalidParameter(format!(
            "brute_is_clusterable handles at most 12 support vectors, got {s}"
        )));
    }
    let vectors: Vec<&BitVector> = d.support().iter().map(|(v, _)| v).collect();
    let masses: Vec<f64> = d.support().iter().map(|(_, p)| *p).collect();
    let full = (1usize << s) - 1;

    // ok[mask]: the vectors of mask fit in one part of diameter <= delta.
    let mut ok = vec![true; full + 1];
    for mask in 1..=full {
        let members: Vec<usize> = (0..s).filter(|i| mask & (1 << i) != 0).collect();
        'outer: for (a, &i) in members.iter().enumerate() {
            for &j in members.iter().skip(a + 1) {
                if hamming_norm(vectors[i], vectors[j])? > delta {
                    ok[mask] = false;
                    break 'outer;
                }
            }
        }
    }

    // min_parts[mask]: fewest diameter-bounded parts covering mask.
    let mut min_parts = vec![usize::MAX; full + 1];
    min_parts[0] = 0;
    for mask in 1..=full {
        // iterate over submasks containing the lowest set bit
        let low = mask & mask.wrapping_neg();
        let mut sub = mask;
        while sub > 0 {
            if sub & low != 0 && ok[sub] && min_parts[mask ^ sub] != usize::MAX {
                min_parts[mask] = min_parts[mask].min(min_parts[mask ^ sub] + 1);
            }
            sub = (sub - 1) & mask;
        }
    }

    for leftover in 0..=full {
        let mass: f64 = (0..s).filter(|i| leftover & (1 << i) != 0).map(|i| masses[i]).sum();
        if mass <= zeta + MASS_SLACK && min_parts[full ^ leftover] <= r {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Decides whether all but an `xi` fraction of the mass lies within distance
/// `eta` of the center sequence.
pub fn brute_is_clustered_around(d: &ExplicitDistribution, spec: &ClusteredAroundSpec) -> Result<bool> {
    if d.support_size() > 64 {
        return Err(Error::InvalidParameter(format!(
            "brute_is_clustered_around handles at most 64 support vectors, got {}",
            d.support_size()
        )));
    }
    let mut near_mass = 0.0;
    for (v, p) in d.support() {
        let near = spec.centers.iter().any(|c| hamming_norm(v, c).unwrap_or(1.0) <= spec.eta);
        if near {
            near_mass += p;
        }
    }
    Ok(near_mass >= 1.0 - spec.xi - MASS_SLACK)
}
