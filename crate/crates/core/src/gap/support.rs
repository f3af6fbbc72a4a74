//! Desk-scale support testers: support size one, and bounded support size
//! over a decoded-vector stream.
//!
//! Both are stand-ins for cited subroutines, built on shared random index
//! sets; they are sound for the regimes they are used in here, where
//! distinct support vectors are far apart.

use crate::oracle::{HugeObjectOracle, SampleQueryAccess};
use crate::seeding::stream_rng;
use crate::{Result, Verdict};
use rand::seq::SliceRandom;
use std::collections::HashSet;

/// Tests whether the hidden distribution is a point mass: compares fresh
/// samples to the first one on a shared random index set.
pub fn support_one_test(oracle: &mut HugeObjectOracle, epsilon: f64, seed: u64) -> Result<Verdict> {
    assert!(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
    let n = oracle.dimension();
    let sample_count = (8.0 / epsilon).ceil() as usize;
    let index_count = ((16.0 * (1.0f64 / 0.05).ln()) / epsilon).ceil() as usize;
    let index_count = index_count.clamp(1, n);

    let mut rng = stream_rng(seed, 0);
    let mut indices: Vec<usize> = (1..=n).collect();
    indices.shuffle(&mut rng);
    indices.truncate(index_count);
    indices.sort_unstable();

    let first = oracle.draw_sample()?;
    let reference: Vec<u8> =
        indices.iter().map(|&j| oracle.query_bit(first, j)).collect::<Result<_>>()?;
    for _ in 1..sample_count {
        let sid = oracle.draw_sample()?;
        for (&j, &expected) in indices.iter().zip(&reference) {
            if oracle.query_bit(sid, j)? != expected {
                return Ok(Verdict::Reject);
            }
        }
    }
    Ok(Verdict::Accept)
}

/// A queried bit of a decoded vector; decoding may fail locally.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodedBit {
    Bit(u8),
    Invalid,
}

/// Per-index query access to a finite stream of decoded vectors.
pub trait DecodedVectorStream {
    /// Number of vectors available.
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    /// Dimension of the decoded vectors.
    fn dimension(&self) -> usize;
    /// Bit `j` (1-based) of vector `idx` (0-based).
    fn query(&mut self, idx: usize, j: usize) -> Result<DecodedBit>;
}

/// Tunable constants of the support estimator.
#[derive(Clone, Copy, Debug)]
pub struct SuppEstConstants {
    pub c_se: f64,
    pub c_si: f64,
}

impl Default for SuppEstConstants {
    fn default() -> Self {
        Self { c_se: 4.0, c_si: 8.0 }
    }
}

/// Accepts iff at most `s` distinct projected patterns appear on a shared
/// random index set; rejects on any locally invalid decode.
pub fn supp_est(
    stream: &mut dyn DecodedVectorStream,
    s: usize,
    epsilon: f64,
    seed: u64,
    constants: SuppEstConstants,
) -> Result<Verdict> {
    assert!(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
    assert!(s >= 1, "support bound must be positive");
    let n = stream.dimension();
    let vector_budget =
        (constants.c_se * s as f64 * (s as f64).ln() / (epsilon * epsilon)).ceil() as usize;
    let vector_count = stream.len().min(vector_budget);
    let index_count =
        (((constants.c_si * (s as f64).ln()) / epsilon).ceil() as usize).clamp(1, n);

    let mut rng = stream_rng(seed, 0);
    let mut indices: Vec<usize> = (1..=n).collect();
    indices.shuffle(&mut rng);
    indices.truncate(index_count);
    indices.sort_unstable();

    let mut patterns: HashSet<Vec<u8>> = HashSet::new();
    for idx in 0..vector_count {
        let mut pattern = Vec::with_capacity(indices.len());
        for &j in &indices {
            match stream.query(idx, j)? {
                DecodedBit::Bit(b) => pattern.push(b),
                DecodedBit::Invalid => return Ok(Verdict::Reject),
            }
        }
        patterns.insert(pattern);
        if patterns.len() > s {
            return Ok(Verdict::Reject);
        }
    }
    Ok(Verdict::Accept)
}

/// A stream backed by plain in-memory vectors (tests, miniatures).
pub struct VecStream {
    vectors: Vec<crate::bits::BitVector>,
    dimension: usize,
}

impl VecStream {
    pub fn new(vectors: Vec<crate::bits::BitVector>, dimension: usize) -> Self {
        Self { vectors, dimension }
    }
}

impl DecodedVectorStream for VecStream {
    fn len(&self) -> usize {
        self.vectors.len()
    }

    fn dimension(&self) -> usize {
        self.dimension
    }

    fn query(&mut self, idx: usize, j: usize) -> Result<DecodedBit> {
        Ok(DecodedBit::Bit(self.vectors[idx].get(j)?))
    }
}
