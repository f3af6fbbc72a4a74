//! Binary vectors and index permutations.

use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A fixed-length binary string, the sample-space element of `{0,1}^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitVector {
    bits: Vec<u8>,
}

impl BitVector {
    /// Builds from raw bits; every entry must be 0 or 1 and `bits` non-empty.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidParameter("BitVector must be non-empty".into()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidParameter("BitVector entries must be 0 or 1".into()));
        }
        Ok(Self { bits })
    }

    /// Parses a string of '0'/'1' characters.
    pub fn parse(s: &str) -> Result<Self> {
        let bits: Result<Vec<u8>> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidParameter(format!("invalid bit character {other:?}"))),
            })
            .collect();
        Self::new(bits?)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "BitVector length must be positive");
        Self { bits: vec![0; n] }
    }

    pub fn ones(n: usize) -> Self {
        assert!(n > 0, "BitVector length must be positive");
        Self { bits: vec![1; n] }
    }

    /// Uniformly random vector of length `n`.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        assert!(n > 0, "BitVector length must be positive");
        Self { bits: (0..n).map(|_| rng.random_range(0..2u8)).collect() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Bit at 1-based position `j`.
    pub fn get(&self, j: usize) -> Result<u8> {
        if j == 0 || j > self.bits.len() {
            return Err(Error::IndexOutOfRange { index: j, len: self.bits.len() });
        }
        Ok(self.bits[j - 1])
    }

    pub fn set(&mut self, j: usize, value: u8) -> Result<()> {
        if j == 0 || j > self.bits.len() {
            return Err(Error::IndexOutOfRange { index: j, len: self.bits.len() });
        }
        self.bits[j - 1] = value & 1;
        Ok(())
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Projection onto a sequence of 1-based indices, preserving order.
    pub fn project(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidParameter("projection index set must be non-empty".into()));
        }
        let mut out = Vec::with_capacity(indices.len());
        for &j in indices {
            out.push(self.get(j)?);
        }
        Ok(Self { bits: out })
    }

    /// Concatenation of `parts` (must be non-empty overall).
    pub fn concat(parts: &[&BitVector]) -> Self {
        let mut bits = Vec::new();
        for p in parts {
            bits.extend_from_slice(&p.bits);
        }
        assert!(!bits.is_empty());
        Self { bits }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// A bijection on `[size]`, stored as 1-based images.
///
/// Applying `p` to a vector `v` yields the vector whose `i`-th entry reads
/// the source position `p(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    /// Builds from 1-based images; must be a bijection on `[mapping.len()]`.
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        if mapping.is_empty() {
            return Err(Error::InvalidParameter("permutation size must be positive".into()));
        }
        let n = mapping.len();
        let mut seen = vec![false; n + 1];
        for &m in &mapping {
            if m == 0 || m > n || seen[m] {
                return Err(Error::InvalidParameter(format!("mapping is not a bijection on [{n}]")));
            }
            seen[m] = true;
        }
        Ok(Self { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self { mapping: (1..=n).collect() }
    }

    /// Uniformly random permutation of `[n]`.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let mut mapping: Vec<usize> = (1..=n).collect();
        mapping.shuffle(rng);
        Self { mapping }
    }

    pub fn size(&self) -> usize {
        self.mapping.len()
    }

    /// Image of the 1-based point `i`.
    pub fn image(&self, i: usize) -> usize {
        self.mapping[i - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.mapping
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.mapping.len()];
        for (i, &m) in self.mapping.iter().enumerate() {
            inv[m - 1] = i + 1;
        }
        Self { mapping: inv }
    }

    /// Composition such that `apply(v, p.compose(&q)) == apply(apply(v, p), q)`.
    pub fn compose(&self, after: &Permutation) -> Result<Self> {
        if self.size() != after.size() {
            return Err(Error::LengthMismatch { left: self.size(), right: after.size() });
        }
        Ok(Self { mapping: after.mapping.iter().map(|&i| self.mapping[i - 1]).collect() })
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &m)| m == i + 1)
    }
}

/// Permutes `v` so that the result at position `i` reads source position `p(i)`.
pub fn apply_permutation(v: &BitVector, p: &Permutation) -> Result<BitVector> {
    if v.len() != p.size() {
        return Err(Error::LengthMismatch { left: v.len(), right: p.size() });
    }
    let bits = p.as_slice().iter().map(|&src| v.as_slice()[src - 1]).collect();
    BitVector::new(bits)
}

/// Normalized Hamming distance `|{i : u_i != v_i}| / n`.
pub fn hamming_norm(u: &BitVector, v: &BitVector) -> Result<f64> {
    Ok(hamming_abs(u, v)? as f64 / u.len() as f64)
}

/// Absolute Hamming distance.
pub fn hamming_abs(u: &BitVector, v: &BitVector) -> Result<usize> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch { left: u.len(), right: v.len() });
    }
    Ok(u.as_slice().iter().zip(v.as_slice()).filter(|(a, b)| a != b).count())
}
