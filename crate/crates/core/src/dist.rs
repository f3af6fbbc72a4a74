//! Finite-support probability distributions over the Hamming cube, plus the
//! on-disk text format.
//!
//! File format, one record per line: `<probability><TAB><bitstring>` where the
//! probability is either a decimal or an exact rational `p/q` (converted on
//! load). Lines starting with `#` are comments. The dimension is inferred from
//! the first record and enforced afterwards.

use crate::bits::{apply_permutation, BitVector, Permutation};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

const MASS_TOLERANCE: f64 = 1e-12;

/// An explicit distribution over `{0,1}^n`: strictly positive probabilities
/// on pairwise distinct support vectors, summing to 1 within `1e-12`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplicitDistribution {
    dimension: usize,
    support: Vec<(BitVector, f64)>,
}

impl ExplicitDistribution {
    pub fn new(support: Vec<(BitVector, f64)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let dimension = support[0].0.len();
        let mut seen = HashMap::new();
        let mut total = 0.0f64;
        for (v, p) in &support {
            if v.len() != dimension {
                return Err(Error::InvalidDistribution(format!(
                    "support vector {v} has length {} but dimension is {dimension}",
                    v.len()
                )));
            }
            if !p.is_finite() || *p <= 0.0 {
                return Err(Error::InvalidDistribution(format!("probability {p} of {v} is not strictly positive")));
            }
            if seen.insert(v.clone(), ()).is_some() {
                return Err(Error::InvalidDistribution(format!("duplicate support vector {v}")));
            }
            total += p;
        }
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}, expected 1")));
        }
        Ok(Self { dimension, support })
    }

    /// Builds from possibly-duplicated weighted vectors by merging duplicates.
    pub fn from_weighted(entries: Vec<(BitVector, f64)>) -> Result<Self> {
        let mut order: Vec<BitVector> = Vec::new();
        let mut acc: HashMap<BitVector, f64> = HashMap::new();
        for (v, p) in entries {
            if !acc.contains_key(&v) {
                order.push(v.clone());
            }
            *acc.entry(v).or_insert(0.0) += p;
        }
        let support = order
            .into_iter()
            .filter_map(|v| {
                let p = acc[&v];
                (p > 0.0).then_some((v, p))
            })
            .collect();
        Self::new(support)
    }

    pub fn point_mass(v: BitVector) -> Self {
        Self { dimension: v.len(), support: vec![(v, 1.0)] }
    }

    /// Uniform distribution over distinct vectors.
    pub fn uniform(vectors: Vec<BitVector>) -> Result<Self> {
        let p = 1.0 / vectors.len() as f64;
        Self::new(vectors.into_iter().map(|v| (v, p)).collect())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn support(&self) -> &[(BitVector, f64)] {
        &self.support
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    pub fn probability_of(&self, v: &BitVector) -> f64 {
        self.support.iter().find(|(u, _)| u == v).map_or(0.0, |(_, p)| *p)
    }

    /// Pushforward under an index permutation; total mass is preserved.
    pub fn permute(&self, p: &Permutation) -> Result<Self> {
        if p.size() != self.dimension {
            return Err(Error::LengthMismatch { left: self.dimension, right: p.size() });
        }
        let support: Result<Vec<_>> =
            self.support.iter().map(|(v, w)| Ok((apply_permutation(v, p)?, *w))).collect();
        Ok(Self { dimension: self.dimension, support: support? })
    }

    /// Parses the text format described in the module docs.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut support = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut parts = trimmed.split('\t');
            let (prob_str, bits_str) = match (parts.next(), parts.next(), parts.next()) {
                (Some(p), Some(b), None) => (p.trim(), b.trim()),
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "expected `<probability><TAB><bitstring>`".into(),
                    })
                }
            };
            let prob = parse_probability(prob_str).map_err(|message| Error::Parse { line: lineno, message })?;
            let vector = BitVector::parse(bits_str)
                .map_err(|e| Error::Parse { line: lineno, message: e.to_string() })?;
            support.push((vector, prob));
        }
        Self::new(support)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read(std::io::BufReader::new(file))
    }

    /// Writes the text format with full-precision decimal probabilities.
    pub fn write<W: Write>(&self, mut writer: W) -> Result<()> {
        for (v, p) in &self.support {
            writeln!(writer, "{p:.17e}\t{v}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        self.write(&mut file)
    }
}

fn parse_probability(s: &str) -> std::result::Result<f64, String> {
    if let Some((num, den)) = s.split_once('/') {
        let p: u64 = num.trim().parse().map_err(|_| format!("invalid rational numerator {num:?}"))?;
        let q: u64 = den.trim().parse().map_err(|_| format!("invalid rational denominator {den:?}"))?;
        if q == 0 {
            return Err("rational with zero denominator".into());
        }
        Ok(p as f64 / q as f64)
    } else {
        s.parse::<f64>().map_err(|_| format!("invalid probability {s:?}"))
    }
}
