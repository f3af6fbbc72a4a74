//! Sample-and-query access to a hidden distribution with exact budget
//! accounting.
//!
//! A tester never sees the distribution itself: it draws samples (whole
//! hidden vectors) and pays one query per revealed bit. Repeated queries to
//! the same cell re-increment the counter (conservative accounting).

use crate::bits::BitVector;
use crate::dist::ExplicitDistribution;
use crate::seeding::{rng_from_seed, Prng};
use crate::{Error, Result};
use rand::Rng;

/// Identifier of a drawn sample, in draw order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SampleId(pub usize);

/// Optional caps on the number of samples and queries.
#[derive(Clone, Copy, Debug, Default)]
pub struct QueryBudget {
    pub max_samples: Option<u64>,
    pub max_queries: Option<u64>,
}

impl QueryBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn new(max_samples: Option<u64>, max_queries: Option<u64>) -> Self {
        Self { max_samples, max_queries }
    }
}

/// Abstract sample-and-query access; implemented by [`HugeObjectOracle`] and
/// by synthetic oracles in tests and structural checks.
pub trait SampleQueryAccess {
    /// Dimension `n` of the hidden vectors.
    fn dimension(&self) -> usize;
    /// Draws a fresh sample, returning its id.
    fn draw_sample(&mut self) -> Result<SampleId>;
    /// Reveals bit `j` (1-based) of a previously drawn sample.
    fn query_bit(&mut self, sid: SampleId, j: usize) -> Result<u8>;
    fn samples_taken(&self) -> u64;
    fn queries_made(&self) -> u64;
}

/// The standard oracle over an [`ExplicitDistribution`].
pub struct HugeObjectOracle {
    distribution: ExplicitDistribution,
    cumulative: Vec<f64>,
    rng: Prng,
    held_samples: Vec<BitVector>,
    samples_taken: u64,
    queries_made: u64,
    budget: QueryBudget,
}

impl HugeObjectOracle {
    pub fn new(distribution: ExplicitDistribution, rng_seed: u64) -> Self {
        Self::with_budget(distribution, rng_seed, QueryBudget::unlimited())
    }

    pub fn with_budget(distribution: ExplicitDistribution, rng_seed: u64, budget: QueryBudget) -> Self {
        let mut acc = 0.0;
        let cumulative = distribution
            .support()
            .iter()
            .map(|(_, p)| {
                acc += p;
                acc
            })
            .collect();
        Self {
            distribution,
            cumulative,
            rng: rng_from_seed(rng_seed),
            held_samples: Vec::new(),
            samples_taken: 0,
            queries_made: 0,
            budget,
        }
    }

    /// Reveals the whole vector of a sample, paying `n` queries.
    pub fn reveal_full(&mut self, sid: SampleId) -> Result<BitVector> {
        let n = self.dimension() as u64;
        if let Some(max) = self.budget.max_queries {
            if self.queries_made + n > max {
                return Err(Error::BudgetExceeded(format!("query budget {max} reached")));
            }
        }
        let v = self
            .held_samples
            .get(sid.0)
            .cloned()
            .ok_or(Error::UnknownSample(sid.0))?;
        self.queries_made += n;
        Ok(v)
    }

    /// Number of distinct support vectors of the hidden distribution.
    /// Available to the harness for reporting, never to testers.
    pub fn hidden_support_size(&self) -> usize {
        self.distribution.support_size()
    }
}

impl SampleQueryAccess for HugeObjectOracle {
    fn dimension(&self) -> usize {
        self.distribution.dimension()
    }

    fn draw_sample(&mut self) -> Result<SampleId> {
        if let Some(max) = self.budget.max_samples {
            if self.samples_taken >= max {
                return Err(Error::BudgetExceeded(format!("sample budget {max} reached")));
            }
        }
        let u: f64 = self.rng.random();
        let idx = match self.cumulative.binary_search_by(|c| c.partial_cmp(&u).unwrap()) {
            Ok(i) => i + 1,
            Err(i) => i,
        };
        let idx = idx.min(self.distribution.support_size() - 1);
        self.held_samples.push(self.distribution.support()[idx].0.clone());
        self.samples_taken += 1;
        Ok(SampleId(self.held_samples.len() - 1))
    }

    fn query_bit(&mut self, sid: SampleId, j: usize) -> Result<u8> {
        if let Some(max) = self.budget.max_queries {
            if self.queries_made >= max {
                return Err(Error::BudgetExceeded(format!("query budget {max} reached")));
            }
        }
        let v = self.held_samples.get(sid.0).ok_or(Error::UnknownSample(sid.0))?;
        let bit = v.get(j)?;
        self.queries_made += 1;
        Ok(bit)
    }

    fn samples_taken(&self) -> u64 {
        self.samples_taken
    }

    fn queries_made(&self) -> u64 {
        self.queries_made
    }
}

/// Oracle whose samples are all equal to a constant vector; used by the
/// structural non-adaptiveness check.
pub struct ConstantOracle {
    bit: u8,
    dimension: usize,
    samples_taken: u64,
    queries_made: u64,
}

impl ConstantOracle {
    pub fn new(bit: u8, dimension: usize) -> Self {
        Self { bit: bit & 1, dimension, samples_taken: 0, queries_made: 0 }
    }
}

impl SampleQueryAccess for ConstantOracle {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn draw_sample(&mut self) -> Result<SampleId> {
        self.samples_taken += 1;
        Ok(SampleId(self.samples_taken as usize - 1))
    }

    fn query_bit(&mut self, sid: SampleId, j: usize) -> Result<u8> {
        if sid.0 as u64 >= self.samples_taken {
            return Err(Error::UnknownSample(sid.0));
        }
        if j == 0 || j > self.dimension {
            return Err(Error::IndexOutOfRange { index: j, len: self.dimension });
        }
        self.queries_made += 1;
        Ok(self.bit)
    }

    fn samples_taken(&self) -> u64 {
        self.samples_taken
    }

    fn queries_made(&self) -> u64 {
        self.queries_made
    }
}
