//! Instance generators for the gap property: base support-size distributions
//! over `[2n]` and their lift to encoded distributions over `{0,1}^N`.

use crate::bits::Permutation;
use crate::codes::{fe_encode, GapSystem};
use crate::dist::ExplicitDistribution;
use crate::gap::GapSpecialVectors;
use crate::instances::gen_far_codeword_set;
use crate::seeding::{derive_seed, stream_rng};
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeSet;

/// A distribution over `[2n]` with all weights multiples of `1/(2n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseDistribution {
    n: usize,
    /// `numerators[i]` over `2n`, for element `i+1`; sums to `2n`.
    numerators: Vec<u64>,
}

impl BaseDistribution {
    pub fn new(n: usize, numerators: Vec<u64>) -> Result<Self> {
        if numerators.len() != 2 * n {
            return Err(Error::InvalidParameter(format!(
                "expected 2n = {} numerators, got {}",
                2 * n,
                numerators.len()
            )));
        }
        let total: u64 = numerators.iter().sum();
        if total != 2 * n as u64 {
            return Err(Error::InvalidParameter(format!(
                "numerators sum to {total}, expected {}",
                2 * n
            )));
        }
        Ok(Self { n, numerators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    pub fn support_size(&self) -> usize {
        self.numerators.iter().filter(|&&x| x > 0).count()
    }

    /// Weight of element `i` (1-based over `[2n]`).
    pub fn weight(&self, i: usize) -> f64 {
        self.numerators[i - 1] as f64 / (2 * self.n) as f64
    }
}

/// Which side of the support-size gap to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuppHardMode {
    Yes,
    No,
}

/// Parameters of the support-size stand-in family. The generated pair only
/// reproduces the farness side of the construction (support `n` versus at
/// least `(1+2 eta) n`), not its indistinguishability.
#[derive(Clone, Debug)]
pub struct SuppHardParams {
    pub n_supp: usize,
    pub eta: f64,
    pub mode: SuppHardMode,
}

impl SuppHardParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_supp == 0 {
            return Err(Error::InvalidParameter("n_supp must be positive".into()));
        }
        if self.eta <= 0.0 || self.eta >= 0.125 {
            return Err(Error::InvalidParameter(format!("eta {} outside (0, 1/8)", self.eta)));
        }
        Ok(())
    }
}

/// Near-uniform distribution over a random subset of `[2n]`: exactly `n`
/// elements in yes mode, at least `(1+2 eta) n` in no mode, all weights
/// multiples of `1/(2n)`.
pub fn gen_supp_hard(p: &SuppHardParams, seed: u64) -> Result<BaseDistribution> {
    p.validate()?;
    let n = p.n_supp;
    let support = match p.mode {
        SuppHardMode::Yes => n,
        SuppHardMode::No => ((1.0 + 2.0 * p.eta) * n as f64).ceil() as usize,
    };
    let mut rng = stream_rng(seed, 0);
    let mut elements: Vec<usize> = (0..2 * n).collect();
    elements.shuffle(&mut rng);
    elements.truncate(support);

    // spread 2n units over the chosen elements: quotient everywhere, the
    // remainder one-per-element in selection order
    let total = 2 * n as u64;
    let q = total / support as u64;
    let r = (total % support as u64) as usize;
    let mut numerators = vec![0u64; 2 * n];
    for (rank, &e) in elements.iter().enumerate() {
        numerators[e] = q + u64::from(rank < r);
    }
    BaseDistribution::new(n, numerators)
}

/// An encoded gap instance: the final distribution plus the hidden index
/// permutation.
#[derive(Clone, Debug)]
pub struct GapInstance {
    pub distribution: ExplicitDistribution,
    pub sigma: Permutation,
}

/// Lifts a base distribution over `[2n]` to an encoded distribution over
/// `{0,1}^N`: special vectors carry `3 alpha`, element `i`'s mass spreads
/// over `z_count` fresh index messages applied to the `i`-th far payload
/// vector, and a uniformly random index permutation is applied at the end.
pub fn gen_gap_distribution(
    system: &GapSystem,
    base: &BaseDistribution,
    z_count: usize,
    seed: u64,
) -> Result<GapInstance> {
    let geo = &system.geo;
    if base.n() != geo.n {
        return Err(Error::LengthMismatch { left: base.n(), right: geo.n });
    }
    if z_count == 0 {
        return Err(Error::InvalidParameter("z_count must be positive".into()));
    }
    let alpha = geo.gap_alpha;
    if 3.0 * alpha >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "special mass 3/log2(n) = {} needs n > 8",
            3.0 * alpha
        )));
    }

    let payloads = gen_far_codeword_set(geo.n, 2 * geo.n, geo.n as f64 / 3.0, derive_seed(seed, 0))?;
    let specials = GapSpecialVectors::build(geo);
    let mut entries = specials.weighted(geo);

    let encoding_mass = 1.0 - 3.0 * alpha;
    let mut z_rng = stream_rng(seed, 1);
    for (idx, &numer) in base.numerators().iter().enumerate() {
        if numer == 0 {
            continue;
        }
        let weight = encoding_mass * numer as f64 / (2 * geo.n) as f64;
        let mut seen: BTreeSet<Vec<u16>> = BTreeSet::new();
        while seen.len() < z_count {
            let z: Vec<u16> =
                (0..geo.m).map(|_| z_rng.random_range(1..=geo.n as u16)).collect();
            seen.insert(z);
        }
        for z in seen {
            let enc = fe_encode(geo, &system.se, &system.ge, &z, &payloads[idx])?;
            entries.push((enc, weight / z_count as f64));
        }
    }

    let canonical = ExplicitDistribution::from_weighted(entries)?;
    let mut perm_rng = stream_rng(seed, 2);
    let sigma = Permutation::random(geo.n_total, &mut perm_rng);
    Ok(GapInstance { distribution: canonical.permute(&sigma)?, sigma })
}
