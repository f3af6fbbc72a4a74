//! Recovering the hidden index permutation from fully revealed samples.

use crate::bits::{BitVector, Permutation};
use crate::codes::GapGeometry;
use crate::oracle::{HugeObjectOracle, SampleQueryAccess};
use crate::Result;
use std::collections::BTreeMap;

/// A recovered permutation, oriented sample-to-canonical: `pi(i_star) = 1`
/// and `pi` maps the observed marker positions onto the canonical prefix.
#[derive(Clone, Debug)]
pub struct PermutationRecovery {
    pub pi: Permutation,
    pub i_star: usize,
    pub b_prime: Vec<usize>,
    inverse: Permutation,
}

impl PermutationRecovery {
    /// Sample-space positions of canonical chunk `j`, in canonical order.
    pub fn c_prime(&self, geo: &GapGeometry, j: usize) -> Vec<usize> {
        geo.c_indices(j).into_iter().map(|c| self.inverse.image(c)).collect()
    }

    /// Rewrites a sampled vector into canonical position order.
    pub fn canonicalize(&self, v: &BitVector) -> Result<BitVector> {
        crate::bits::apply_permutation(v, &self.inverse)
    }
}

/// Outcome of the recovery; failures carry the step that tripped.
#[derive(Clone, Debug)]
pub enum FindPermOutcome {
    Recovered(Box<PermutationRecovery>),
    Fail { step: u8 },
}

impl FindPermOutcome {
    pub fn failed_step(&self) -> Option<u8> {
        match self {
            FindPermOutcome::Fail { step } => Some(*step),
            FindPermOutcome::Recovered(_) => None,
        }
    }
}

/// Samples `ceil(c_fp log2(N)^2 / alpha)` vectors twice (identification,
/// then the residual-mass check) and reconstructs the permutation from the
/// special vectors.
pub fn find_permutation(
    oracle: &mut HugeObjectOracle,
    geo: &GapGeometry,
    seed: u64,
    c_fp: f64,
) -> Result<FindPermOutcome> {
    let _ = seed; // sampling randomness lives in the oracle stream
    let n_total = geo.n_total;
    let log2n = (n_total as f64).log2();
    let sample_count = (c_fp * log2n * log2n / geo.gap_alpha).ceil() as usize;

    // Step (i): fully revealed first batch.
    let mut batch = Vec::with_capacity(sample_count);
    for _ in 0..sample_count {
        let sid = oracle.draw_sample()?;
        batch.push(oracle.reveal_full(sid)?);
    }

    // Step (ii): the unique weight-one vector.
    let mut weight_one: Vec<&BitVector> = batch.iter().filter(|v| v.count_ones() == 1).collect();
    weight_one.sort();
    weight_one.dedup();
    if weight_one.len() != 1 {
        return Ok(FindPermOutcome::Fail { step: 2 });
    }
    let u_prime = weight_one[0].clone();
    let i_star = (1..=n_total).find(|&j| u_prime.get(j).unwrap() == 1).unwrap();

    // Step (iii): the chain vectors sharing a 1 at i_star.
    let mut chain: Vec<&BitVector> = batch
        .iter()
        .filter(|v| v.get(i_star).unwrap() == 1 && v.count_ones() >= 2)
        .collect();
    chain.sort();
    chain.dedup();
    if chain.len() != geo.b {
        return Ok(FindPermOutcome::Fail { step: 3 });
    }
    chain.sort_by_key(|v| v.count_ones());
    let mut mapping = vec![0usize; n_total]; // 1-based images, 0 = unset
    mapping[i_star - 1] = 1;
    let mut b_prime = Vec::with_capacity(geo.b);
    let mut prev: &BitVector = &u_prime;
    for (j, v) in chain.iter().enumerate() {
        if v.count_ones() != j + 2 {
            return Ok(FindPermOutcome::Fail { step: 3 });
        }
        let mut fresh = None;
        for pos in 1..=n_total {
            let now = v.get(pos).unwrap();
            let before = prev.get(pos).unwrap();
            if before == 1 && now == 0 {
                return Ok(FindPermOutcome::Fail { step: 3 });
            }
            if before == 0 && now == 1 {
                if fresh.is_some() {
                    return Ok(FindPermOutcome::Fail { step: 3 });
                }
                fresh = Some(pos);
            }
        }
        let Some(pos) = fresh else {
            return Ok(FindPermOutcome::Fail { step: 3 });
        };
        mapping[pos - 1] = j + 2;
        b_prime.push(pos);
        prev = v;
    }

    // Step (iv): pattern vectors, keyed by their marker-block prefix.
    let mut t_candidates: Vec<&BitVector> = batch
        .iter()
        .filter(|v| {
            v.get(i_star).unwrap() == 0 && b_prime.iter().any(|&p| v.get(p).unwrap() == 0)
        })
        .collect();
    t_candidates.sort();
    t_candidates.dedup();
    if t_candidates.is_empty() {
        return Ok(FindPermOutcome::Fail { step: 4 });
    }
    let t_count = geo.t_pattern_count();
    let mut by_prefix: BTreeMap<usize, Vec<&BitVector>> = BTreeMap::new();
    for v in t_candidates {
        let mut prefix = 0usize;
        for (t, &p) in b_prime.iter().enumerate() {
            prefix |= (v.get(p).unwrap() as usize) << t;
        }
        by_prefix.entry(prefix).or_default().push(v);
    }
    for prefix in t_count..(1 << geo.b) - 1 {
        if by_prefix.contains_key(&prefix) {
            return Ok(FindPermOutcome::Fail { step: 4 });
        }
    }
    let mut patterns = Vec::with_capacity(t_count);
    for t in 0..t_count {
        match by_prefix.get(&t) {
            Some(vs) if vs.len() == 1 => patterns.push(vs[0]),
            _ => return Ok(FindPermOutcome::Fail { step: 4 }),
        }
    }

    // Step (v): binary read-off of every remaining position.
    for pos in 1..=n_total {
        if mapping[pos - 1] != 0 {
            continue;
        }
        let mut offset = 0usize;
        for (t, w) in patterns.iter().enumerate() {
            offset |= (w.get(pos).unwrap() as usize) << t;
        }
        if geo.b + 2 + offset > n_total {
            return Ok(FindPermOutcome::Fail { step: 5 });
        }
        mapping[pos - 1] = geo.b + 2 + offset;
    }
    let Ok(pi) = Permutation::new(mapping) else {
        return Ok(FindPermOutcome::Fail { step: 5 });
    };

    // Step (vi): residual mass outside the encoding part.
    let mut outside = 0usize;
    for _ in 0..sample_count {
        let sid = oracle.draw_sample()?;
        let v = oracle.reveal_full(sid)?;
        let marker_ok =
            v.get(i_star)? == 0 && b_prime.iter().all(|&p| v.get(p).unwrap() == 1);
        if !marker_ok {
            outside += 1;
        }
    }
    if outside as f64 / sample_count as f64 > 4.0 * geo.gap_alpha {
        return Ok(FindPermOutcome::Fail { step: 6 });
    }

    let inverse = pi.inverse();
    Ok(FindPermOutcome::Recovered(Box::new(PermutationRecovery { pi, i_star, b_prime, inverse })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::apply_permutation;
    use crate::codes::GapSystem;
    use crate::dist::ExplicitDistribution;
    use crate::gap::GapSpecialVectors;
    use crate::seeding::{derive_seed, rng_from_seed, stream_rng};
    use rand::Rng;

    /// Canonical gap distribution with a handful of encoded payloads.
    fn canonical_distribution(sys: &GapSystem, seed: u64) -> ExplicitDistribution {
        let mut rng = rng_from_seed(seed);
        let geo = &sys.geo;
        let sp = GapSpecialVectors::build(geo);
        let mut entries = sp.weighted(geo);
        let remaining = 1.0 - 3.0 * geo.gap_alpha;
        let payloads = 4;
        for _ in 0..payloads {
            let z: Vec<u16> =
                (0..geo.m).map(|_| rng.random_range(1..=geo.n as u16)).collect();
            let x = BitVector::random(geo.n, &mut rng);
            let enc = crate::codes::fe_encode(geo, &sys.se, &sys.ge, &z, &x).unwrap();
            entries.push((enc, remaining / payloads as f64));
        }
        ExplicitDistribution::from_weighted(entries).unwrap()
    }

    #[test]
    fn identity_instance_recovers_identity() {
        let sys = GapSystem::build(4, 11).unwrap();
        let d = canonical_distribution(&sys, 12);
        let mut oracle = HugeObjectOracle::new(d, 13);
        let out = find_permutation(&mut oracle, &sys.geo, 14, 2.0).unwrap();
        match out {
            FindPermOutcome::Recovered(rec) => {
                assert!(rec.pi.is_identity());
                assert_eq!(rec.i_star, 1);
            }
            FindPermOutcome::Fail { step } => panic!("failed at step {step}"),
        }
    }

    #[test]
    fn permuted_instance_recovers_the_permutation() {
        let sys = GapSystem::build(4, 21).unwrap();
        let base = canonical_distribution(&sys, 22);
        let mut hits = 0;
        let trials = 30;
        for trial in 0..trials {
            let mut rng = stream_rng(23, trial);
            // apply sigma: sampled vectors are v such that v = canonical
            // pushed through sigma
            let sigma = Permutation::random(sys.geo.n_total, &mut rng);
            let d = base.permute(&sigma).unwrap();
            let mut oracle = HugeObjectOracle::new(d, derive_seed(24, trial));
            match find_permutation(&mut oracle, &sys.geo, derive_seed(25, trial), 2.0).unwrap() {
                FindPermOutcome::Recovered(rec) => {
                    // canonicalize must undo sigma on every support vector
                    let mut ok = true;
                    for (v, _) in base.support() {
                        let moved = apply_permutation(v, &sigma).unwrap();
                        if rec.canonicalize(&moved).unwrap() != *v {
                            ok = false;
                        }
                    }
                    if ok {
                        hits += 1;
                    }
                }
                FindPermOutcome::Fail { .. } => {}
            }
        }
        assert!(hits * 10 >= trials * 9, "{hits}/{trials} exact recoveries");
    }

    #[test]
    fn missing_indicator_fails_at_step_two() {
        let sys = GapSystem::build(4, 31).unwrap();
        let d = {
            let base = canonical_distribution(&sys, 32);
            // drop the indicator by renormalizing over the rest
            let entries: Vec<_> = base
                .support()
                .iter()
                .filter(|(v, _)| v.count_ones() != 1)
                .cloned()
                .collect();
            let total: f64 = entries.iter().map(|(_, p)| p).sum();
            ExplicitDistribution::from_weighted(
                entries.into_iter().map(|(v, p)| (v, p / total)).collect(),
            )
            .unwrap()
        };
        let mut oracle = HugeObjectOracle::new(d, 33);
        let out = find_permutation(&mut oracle, &sys.geo, 34, 2.0).unwrap();
        assert_eq!(out.failed_step(), Some(2));
    }

    #[test]
    fn heavy_mass_outside_encoding_fails_at_step_six() {
        // The residual-mass check only bites when 4 alpha < 1, so use l = 5
        // (alpha = 0.2). Surplus mass moves onto the indicator vector: the
        // structure of steps (ii)-(v) stays intact, but the fraction with a
        // broken encoding marker climbs to 0.85 > 4 alpha.
        let sys = GapSystem::build(5, 41).unwrap();
        let base = canonical_distribution(&sys, 42);
        let shift = 0.25;
        let encoding_mass = 1.0 - 3.0 * sys.geo.gap_alpha;
        let entries: Vec<(BitVector, f64)> = base
            .support()
            .iter()
            .map(|(v, p)| {
                if v.count_ones() == 1 {
                    (v.clone(), p + shift)
                } else if v.get(1).unwrap() == 0
                    && sys.geo.b_indices().iter().all(|&i| v.get(i).unwrap() == 1)
                {
                    (v.clone(), p * (encoding_mass - shift) / encoding_mass)
                } else {
                    (v.clone(), *p)
                }
            })
            .collect();
        let d = ExplicitDistribution::from_weighted(entries).unwrap();
        let mut step_six_fails = 0;
        for trial in 0..30 {
            let mut oracle = HugeObjectOracle::new(d.clone(), derive_seed(44, trial));
            let out = find_permutation(&mut oracle, &sys.geo, derive_seed(45, trial), 2.0).unwrap();
            if out.failed_step() == Some(6) {
                step_six_fails += 1;
            }
        }
        assert!(step_six_fails >= 27, "{step_six_fails}/30 trials failed at step six");
    }
}
