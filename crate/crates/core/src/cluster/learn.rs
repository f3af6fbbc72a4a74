//! The sample-and-project cluster learner and its center reconstruction.

use crate::bits::BitVector;
use crate::cluster::{round_counts, ClusterLearnParams};
use crate::dist::ExplicitDistribution;
use crate::metrics::hamming_norm;
use crate::oracle::{HugeObjectOracle, SampleQueryAccess};
use crate::seeding::stream_rng;
use crate::Result;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LearnTag {
    Learned,
    Fail,
}

/// Result of one learner run. Assignment weights are kept on `Fail` too so
/// the fail/weight dichotomy can be checked from the outside.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LearnOutcome {
    pub tag: LearnTag,
    /// Learned distribution, present iff `tag == Learned`.
    pub distribution: Option<ExplicitDistribution>,
    /// Reconstructed centers, one per first-batch sample (duplicates kept).
    pub centers: Vec<BitVector>,
    /// Assignment weights `w_1..w_t1` (fractions of the second batch).
    pub weights: Vec<f64>,
    /// Unassigned fraction `w_0`.
    pub unassigned_fraction: f64,
    /// Whether the dimension was large enough for the reconstruction
    /// guarantee (`n >= 20 * 2^t1 / delta`).
    pub large_dimension_regime: bool,
    /// Oracle samples consumed by this run.
    pub samples_used: u64,
    /// Oracle queries consumed by this run.
    pub queries_used: u64,
}

/// Per-sample assignment of the second batch to first-batch centers.
#[derive(Clone, Debug)]
pub struct CenterAssignment {
    /// For each sample, the 0-based index of its center, if any.
    pub assigned: Vec<Option<usize>>,
    /// Number of samples assigned to each center.
    pub counts: Vec<usize>,
    pub unassigned: usize,
}

impl CenterAssignment {
    pub fn total(&self) -> usize {
        self.assigned.len()
    }

    pub fn unassigned_fraction(&self) -> f64 {
        self.unassigned as f64 / self.total() as f64
    }

    pub fn weights(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.total() as f64).collect()
    }
}

/// Assigns each projected sample to the minimum-index projected center
/// within distance `2 delta`, or to none.
pub fn assign_to_centers(
    center_projs: &[BitVector],
    sample_projs: &[BitVector],
    delta: f64,
) -> CenterAssignment {
    let threshold = 2.0 * delta;
    let mut counts = vec![0usize; center_projs.len()];
    let mut unassigned = 0usize;
    let assigned: Vec<Option<usize>> = sample_projs
        .iter()
        .map(|y| {
            let hit = center_projs
                .iter()
                .position(|x| hamming_norm(y, x).expect("projections share an index set") <= threshold);
            match hit {
                Some(i) => counts[i] += 1,
                None => unassigned += 1,
            }
            hit
        })
        .collect();
    CenterAssignment { assigned, counts, unassigned }
}

/// Reconstructs full-length centers from their projections by replicating
/// column types proportionally.
///
/// Only the size of the index sample matters here, carried by the projection
/// length; the columns of the projected center matrix are histogrammed by
/// type, the type fractions are rounded to counts summing to `n`, and the
/// rows of the replicated matrix are returned.
pub fn approx_centers(center_projs: &[BitVector], n: usize) -> Result<Vec<BitVector>> {
    let t1 = center_projs.len();
    assert!(t1 >= 1, "need at least one projected center");
    let r_len = center_projs[0].len();

    let mut type_counts: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    for pos in 1..=r_len {
        let column: Vec<u8> = center_projs.iter().map(|x| x.get(pos).unwrap()).collect();
        *type_counts.entry(column).or_insert(0) += 1;
    }

    let types: Vec<&Vec<u8>> = type_counts.keys().collect();
    let alphas: Vec<f64> =
        type_counts.values().map(|&c| c as f64 / r_len as f64 * n as f64).collect();
    let gammas = round_counts(&alphas, n)?;

    let mut rows = vec![Vec::with_capacity(n); t1];
    for (ty, &count) in types.iter().zip(&gammas) {
        for _ in 0..count {
            for (row, &bit) in rows.iter_mut().zip(ty.iter()) {
                row.push(bit);
            }
        }
    }
    rows.into_iter().map(BitVector::new).collect()
}

/// Runs the full learner: two sample batches, a shared random index set,
/// projected assignment, the fail threshold, and center reconstruction.
///
/// Consumes exactly `t1 + t2` samples and `(t1 + t2) * |R|` queries.
pub fn test_and_learn(
    oracle: &mut HugeObjectOracle,
    params: &ClusterLearnParams,
    seed: u64,
) -> Result<LearnOutcome> {
    let n = oracle.dimension();
    let samples_before = oracle.samples_taken();
    let queries_before = oracle.queries_made();
    let large_dimension_regime = params.large_dimension_regime(n);

    // Steps (i)-(ii): the two sample batches.
    let s_ids: Vec<_> = (0..params.t1).map(|_| oracle.draw_sample()).collect::<Result<_>>()?;
    let t_ids: Vec<_> = (0..params.t2).map(|_| oracle.draw_sample()).collect::<Result<_>>()?;

    // Step (iii): random index subset of size |R| (clamped to n), queried in
    // every sample of both batches.
    let r_size = params.r_size(n);
    let mut rng = stream_rng(seed, 0);
    let mut all_indices: Vec<usize> = (1..=n).collect();
    all_indices.shuffle(&mut rng);
    let mut r_indices: Vec<usize> = all_indices.into_iter().take(r_size).collect();
    r_indices.sort_unstable();

    let project = |ids: &[crate::oracle::SampleId],
                       oracle: &mut HugeObjectOracle|
     -> Result<Vec<BitVector>> {
        ids.iter()
            .map(|&sid| {
                let bits: Result<Vec<u8>> =
                    r_indices.iter().map(|&j| oracle.query_bit(sid, j)).collect();
                BitVector::new(bits?)
            })
            .collect()
    };
    let center_projs = project(&s_ids, oracle)?;
    let sample_projs = project(&t_ids, oracle)?;

    // Step (iv): nearest-center assignment at threshold 2 delta.
    let assignment = assign_to_centers(&center_projs, &sample_projs, params.delta);
    let weights = assignment.weights();
    let w0 = assignment.unassigned_fraction();

    // Step (v): fail iff more than a 3 zeta fraction is unassigned.
    if assignment.unassigned as f64 > 3.0 * params.zeta * params.t2 as f64 {
        return Ok(LearnOutcome {
            tag: LearnTag::Fail,
            distribution: None,
            centers: Vec::new(),
            weights,
            unassigned_fraction: w0,
            large_dimension_regime,
            samples_used: oracle.samples_taken() - samples_before,
            queries_used: oracle.queries_made() - queries_before,
        });
    }

    // Steps (vii)-(viii): reconstruct centers and emit any distribution with
    // mass at least w_i on center i; the slack goes to the first center.
    let centers = approx_centers(&center_projs, n)?;
    let mut entries: Vec<(BitVector, f64)> = Vec::new();
    for (center, &w) in centers.iter().zip(&weights) {
        if w > 0.0 {
            entries.push((center.clone(), w));
        }
    }
    entries.push((centers[0].clone(), w0.max(0.0)));
    let distribution = ExplicitDistribution::from_weighted(
        entries.into_iter().filter(|(_, p)| *p > 0.0).collect(),
    )?;

    Ok(LearnOutcome {
        tag: LearnTag::Learned,
        distribution: Some(distribution),
        centers,
        weights,
        unassigned_fraction: w0,
        large_dimension_regime,
        samples_used: oracle.samples_taken() - samples_before,
        queries_used: oracle.queries_made() - queries_before,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{emd_up_to_index_permutation, PermutationMode};
    use crate::seeding::{derive_seed, rng_from_seed};

    fn bv(s: &str) -> BitVector {
        BitVector::parse(s).unwrap()
    }

    #[test]
    fn assignment_of_exact_copies_has_no_leftover() {
        let centers = vec![bv("0000"), bv("1111")];
        let samples = vec![bv("0000"), bv("1111"), bv("0000")];
        let a = assign_to_centers(&centers, &samples, 0.01);
        assert_eq!(a.unassigned, 0);
        assert_eq!(a.counts, vec![2, 1]);
    }

    #[test]
    fn all_far_samples_stay_unassigned() {
        let centers = vec![bv("0000")];
        let samples = vec![bv("1111"), bv("1110")];
        let a = assign_to_centers(&centers, &samples, 0.1);
        assert_eq!(a.unassigned, 2);
        assert_eq!(a.unassigned_fraction(), 1.0);
    }

    #[test]
    fn ties_go_to_the_minimum_index_center() {
        // y is within 2*delta of both centers; center 0 must win.
        let centers = vec![bv("0011"), bv("1100")];
        let y = vec![bv("0110")];
        let a = assign_to_centers(&centers, &y, 0.3);
        assert_eq!(a.assigned[0], Some(0));
    }

    #[test]
    fn approx_centers_single_type() {
        let out = approx_centers(&[bv("11111")], 8).unwrap();
        assert_eq!(out, vec![BitVector::ones(8)]);
    }

    #[test]
    fn approx_centers_exact_fractions() {
        // two projected centers with type histogram {00: 1/2, 11: 1/2} at n=4
        let projs = vec![bv("0011"), bv("0011")];
        let out = approx_centers(&projs, 4).unwrap();
        assert_eq!(out, vec![bv("0011"), bv("0011")]);
    }

    #[test]
    fn approx_centers_full_projection_is_column_permutation() {
        let mut rng = rng_from_seed(15);
        for _ in 0..20 {
            let projs: Vec<BitVector> = (0..3).map(|_| BitVector::random(10, &mut rng)).collect();
            let out = approx_centers(&projs, 10).unwrap();
            // multiset of columns must match exactly
            let columns = |rows: &[BitVector]| {
                let mut cols: Vec<Vec<u8>> = (1..=10)
                    .map(|j| rows.iter().map(|r| r.get(j).unwrap()).collect())
                    .collect();
                cols.sort();
                cols
            };
            assert_eq!(columns(&projs), columns(&out));
        }
    }

    fn three_cluster_distribution() -> ExplicitDistribution {
        let mut rng = rng_from_seed(909);
        let n = 512;
        loop {
            let c: Vec<BitVector> = (0..3).map(|_| BitVector::random(n, &mut rng)).collect();
            let far = (0..3).all(|i| {
                (i + 1..3).all(|j| hamming_norm(&c[i], &c[j]).unwrap() >= 0.4)
            });
            if far {
                return ExplicitDistribution::new(vec![
                    (c[0].clone(), 0.5),
                    (c[1].clone(), 0.3),
                    (c[2].clone(), 0.2),
                ])
                .unwrap();
            }
        }
    }

    fn tuned_params() -> ClusterLearnParams {
        // t1 ~ 20 hits all three clusters, t2 ~ 2000 pins weights to ~1%.
        ClusterLearnParams::with_multipliers(0.01, 0.01, 3, 1.2e-2, 1.7e-4, 1.0).unwrap()
    }

    #[test]
    fn learner_recovers_three_well_separated_clusters() {
        let d = three_cluster_distribution();
        let params = tuned_params();
        let mut successes = 0;
        let trials = 20;
        for trial in 0..trials {
            let seed = derive_seed(4242, trial);
            let mut oracle = HugeObjectOracle::new(d.clone(), seed);
            let out = test_and_learn(&mut oracle, &params, derive_seed(seed, 1)).unwrap();
            if out.tag != LearnTag::Learned {
                continue;
            }
            let learned = out.distribution.unwrap();
            let value =
                emd_up_to_index_permutation(&d, &learned, PermutationMode::Heuristic).unwrap();
            if value <= 0.1 {
                successes += 1;
            }
        }
        assert!(successes >= (trials as f64 * 0.9) as u64 as usize, "{successes}/{trials}");
    }

    #[test]
    fn query_accounting_is_exact() {
        let d = three_cluster_distribution();
        let params = tuned_params();
        let mut oracle = HugeObjectOracle::new(d, 5);
        let out = test_and_learn(&mut oracle, &params, 6).unwrap();
        let expected_samples = (params.t1 + params.t2) as u64;
        let r = params.r_size(512) as u64;
        assert_eq!(out.samples_used, expected_samples);
        assert_eq!(out.queries_used, expected_samples * r);
    }

    #[test]
    fn scattered_support_fails() {
        // 50 random far-apart vectors are nowhere near 3-clusterable.
        let mut rng = rng_from_seed(31337);
        let n = 512;
        let vectors: Vec<BitVector> = (0..50).map(|_| BitVector::random(n, &mut rng)).collect();
        let d = ExplicitDistribution::uniform(vectors).unwrap();
        let params = tuned_params();
        let mut fails = 0;
        for trial in 0..30 {
            let seed = derive_seed(777, trial);
            let mut oracle = HugeObjectOracle::new(d.clone(), seed);
            let out = test_and_learn(&mut oracle, &params, derive_seed(seed, 1)).unwrap();
            if out.tag == LearnTag::Fail {
                fails += 1;
            }
        }
        assert!(fails >= 20, "only {fails}/30 runs failed");
    }

    #[test]
    fn fail_dichotomy_matches_unassigned_fraction() {
        let d = three_cluster_distribution();
        let params = tuned_params();
        for trial in 0..10 {
            let mut oracle = HugeObjectOracle::new(d.clone(), derive_seed(1, trial));
            let out = test_and_learn(&mut oracle, &params, derive_seed(2, trial)).unwrap();
            let failed = out.tag == LearnTag::Fail;
            assert_eq!(failed, out.unassigned_fraction > 3.0 * params.zeta);
        }
    }

    #[test]
    fn learned_weights_sum_to_one() {
        let d = three_cluster_distribution();
        let params = tuned_params();
        let mut oracle = HugeObjectOracle::new(d, 8);
        let out = test_and_learn(&mut oracle, &params, 9).unwrap();
        let total: f64 = out.weights.iter().sum::<f64>() + out.unassigned_fraction;
        assert!((total - 1.0).abs() < 1e-12);
        if let Some(d) = &out.distribution {
            let mass: f64 = d.support().iter().map(|(_, p)| p).sum();
            assert!((mass - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn point_mass_learns_exactly_up_to_permutation() {
        let d = ExplicitDistribution::point_mass(bv("110100"));
        let params = ClusterLearnParams::with_multipliers(0.05, 0.008, 1, 0.01, 0.05, 1.0).unwrap();
        let mut oracle = HugeObjectOracle::new(d.clone(), 21);
        let out = test_and_learn(&mut oracle, &params, 22).unwrap();
        assert_eq!(out.tag, LearnTag::Learned);
        let learned = out.distribution.unwrap();
        assert_eq!(learned.support_size(), 1);
        // same Hamming weight, hence exactly recoverable by a permutation
        assert_eq!(learned.support()[0].0.count_ones(), 3);
        let v = emd_up_to_index_permutation(&d, &learned, PermutationMode::Exact).unwrap();
        assert!(v.abs() < 1e-12);
    }
}
