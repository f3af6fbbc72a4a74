//! Independent reference oracles shared by the integration suites. These
//! deliberately avoid the library's solver paths: enumeration and factorial
//! search only.

use hugeobject::bits::{hamming_norm, BitVector};
use hugeobject::dist::ExplicitDistribution;
use hugeobject::metrics::CorrespondingMatrix;
use hugeobject::seeding::Prng;
use rand::Rng;

/// Visits every permutation of `0..len`.
pub fn for_each_permutation(len: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            rec(items, k + 1, visit);
            items.swap(k, i);
        }
    }
    let mut items: Vec<usize> = (0..len).collect();
    rec(&mut items, 0, &mut visit);
}

/// Exact EMD by unit expansion and factorial matching: all masses must be
/// multiples of `1/units`, and `units <= 8`.
pub fn emd_by_unit_matching(
    d1: &ExplicitDistribution,
    d2: &ExplicitDistribution,
    units: usize,
) -> f64 {
    assert!(units <= 8, "factorial oracle is limited to 8 units");
    let expand = |d: &ExplicitDistribution| -> Vec<BitVector> {
        let mut rows = Vec::with_capacity(units);
        for (v, p) in d.support() {
            let copies = (p * units as f64).round() as usize;
            assert!(
                ((p * units as f64) - copies as f64).abs() < 1e-9,
                "mass {p} is not a multiple of 1/{units}"
            );
            rows.extend(std::iter::repeat_n(v.clone(), copies));
        }
        assert_eq!(rows.len(), units);
        rows
    };
    let left = expand(d1);
    let right = expand(d2);
    let mut best = f64::INFINITY;
    for_each_permutation(units, |perm| {
        let total: f64 = perm
            .iter()
            .enumerate()
            .map(|(i, &j)| hamming_norm(&left[i], &right[j]).unwrap())
            .sum();
        best = best.min(total / units as f64);
    });
    best
}

/// Factorial brute force for the row-permutation-minimized matrix distance.
pub fn brute_min_perm(l: &CorrespondingMatrix, m: &CorrespondingMatrix) -> f64 {
    let s = l.row_count();
    let mut best = f64::INFINITY;
    for_each_permutation(s, |perm| {
        let total: f64 = perm
            .iter()
            .enumerate()
            .map(|(i, &pi)| hamming_norm(&l.rows()[pi], &m.rows()[i]).unwrap())
            .sum();
        best = best.min(total / s as f64);
    });
    best
}

/// Random distribution with masses that are multiples of `1/units` over at
/// most `max_support` distinct vectors of length `n`.
pub fn random_unit_distribution(
    n: usize,
    units: usize,
    max_support: usize,
    rng: &mut Prng,
) -> ExplicitDistribution {
    loop {
        let support = rng.random_range(1..=max_support);
        let mut vectors = std::collections::BTreeSet::new();
        while vectors.len() < support {
            vectors.insert(BitVector::random(n, rng));
        }
        let vectors: Vec<BitVector> = vectors.into_iter().collect();
        // random composition of `units` into `support` positive parts
        let mut counts = vec![1usize; support];
        if units < support {
            continue;
        }
        for _ in 0..units - support {
            counts[rng.random_range(0..support)] += 1;
        }
        let entries: Vec<(BitVector, f64)> = vectors
            .into_iter()
            .zip(&counts)
            .map(|(v, &c)| (v, c as f64 / units as f64))
            .collect();
        return ExplicitDistribution::new(entries).unwrap();
    }
}

/// The total variation distance doubled: `sum |p - q|`.
pub fn l1_distance(d1: &ExplicitDistribution, d2: &ExplicitDistribution) -> f64 {
    let mut keys: Vec<&BitVector> = d1.support().iter().map(|(v, _)| v).collect();
    keys.extend(d2.support().iter().map(|(v, _)| v));
    keys.sort();
    keys.dedup();
    keys.iter().map(|v| (d1.probability_of(v) - d2.probability_of(v)).abs()).sum()
}
