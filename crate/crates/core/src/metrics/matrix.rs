//! Corresponding matrices, row-permutation-minimized distance, and EMD
//! minimized over index permutations.

use crate::bits::{hamming_norm, BitVector, Permutation};
use crate::dist::ExplicitDistribution;
use crate::metrics::{emd_exact, min_cost_assignment};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// An `s x n` binary matrix whose uniform row distribution realizes a
/// distribution; repeated rows encode weight multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondingMatrix {
    rows: Vec<BitVector>,
}

impl CorrespondingMatrix {
    pub fn new(rows: Vec<BitVector>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::ShapeMismatch("corresponding matrix needs at least one row".into()));
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("rows must have equal length".into()));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.rows[0].len()
    }

    /// The induced distribution (uniform over rows, duplicates merged).
    pub fn to_distribution(&self) -> Result<ExplicitDistribution> {
        let p = 1.0 / self.rows.len() as f64;
        ExplicitDistribution::from_weighted(self.rows.iter().map(|r| (r.clone(), p)).collect())
    }
}

/// Minimum over row permutations `pi` of the average row Hamming distance
/// `(1/s) * sum_i d_H(L_{pi(i)}, M_i)`, solved as a min-cost assignment.
pub fn min_perm_matrix_distance(l: &CorrespondingMatrix, m: &CorrespondingMatrix) -> Result<f64> {
    if l.row_count() != m.row_count() || l.cols() != m.cols() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} vs {}x{}",
            l.row_count(),
            l.cols(),
            m.row_count(),
            m.cols()
        )));
    }
    let s = l.row_count();
    let cost: Vec<Vec<f64>> = l
        .rows()
        .iter()
        .map(|u| m.rows().iter().map(|v| hamming_norm(u, v).unwrap()).collect())
        .collect();
    let (_, total) = min_cost_assignment(&cost);
    Ok(total / s as f64)
}

/// Whether to minimize EMD over all index permutations or to use the
/// column-type alignment heuristic (a certified upper bound).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PermutationMode {
    /// All `n!` permutations; requires `n <= 8`.
    Exact,
    /// Column-type greedy alignment; returns the EMD at one permutation.
    Heuristic,
}

/// EMD between `d1` and the best index permutation of `d2`.
pub fn emd_up_to_index_permutation(
    d1: &ExplicitDistribution,
    d2: &ExplicitDistribution,
    mode: PermutationMode,
) -> Result<f64> {
    if d1.dimension() != d2.dimension() {
        return Err(Error::LengthMismatch { left: d1.dimension(), right: d2.dimension() });
    }
    match mode {
        PermutationMode::Exact => {
            let n = d1.dimension();
            if n > 8 {
                return Err(Error::InvalidParameter(format!("exact mode requires n <= 8, got {n}")));
            }
            let mut best = f64::INFINITY;
            let mut mapping: Vec<usize> = (1..=n).collect();
            permute_all(&mut mapping, 0, &mut |perm| {
                let p = Permutation::new(perm.to_vec()).unwrap();
                let permuted = d2.permute(&p).unwrap();
                let (value, _) = emd_exact(d1, &permuted).unwrap();
                if value < best {
                    best = value;
                }
            });
            Ok(best)
        }
        PermutationMode::Heuristic => {
            let sigma = heuristic_alignment(d1, d2);
            let (value, _) = emd_exact(d1, &d2.permute(&sigma)?)?;
            Ok(value)
        }
    }
}

fn permute_all(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_all(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Greedy column-type alignment: support rows of both distributions are
/// ordered by descending weight, column types (bit patterns down the top
/// rows) are matched by multiset intersection, leftovers are paired in
/// lexicographic type order.
fn heuristic_alignment(d1: &ExplicitDistribution, d2: &ExplicitDistribution) -> Permutation {
    let n = d1.dimension();
    let rows1 = sorted_support(d1);
    let rows2 = sorted_support(d2);
    let depth = rows1.len().min(rows2.len());

    let types = |rows: &[BitVector]| -> Vec<Vec<u8>> {
        (1..=n)
            .map(|j| rows.iter().take(depth).map(|r| r.get(j).unwrap()).collect())
            .collect()
    };
    let t1 = types(&rows1);
    let t2 = types(&rows2);

    let group = |ts: &[Vec<u8>]| -> BTreeMap<Vec<u8>, Vec<usize>> {
        let mut m: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
        for (idx, t) in ts.iter().enumerate() {
            m.entry(t.clone()).or_default().push(idx);
        }
        m
    };
    let g1 = group(&t1);
    let mut g2 = group(&t2);

    // sigma[i] = column of d2 matched with column i of d1 (0-based here).
    let mut sigma = vec![usize::MAX; n];
    let mut leftover1: Vec<(Vec<u8>, usize)> = Vec::new();
    for (ty, cols1) in &g1 {
        let cols2 = g2.get_mut(ty);
        let mut matched = 0;
        if let Some(cols2) = cols2 {
            matched = cols1.len().min(cols2.len());
            for t in 0..matched {
                sigma[cols1[t]] = cols2[t];
            }
            cols2.drain(0..matched);
        }
        for &c in cols1.iter().skip(matched) {
            leftover1.push((ty.clone(), c));
        }
    }
    let mut leftover2: Vec<(Vec<u8>, usize)> = Vec::new();
    for (ty, cols) in &g2 {
        for &c in cols {
            leftover2.push((ty.clone(), c));
        }
    }
    leftover1.sort();
    leftover2.sort();
    for ((_, c1), (_, c2)) in leftover1.into_iter().zip(leftover2) {
        sigma[c1] = c2;
    }

    Permutation::new(sigma.into_iter().map(|c| c + 1).collect()).expect("alignment is a bijection")
}

fn sorted_support(d: &ExplicitDistribution) -> Vec<BitVector> {
    let mut entries: Vec<(BitVector, f64)> = d.support().to_vec();
    entries.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap()
            .then(a.0.count_ones().cmp(&b.0.count_ones()))
            .then(a.0.cmp(&b.0))
    });
    entries.into_iter().map(|(v, _)| v).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::rng_from_seed;

    fn bv(s: &str) -> BitVector {
        BitVector::parse(s).unwrap()
    }

    fn random_matrix(s: usize, n: usize, rng: &mut crate::seeding::Prng) -> CorrespondingMatrix {
        CorrespondingMatrix::new((0..s).map(|_| BitVector::random(n, rng)).collect()).unwrap()
    }

    #[test]
    fn equal_matrices_have_zero_distance() {
        let m = CorrespondingMatrix::new(vec![bv("0011"), bv("1100")]).unwrap();
        assert_eq!(min_perm_matrix_distance(&m, &m).unwrap(), 0.0);
    }

    #[test]
    fn swapped_rows_have_zero_distance() {
        let l = CorrespondingMatrix::new(vec![bv("00"), bv("11")]).unwrap();
        let m = CorrespondingMatrix::new(vec![bv("11"), bv("00")]).unwrap();
        assert_eq!(min_perm_matrix_distance(&l, &m).unwrap(), 0.0);
    }

    #[test]
    fn matches_factorial_brute_force() {
        let mut rng = rng_from_seed(77);
        for _ in 0..100 {
            let l = random_matrix(5, 8, &mut rng);
            let m = random_matrix(5, 8, &mut rng);
            let fast = min_perm_matrix_distance(&l, &m).unwrap();
            let slow = brute_force_min_perm(&l, &m);
            assert!((fast - slow).abs() < 1e-12, "{fast} vs {slow}");
        }
    }

    /// Independent factorial oracle over all row permutations.
    pub fn brute_force_min_perm(l: &CorrespondingMatrix, m: &CorrespondingMatrix) -> f64 {
        let s = l.row_count();
        let mut order: Vec<usize> = (0..s).collect();
        let mut best = f64::INFINITY;
        permute_all(&mut order, 0, &mut |perm| {
            let total: f64 = perm
                .iter()
                .enumerate()
                .map(|(i, &pi)| hamming_norm(&l.rows()[pi], &m.rows()[i]).unwrap())
                .sum();
            let avg = total / s as f64;
            if avg < best {
                best = avg;
            }
        });
        best
    }

    #[test]
    fn shape_mismatch_errors() {
        let l = CorrespondingMatrix::new(vec![bv("00")]).unwrap();
        let m = CorrespondingMatrix::new(vec![bv("00"), bv("11")]).unwrap();
        assert!(min_perm_matrix_distance(&l, &m).is_err());
    }

    #[test]
    fn permutation_orbit_has_zero_exact_distance() {
        let mut rng = rng_from_seed(9);
        for _ in 0..10 {
            let mut set = std::collections::BTreeSet::new();
            while set.len() < 3 {
                set.insert(BitVector::random(5, &mut rng));
            }
            let d = ExplicitDistribution::uniform(set.into_iter().collect()).unwrap();
            let sigma = Permutation::random(5, &mut rng);
            let d2 = d.permute(&sigma).unwrap();
            let v = emd_up_to_index_permutation(&d, &d2, PermutationMode::Exact).unwrap();
            assert!(v.abs() < 1e-9, "orbit distance {v}");
        }
    }

    #[test]
    fn heuristic_upper_bounds_exact() {
        let mut rng = rng_from_seed(23);
        for _ in 0..50 {
            let mut s1 = std::collections::BTreeSet::new();
            let mut s2 = std::collections::BTreeSet::new();
            while s1.len() < 3 {
                s1.insert(BitVector::random(6, &mut rng));
            }
            while s2.len() < 3 {
                s2.insert(BitVector::random(6, &mut rng));
            }
            let d1 = ExplicitDistribution::uniform(s1.into_iter().collect()).unwrap();
            let d2 = ExplicitDistribution::uniform(s2.into_iter().collect()).unwrap();
            let exact = emd_up_to_index_permutation(&d1, &d2, PermutationMode::Exact).unwrap();
            let heuristic = emd_up_to_index_permutation(&d1, &d2, PermutationMode::Heuristic).unwrap();
            assert!(heuristic + 1e-12 >= exact, "heuristic {heuristic} < exact {exact}");
        }
    }

    #[test]
    fn equal_weight_point_masses_align_exactly() {
        let d1 = ExplicitDistribution::point_mass(bv("110000"));
        let d2 = ExplicitDistribution::point_mass(bv("000011"));
        let exact = emd_up_to_index_permutation(&d1, &d2, PermutationMode::Exact).unwrap();
        assert!(exact.abs() < 1e-12);
        let heuristic = emd_up_to_index_permutation(&d1, &d2, PermutationMode::Heuristic).unwrap();
        assert!(heuristic.abs() < 1e-12);
    }

    #[test]
    fn exact_mode_rejects_large_n() {
        let d = ExplicitDistribution::point_mass(BitVector::zeros(9));
        assert!(emd_up_to_index_permutation(&d, &d, PermutationMode::Exact).is_err());
    }

    #[test]
    fn matching_equals_emd_for_distinct_rows() {
        let mut rng = rng_from_seed(41);
        for s in 2..=6 {
            let mut rows1 = std::collections::BTreeSet::new();
            let mut rows2 = std::collections::BTreeSet::new();
            while rows1.len() < s {
                rows1.insert(BitVector::random(6, &mut rng));
            }
            while rows2.len() < s {
                rows2.insert(BitVector::random(6, &mut rng));
            }
            let l = CorrespondingMatrix::new(rows1.into_iter().collect()).unwrap();
            let m = CorrespondingMatrix::new(rows2.into_iter().collect()).unwrap();
            let match_value = min_perm_matrix_distance(&l, &m).unwrap();
            let (emd_value, _) =
                emd_exact(&l.to_distribution().unwrap(), &m.to_distribution().unwrap()).unwrap();
            assert!(
                (match_value - emd_value).abs() < 1e-9,
                "s={s}: matching {match_value} vs emd {emd_value}"
            );
        }
    }
}
