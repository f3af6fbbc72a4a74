//! Hard-instance generators for the bounded-VC lower bound: a matrix with
//! well-separated columns, blown up to full dimension and index-permuted.

use crate::bits::{BitVector, Permutation};
use crate::dist::ExplicitDistribution;
use crate::metrics::CorrespondingMatrix;
use crate::seeding::stream_rng;
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;

const MATRIX_ATTEMPT_CAP: usize = 1000;

/// Instance sizes, supplied explicitly; only the structural relations
/// (column separation, divisibility, subset sizes) are enforced.
#[derive(Clone, Debug)]
pub struct PvcParams {
    pub k_rows: usize,
    pub ell: usize,
    pub ell_prime: usize,
    pub k_prime: usize,
    pub n: usize,
    pub seed: u64,
}

impl PvcParams {
    pub fn validate(&self) -> Result<()> {
        if self.k_rows == 0 || self.ell == 0 || self.ell_prime == 0 || self.k_prime == 0 {
            return Err(Error::InvalidParameter("all sizes must be positive".into()));
        }
        if self.n % self.ell != 0 || self.n % self.ell_prime != 0 {
            return Err(Error::InvalidParameter(format!(
                "ell {} and ell_prime {} must divide n {}",
                self.ell, self.ell_prime, self.n
            )));
        }
        if self.ell_prime > self.ell || self.k_prime > self.k_rows {
            return Err(Error::InvalidParameter(
                "need ell_prime <= ell and k_prime <= k_rows".into(),
            ));
        }
        Ok(())
    }
}

/// The base matrix: `k_rows x ell`, all column pairs at normalized distance
/// at least 1/3.
#[derive(Clone, Debug)]
pub struct PvcMatrix {
    pub rows: Vec<BitVector>,
}

/// A generated instance: the corresponding matrix over `{0,1}^n`, its
/// distribution, and the index permutation applied.
#[derive(Clone, Debug)]
pub struct PvcInstance {
    pub matrix: CorrespondingMatrix,
    pub distribution: ExplicitDistribution,
    pub sigma: Permutation,
}

/// Samples spans of random column vectors until all pairwise column
/// distances reach `k_rows / 3`, verified exhaustively.
pub fn gen_pvc_matrix(p: &PvcParams) -> Result<PvcMatrix> {
    p.validate()?;
    let bits_needed = usize::BITS - (p.ell - 1).leading_zeros();
    let span_dim = if p.ell == 1 { 0 } else { bits_needed as usize };
    let mut rng = stream_rng(p.seed, 0);

    for _ in 0..MATRIX_ATTEMPT_CAP {
        let basis: Vec<Vec<u8>> = (0..span_dim)
            .map(|_| (0..p.k_rows).map(|_| rng.random_range(0..2u8)).collect())
            .collect();
        let columns: Vec<Vec<u8>> = (0..p.ell)
            .map(|combo| {
                let mut col = vec![0u8; p.k_rows];
                for (t, base) in basis.iter().enumerate() {
                    if combo >> t & 1 == 1 {
                        for (c, b) in col.iter_mut().zip(base) {
                            *c ^= b;
                        }
                    }
                }
                col
            })
            .collect();
        let threshold = p.k_rows as f64 / 3.0;
        let ok = (0..p.ell).all(|i| {
            (i + 1..p.ell).all(|j| {
                let d = columns[i].iter().zip(&columns[j]).filter(|(a, b)| a != b).count();
                d as f64 >= threshold
            })
        });
        if ok {
            let rows = (0..p.k_rows)
                .map(|r| BitVector::new(columns.iter().map(|c| c[r]).collect()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(PvcMatrix { rows });
        }
    }
    Err(Error::AttemptCap {
        attempts: MATRIX_ATTEMPT_CAP,
        reason: format!("no {}x{} matrix with 1/3-separated columns found", p.k_rows, p.ell),
    })
}

/// Repeats each bit `n / row.len()` times contiguously.
pub fn blow_up(row: &BitVector, n: usize) -> Result<BitVector> {
    let ell = row.len();
    if n % ell != 0 {
        return Err(Error::InvalidParameter(format!("{ell} does not divide {n}")));
    }
    let reps = n / ell;
    let mut bits = Vec::with_capacity(n);
    for &b in row.as_slice() {
        bits.extend(std::iter::repeat_n(b, reps));
    }
    BitVector::new(bits)
}

fn instance_from_rows(rows: Vec<BitVector>, n: usize, sigma: Permutation) -> Result<PvcInstance> {
    let blown: Vec<BitVector> = rows
        .iter()
        .map(|r| {
            let b = blow_up(r, n)?;
            crate::bits::apply_permutation(&b, &sigma)
        })
        .collect::<Result<_>>()?;
    let matrix = CorrespondingMatrix::new(blown)?;
    let distribution = matrix.to_distribution()?;
    Ok(PvcInstance { matrix, distribution, sigma })
}

/// Uniform over the blown-up rows of the base matrix, index-permuted.
pub fn gen_pvc_yes(p: &PvcParams) -> Result<PvcInstance> {
    let a = gen_pvc_matrix(p)?;
    let mut rng = stream_rng(p.seed, 2);
    let sigma = Permutation::random(p.n, &mut rng);
    instance_from_rows(a.rows, p.n, sigma)
}

/// Query-hard no-instance: `ell_prime` random columns of the base matrix,
/// re-blown to dimension `n`.
pub fn gen_pvc_no_query(p: &PvcParams) -> Result<PvcInstance> {
    let a = gen_pvc_matrix(p)?;
    let mut rng = stream_rng(p.seed, 3);
    let mut cols: Vec<usize> = (0..p.ell).collect();
    cols.shuffle(&mut rng);
    cols.truncate(p.ell_prime);
    cols.sort_unstable();
    let rows: Vec<BitVector> = a
        .rows
        .iter()
        .map(|r| BitVector::new(cols.iter().map(|&c| r.as_slice()[c]).collect()))
        .collect::<Result<_>>()?;
    let sigma = Permutation::random(p.n, &mut rng);
    instance_from_rows(rows, p.n, sigma)
}

/// Sample-hard no-instance: `k_prime` random rows of the base matrix.
pub fn gen_pvc_no_sample(p: &PvcParams) -> Result<PvcInstance> {
    let a = gen_pvc_matrix(p)?;
    let mut rng = stream_rng(p.seed, 4);
    let mut picks: Vec<usize> = (0..p.k_rows).collect();
    picks.shuffle(&mut rng);
    picks.truncate(p.k_prime);
    picks.sort_unstable();
    let rows: Vec<BitVector> = picks.iter().map(|&r| a.rows[r].clone()).collect();
    let sigma = Permutation::random(p.n, &mut rng);
    instance_from_rows(rows, p.n, sigma)
}
