//! Sets of pairwise-far binary vectors via random linear codes.

use crate::bits::BitVector;
use crate::metrics::hamming_abs;
use crate::seeding::stream_rng;
use crate::{Error, Result};
use rand::Rng;

const ATTEMPT_CAP: usize = 1000;

/// Generates `count` vectors in `{0,1}^n` with pairwise absolute Hamming
/// distance at least `min_dist`, by sampling random linear codes until the
/// verified minimum distance suffices.
pub fn gen_far_codeword_set(
    n: usize,
    count: usize,
    min_dist: f64,
    seed: u64,
) -> Result<Vec<BitVector>> {
    if n == 0 || count == 0 {
        return Err(Error::InvalidParameter("n and count must be positive".into()));
    }
    if count == 1 {
        return Ok(vec![BitVector::zeros(n)]);
    }
    let dim = (usize::BITS - (count - 1).leading_zeros()) as usize;
    let mut rng = stream_rng(seed, 0);

    'attempt: for _ in 0..ATTEMPT_CAP {
        let basis: Vec<Vec<u8>> =
            (0..dim).map(|_| (0..n).map(|_| rng.random_range(0..2u8)).collect()).collect();
        let words: Vec<BitVector> = (0..count)
            .map(|combo| {
                let mut bits = vec![0u8; n];
                for (t, base) in basis.iter().enumerate() {
                    if combo >> t & 1 == 1 {
                        for (x, b) in bits.iter_mut().zip(base) {
                            *x ^= b;
                        }
                    }
                }
                BitVector::new(bits).unwrap()
            })
            .collect();
        for i in 0..count {
            for j in i + 1..count {
                if (hamming_abs(&words[i], &words[j])? as f64) < min_dist {
                    continue 'attempt;
                }
            }
        }
        return Ok(words);
    }
    Err(Error::AttemptCap {
        attempts: ATTEMPT_CAP,
        reason: format!("no {count} vectors in {{0,1}}^{n} at pairwise distance {min_dist}"),
    })
}
