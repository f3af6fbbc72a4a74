//! The two-palindrome string property over the alphabet {0,1,2,3}, its
//! adaptive tester, and the lift to single-support distributions over the
//! two-bit-per-letter encoding.

use crate::bits::BitVector;
use crate::gap::support_one_test;
use crate::oracle::{HugeObjectOracle, SampleId, SampleQueryAccess};
use crate::seeding::{derive_seed, stream_rng, Prng};
use crate::{Error, Result, Verdict};
use rand::Rng;

/// Mirror-check repetitions are `ceil(C_PAL / epsilon)`.
const C_PAL: f64 = 2.0;

/// Per-index query access to a string over {0,1,2,3}.
pub trait QuadStringOracle {
    fn len(&self) -> usize;
    /// Letter at 1-based position `j`.
    fn get(&mut self, j: usize) -> Result<u8>;
    fn queries_made(&self) -> u64;
}

/// A plain in-memory string.
pub struct QuadString {
    symbols: Vec<u8>,
    queries: u64,
}

impl QuadString {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if symbols.is_empty() || symbols.iter().any(|&s| s > 3) {
            return Err(Error::InvalidParameter("letters must lie in {0,1,2,3}".into()));
        }
        Ok(Self { symbols, queries: 0 })
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }
}

impl QuadStringOracle for QuadString {
    fn len(&self) -> usize {
        self.symbols.len()
    }

    fn get(&mut self, j: usize) -> Result<u8> {
        if j == 0 || j > self.symbols.len() {
            return Err(Error::IndexOutOfRange { index: j, len: self.symbols.len() });
        }
        self.queries += 1;
        Ok(self.symbols[j - 1])
    }

    fn queries_made(&self) -> u64 {
        self.queries
    }
}

/// Adaptive two-palindrome tester: binary search for the {0,1}/{2,3}
/// boundary, then repeated mirrored-pair checks.
pub fn pal_adaptive_test(
    oracle: &mut dyn QuadStringOracle,
    epsilon: f64,
    seed: u64,
) -> Result<Verdict> {
    assert!(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
    let n = oracle.len();

    // invariant: (lo == 0 or s[lo] in {0,1}) and (hi == n or s[hi+1] in {2,3})
    let mut lo = 0usize;
    let mut hi = n;
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if oracle.get(mid)? <= 1 {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let boundary = lo;

    let mut rng = stream_rng(seed, 0);
    let rounds = (C_PAL / epsilon).ceil() as usize;
    for _ in 0..rounds {
        let j = rng.random_range(1..=n);
        if j <= boundary {
            let a = oracle.get(j)?;
            let b = oracle.get(boundary + 1 - j)?;
            if a > 1 || b > 1 || a != b {
                return Ok(Verdict::Reject);
            }
        } else {
            let a = oracle.get(j)?;
            let b = oracle.get(n + boundary + 1 - j)?;
            if a < 2 || b < 2 || a != b {
                return Ok(Verdict::Reject);
            }
        }
    }
    Ok(Verdict::Accept)
}

/// Random member of the property: a {0,1}-palindrome followed by a
/// {2,3}-palindrome, with a random split.
pub fn gen_pal_yes(n: usize, seed: u64) -> Vec<u8> {
    let mut rng = stream_rng(seed, 0);
    let split = rng.random_range(0..=n);
    let mut s = Vec::with_capacity(n);
    palindrome_into(&mut s, split, 0, &mut rng);
    palindrome_into(&mut s, n - split, 2, &mut rng);
    s
}

fn palindrome_into(out: &mut Vec<u8>, len: usize, base: u8, rng: &mut Prng) {
    let half = len.div_ceil(2);
    let start = out.len();
    for _ in 0..half {
        out.push(base + rng.random_range(0..2u8));
    }
    for i in (0..len - half).rev() {
        let c = out[start + i];
        out.push(c);
    }
}

/// Two-bit-per-letter encoding: letter `c` becomes the bits
/// `(c >> 1, c & 1)`.
pub fn encode_quad_string(s: &[u8]) -> Result<BitVector> {
    let mut bits = Vec::with_capacity(2 * s.len());
    for &c in s {
        if c > 3 {
            return Err(Error::InvalidParameter("letters must lie in {0,1,2,3}".into()));
        }
        bits.push(c >> 1);
        bits.push(c & 1);
    }
    BitVector::new(bits)
}

struct SampleLetters<'a> {
    oracle: &'a mut HugeObjectOracle,
    sid: SampleId,
}

impl QuadStringOracle for SampleLetters<'_> {
    fn len(&self) -> usize {
        self.oracle.dimension() / 2
    }

    fn get(&mut self, j: usize) -> Result<u8> {
        if j == 0 || j > self.len() {
            return Err(Error::IndexOutOfRange { index: j, len: self.len() });
        }
        let hi = self.oracle.query_bit(self.sid, 2 * j - 1)?;
        let lo = self.oracle.query_bit(self.sid, 2 * j)?;
        Ok(hi << 1 | lo)
    }

    fn queries_made(&self) -> u64 {
        self.oracle.queries_made()
    }
}

/// Lifts a string tester to single-support distributions over encodings:
/// a support-size-one check at `epsilon/20`, then the string tester at
/// `epsilon/2` on one fresh sample.
pub fn lift_one_p_test(
    oracle: &mut HugeObjectOracle,
    string_tester: impl Fn(&mut dyn QuadStringOracle, f64, u64) -> Result<Verdict>,
    epsilon: f64,
    seed: u64,
) -> Result<Verdict> {
    assert!(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
    if oracle.dimension() % 2 != 0 {
        return Err(Error::InvalidParameter("encoded strings have even dimension".into()));
    }
    if support_one_test(oracle, epsilon / 20.0, derive_seed(seed, 0))? == Verdict::Reject {
        return Ok(Verdict::Reject);
    }
    let sid = oracle.draw_sample()?;
    let mut letters = SampleLetters { oracle, sid };
    string_tester(&mut letters, epsilon / 2.0, derive_seed(seed, 1))
}
