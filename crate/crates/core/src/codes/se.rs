//! The secret encoding: a random binary linear code mapping an index in
//! `[n]` plus a secret bit to a `k`-bit word.
//!
//! Built by rejection sampling generator matrices until two measured
//! quantities clear the requested threshold: the minimum distance of the
//! full code (separates distinct `(index, bit)` messages) and the dual
//! minimum distance of the index-row subcode (makes any few positions of a
//! random-index encoding exactly uniform). Both are recorded, and the
//! effective `zeta` is derived from the measured values, never assumed.

use crate::bits::BitVector;
use crate::seeding::stream_rng;
use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Cap on dual-codeword enumeration (`2^(k-l)` words).
const MAX_DUAL_ENUM: u32 = 26;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeCode {
    pub l: u32,
    pub k: usize,
    /// `l + 1` generator rows as `k`-bit masks; the last row is the secret
    /// bit's row.
    pub generator: Vec<u64>,
    /// Minimum distance of the full `(l+1)`-row code.
    pub min_distance: usize,
    /// Minimum distance of the dual of the top `l`-row subcode; any
    /// `dual_min_distance - 1` positions of a random-index codeword with a
    /// fixed secret bit are uniform.
    pub dual_min_distance: usize,
    /// Measured `zeta`: `min(min_distance, dual_min_distance - 1) / k`.
    pub zeta_measured: f64,
    #[serde(skip)]
    decode_map: HashMap<u64, (u16, u8)>,
}

impl SeCode {
    /// Domain size `n = 2^l`.
    pub fn domain(&self) -> usize {
        1 << self.l
    }

    /// Encodes index `i` in `[n]` (value `n` represented by the zero word)
    /// and secret bit `a`.
    pub fn encode(&self, i: usize, a: u8) -> Result<BitVector> {
        let n = self.domain();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        let word = self.encode_word((i % n) as u16, a & 1);
        Ok(word_to_bits(word, self.k))
    }

    fn encode_word(&self, index_bits: u16, a: u8) -> u64 {
        let mut acc = 0u64;
        for (t, row) in self.generator.iter().take(self.l as usize).enumerate() {
            if index_bits >> t & 1 == 1 {
                acc ^= row;
            }
        }
        if a == 1 {
            acc ^= self.generator[self.l as usize];
        }
        acc
    }

    /// Exact-match decoding; anything off the codeword set is `None`.
    pub fn decode(&self, w: &BitVector) -> Option<(usize, u8)> {
        if w.len() != self.k {
            return None;
        }
        let word = bits_to_word(w);
        self.decode_map.get(&word).map(|&(idx, a)| {
            let n = self.domain();
            let i = if idx == 0 { n } else { idx as usize };
            (i, a)
        })
    }

    fn build_decode_map(&mut self) {
        let mut map = HashMap::new();
        for idx in 0..self.domain() as u16 {
            for a in 0..=1u8 {
                map.insert(self.encode_word(idx, a), (idx, a));
            }
        }
        self.decode_map = map;
    }

    /// Restores the transient decode table after deserialization.
    pub fn rebuild_tables(&mut self) {
        self.build_decode_map();
    }
}

fn word_to_bits(word: u64, k: usize) -> BitVector {
    BitVector::new((0..k).map(|j| (word >> j & 1) as u8).collect()).expect("k >= 1")
}

fn bits_to_word(v: &BitVector) -> u64 {
    v.as_slice().iter().enumerate().fold(0u64, |acc, (j, &b)| acc | ((b as u64) << j))
}

/// Rejection-samples generator matrices until the measured minimum distance
/// and dual minimum distance both reach `target_zeta * k`.
pub fn build_se(l: u32, k: usize, target_zeta: f64, seed: u64) -> Result<SeCode> {
    build_se_with_cap(l, k, target_zeta, seed, 2000)
}

pub fn build_se_with_cap(
    l: u32,
    k: usize,
    target_zeta: f64,
    seed: u64,
    attempt_cap: usize,
) -> Result<SeCode> {
    if l == 0 || l > 15 {
        return Err(Error::InvalidParameter(format!("l {l} outside 1..=15")));
    }
    if k < 2 * (l as usize + 1) || k > 64 {
        return Err(Error::InvalidParameter(format!("k {k} outside 2(l+1)..=64")));
    }
    if target_zeta <= 0.0 || target_zeta >= 1.0 {
        return Err(Error::InvalidParameter(format!("target_zeta {target_zeta} outside (0, 1)")));
    }
    let dual_dim = k as u32 - l;
    if dual_dim > MAX_DUAL_ENUM {
        return Err(Error::InvalidParameter(format!(
            "dual enumeration 2^{dual_dim} exceeds cap 2^{MAX_DUAL_ENUM}"
        )));
    }
    let rows = l as usize + 1;
    let mask = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let threshold = target_zeta * k as f64 - 1e-9;
    let mut rng = stream_rng(seed, 0);

    for _ in 0..attempt_cap {
        let generator: Vec<u64> = (0..rows).map(|_| rng.random::<u64>() & mask).collect();
        if rank_gf2(&generator) != rows {
            continue;
        }
        let min_distance = full_code_min_distance(&generator, rows);
        if (min_distance as f64) < threshold {
            continue;
        }
        let dual_min_distance = dual_min_distance_of_rows(&generator[..l as usize], k);
        if (dual_min_distance as f64) < threshold {
            continue;
        }
        let zeta_measured =
            min_distance.min(dual_min_distance.saturating_sub(1)) as f64 / k as f64;
        let mut code = SeCode {
            l,
            k,
            generator,
            min_distance,
            dual_min_distance,
            zeta_measured,
            decode_map: HashMap::new(),
        };
        code.build_decode_map();
        return Ok(code);
    }
    Err(Error::AttemptCap {
        attempts: attempt_cap,
        reason: format!(
            "no (l={l}, k={k}) generator reached min and dual distance {:.2}",
            target_zeta * k as f64
        ),
    })
}

fn rank_gf2(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &row in rows {
        let mut r = row;
        for &b in &basis {
            let high = 63 - b.leading_zeros();
            if r >> high & 1 == 1 {
                r ^= b;
            }
        }
        if r != 0 {
            basis.push(r);
            basis.sort_by_key(|b| std::cmp::Reverse(*b));
        }
    }
    basis.len()
}

/// Minimum weight over all nonzero messages of `rows`.
fn full_code_min_distance(rows: &[u64], count: usize) -> usize {
    let mut best = usize::MAX;
    for msg in 1u64..(1 << count) {
        let mut word = 0u64;
        for (t, &row) in rows.iter().enumerate() {
            if msg >> t & 1 == 1 {
                word ^= row;
            }
        }
        best = best.min(word.count_ones() as usize);
    }
    best
}

/// Minimum distance of the dual of the code spanned by `rows` (full rank
/// assumed), via nullspace enumeration.
fn dual_min_distance_of_rows(rows: &[u64], k: usize) -> usize {
    let basis = nullspace_basis(rows, k);
    if basis.is_empty() {
        return k + 1;
    }
    let mut best = usize::MAX;
    // Gray-code walk over all nonzero combinations.
    let dim = basis.len();
    let mut word = 0u64;
    let mut prev_gray = 0u64;
    for t in 1u64..(1u64 << dim) {
        let gray = t ^ (t >> 1);
        let flipped = (gray ^ prev_gray).trailing_zeros() as usize;
        word ^= basis[flipped];
        prev_gray = gray;
        best = best.min(word.count_ones() as usize);
    }
    best
}

/// Basis of `{ v : rows * v = 0 }` over GF(2), vectors as `k`-bit masks.
fn nullspace_basis(rows: &[u64], k: usize) -> Vec<u64> {
    let mut mat: Vec<u64> = rows.to_vec();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..k {
        let Some(sel) = (rank..mat.len()).find(|&r| mat[r] >> col & 1 == 1) else {
            continue;
        };
        mat.swap(rank, sel);
        let pivot_row = mat[rank];
        for (r, row) in mat.iter_mut().enumerate() {
            if r != rank && *row >> col & 1 == 1 {
                *row ^= pivot_row;
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == mat.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free_col in (0..k).filter(|c| !pivot_cols.contains(c)) {
        let mut v = 1u64 << free_col;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            if mat[r] >> free_col & 1 == 1 {
                v |= 1u64 << pc;
            }
        }
        basis.push(v);
    }
    basis
}
