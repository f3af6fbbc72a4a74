//! Derived parameters of the gap construction and the bundle of built codes.

use crate::codes::ge::GeCode;
use crate::codes::se::{build_se, SeCode};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// All derived sizes of the gap construction over `{0,1}^N`.
///
/// `n = 2^l` payload bits, each encoded into a `k`-bit chunk; one marker bit
/// plus `b` block-marker bits in front; `N = 1 + b + k n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapGeometry {
    pub l: u32,
    pub n: usize,
    pub k: usize,
    pub b: usize,
    /// Message length of the index-sequence code.
    pub m: usize,
    /// Total encoded dimension `1 + b + k n`.
    pub n_total: usize,
    /// Special-vector mass `1 / log2(n)`.
    pub gap_alpha: f64,
    /// Measured secret-code quality, set when the codes are built.
    pub zeta_measured: f64,
}

impl GapGeometry {
    /// Geometry at dimension exponent `l` with default `k = 4 (l+1)` and
    /// `m = ceil(n/2)`.
    pub fn new(l: u32) -> Result<Self> {
        let n = 1usize
            .checked_shl(l)
            .ok_or_else(|| Error::InvalidParameter("l too large".into()))?;
        Self::with_overrides(l, 4 * (l as usize + 1), n.div_ceil(2))
    }

    pub fn with_overrides(l: u32, k: usize, m: usize) -> Result<Self> {
        if l == 0 || l > 15 {
            return Err(Error::InvalidParameter(format!("l {l} outside 1..=15")));
        }
        let n = 1usize << l;
        if m == 0 || m > n {
            return Err(Error::InvalidParameter(format!("m {m} outside 1..={n}")));
        }
        if k < 2 * (l as usize + 1) || k > 64 {
            return Err(Error::InvalidParameter(format!("k {k} outside 2(l+1)..=64")));
        }
        let kn = k * n;
        let b = ((kn as f64).log2().ceil() as f64).log2().floor() as usize + 1;
        let n_total = 1 + b + kn;
        Ok(Self { l, n, k, b, m, n_total, gap_alpha: 1.0 / l as f64, zeta_measured: 0.0 })
    }

    /// Number of binary-pattern vectors, `ceil(log2(k n))`.
    pub fn t_pattern_count(&self) -> usize {
        ((self.k * self.n) as f64).log2().ceil() as usize
    }

    /// The block-marker index range `{2, ..., b+1}` (1-based).
    pub fn b_indices(&self) -> Vec<usize> {
        (2..=self.b + 1).collect()
    }

    /// Chunk `j`'s index range (1-based, `j` in `[n]`).
    pub fn c_indices(&self, j: usize) -> Vec<usize> {
        assert!(j >= 1 && j <= self.n, "chunk index out of range");
        let start = self.b + 2 + self.k * (j - 1);
        (start..start + self.k).collect()
    }

    /// Offset of the encoding region: chunk bits occupy positions
    /// `b+2 ..= N` (1-based).
    pub fn encoding_start(&self) -> usize {
        self.b + 2
    }
}

/// Geometry plus built secret and index-sequence codes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GapSystem {
    pub geo: GapGeometry,
    pub se: SeCode,
    pub ge: GeCode,
}

impl GapSystem {
    /// Builds the default geometry and codes at exponent `l`; the secret
    /// code targets distance and dual distance at least 2.
    pub fn build(l: u32, seed: u64) -> Result<Self> {
        let mut geo = GapGeometry::new(l)?;
        let target = 2.0 / geo.k as f64;
        let se = build_se(l, geo.k, target, seed)?;
        let ge = GeCode::new(l, geo.m)?;
        geo.zeta_measured = se.zeta_measured;
        Ok(Self { geo, se, ge })
    }

    /// Restores transient decode tables after deserialization.
    pub fn rebuild_tables(&mut self) {
        self.se.rebuild_tables();
    }
}
