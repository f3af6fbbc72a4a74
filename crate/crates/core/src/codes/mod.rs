//! The encoding stack: a secret linear code, a Reed-Solomon index-sequence
//! code, and their composition into full encodings.

mod fe;
mod ge;
pub mod gf2;
mod geometry;
mod se;

pub use fe::{fe_decode_all, fe_decode_bit, fe_encode, fe_is_valid, FeDecodeResult};
pub use ge::GeCode;
pub use geometry::{GapGeometry, GapSystem};
pub use gf2::{least_irreducible_poly, Gf2m};
pub use se::{build_se, build_se_with_cap, SeCode};

use serde::{Deserialize, Serialize};

/// Reproducible descriptor of a built code pair, for result files.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub l: u32,
    pub k: usize,
    pub m: usize,
    pub generator_hex: Vec<String>,
    pub field_poly: u32,
    pub min_distance: usize,
    pub dual_min_distance: usize,
    pub zeta_measured: f64,
}

impl CodeDescriptor {
    pub fn of(system: &GapSystem) -> Self {
        Self {
            l: system.geo.l,
            k: system.geo.k,
            m: system.geo.m,
            generator_hex: system.se.generator.iter().map(|g| format!("{g:016x}")).collect(),
            field_poly: system.ge.field().modulus(),
            min_distance: system.se.min_distance,
            dual_min_distance: system.se.dual_min_distance,
            zeta_measured: system.se.zeta_measured,
        }
    }
}
