//! Parameter blocks for the cluster learner and its bounded-VC wrapper.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default size multipliers; acceptance runs pin their own.
pub const DEFAULT_C_T1: f64 = 3.0;
pub const DEFAULT_C_T2: f64 = 1.0;
pub const DEFAULT_C_R: f64 = 1.0;

/// Parameters of the cluster learner, with all derived sample/query sizes.
///
/// The asymptotic sizes hide constants, so explicit multipliers `c_t1`,
/// `c_t2`, `c_r` are exposed and echoed in every result.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClusterLearnParams {
    pub zeta: f64,
    pub delta: f64,
    pub r: usize,
    pub c_t1: f64,
    pub c_t2: f64,
    pub c_r: f64,
    /// First sample batch size, at least `r`.
    pub t1: usize,
    /// Second sample batch size.
    pub t2: usize,
    /// Index sample size before clamping to the dimension.
    pub r_size_raw: f64,
    /// Output proximity `17 (delta + zeta)`.
    pub epsilon_out: f64,
}

impl ClusterLearnParams {
    pub fn new(zeta: f64, delta: f64, r: usize) -> Result<Self> {
        Self::with_multipliers(zeta, delta, r, DEFAULT_C_T1, DEFAULT_C_T2, DEFAULT_C_R)
    }

    pub fn with_multipliers(
        zeta: f64,
        delta: f64,
        r: usize,
        c_t1: f64,
        c_t2: f64,
        c_r: f64,
    ) -> Result<Self> {
        if !(0.0..1.0).contains(&zeta) || zeta == 0.0 {
            return Err(Error::InvalidParameter(format!("zeta {zeta} outside (0,1)")));
        }
        if !(0.0..1.0).contains(&delta) || delta == 0.0 {
            return Err(Error::InvalidParameter(format!("delta {delta} outside (0,1)")));
        }
        if r == 0 {
            return Err(Error::InvalidParameter("r must be positive".into()));
        }
        if c_t1 <= 0.0 || c_t2 <= 0.0 || c_r <= 0.0 {
            return Err(Error::InvalidParameter("multipliers must be positive".into()));
        }
        let epsilon_out = 17.0 * (delta + zeta);
        if epsilon_out >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "epsilon_out = 17(delta+zeta) = {epsilon_out} must be < 1"
            )));
        }
        let (t1, t2, r_size_raw) = derive_sizes(zeta, delta, r, c_t1, c_t2, c_r);
        Ok(Self { zeta, delta, r, c_t1, c_t2, c_r, t1, t2, r_size_raw, epsilon_out })
    }

    /// Batch sizes derived at `zeta_for_sizes` but with the working `zeta`
    /// floored at `1/t2` (the resolution of the fail test). Used by the
    /// bounded-VC wrapper when `beta = 0` maps to `zeta = 0`.
    pub fn with_zeta_floor(
        zeta_for_sizes: f64,
        delta: f64,
        r: usize,
        c_t1: f64,
        c_t2: f64,
        c_r: f64,
    ) -> Result<Self> {
        if zeta_for_sizes <= 0.0 || zeta_for_sizes >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "zeta_for_sizes {zeta_for_sizes} outside (0,1)"
            )));
        }
        let (t1, t2, r_size_raw) = derive_sizes(zeta_for_sizes, delta, r, c_t1, c_t2, c_r);
        let zeta = 1.0 / t2 as f64;
        let epsilon_out = 17.0 * (delta + zeta);
        if epsilon_out >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "epsilon_out = 17(delta+zeta_floor) = {epsilon_out} must be < 1"
            )));
        }
        Ok(Self { zeta, delta, r, c_t1, c_t2, c_r, t1, t2, r_size_raw, epsilon_out })
    }

    /// Index sample size clamped to the dimension `n`.
    pub fn r_size(&self, n: usize) -> usize {
        if !self.r_size_raw.is_finite() || self.r_size_raw >= n as f64 {
            n
        } else {
            (self.r_size_raw.ceil() as usize).clamp(1, n)
        }
    }

    /// Whether `n >= 20 * 2^t1 / delta`, the scale at which the center
    /// reconstruction's rounding error is guaranteed small. Desk-scale runs
    /// normally sit below it; the learner records this flag instead of
    /// failing.
    pub fn large_dimension_regime(&self, n: usize) -> bool {
        let bound = 20.0 * 2f64.powi(self.t1.min(1 << 20) as i32) / self.delta;
        bound.is_finite() && (n as f64) >= bound
    }
}

fn derive_sizes(zeta: f64, delta: f64, r: usize, c_t1: f64, c_t2: f64, c_r: f64) -> (usize, usize, f64) {
    let ratio = r as f64 / zeta;
    let t1 = (c_t1 * ratio * ratio.ln()).ceil().max(r as f64).max(1.0) as usize;
    let t2 =
        (c_t2 * (t1 as f64).powi(2) / (zeta * zeta) * (t1 as f64).ln()).ceil().max(1.0) as usize;
    let r_size_raw = c_r * 4f64.powi(t1.min(1 << 20) as i32) / (delta * delta * zeta)
        * (r as f64 / (delta * zeta)).ln();
    (t1, t2, r_size_raw)
}

/// Parameters for learning distributions close to bounded VC-dimension.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VcLearnParams {
    /// VC-dimension bound (caller-asserted).
    pub d: u32,
    /// The VC cover radius; named to avoid clashing with other alphas.
    pub vc_alpha: f64,
    /// EMD slack to the bounded-VC set; may be zero.
    pub beta: f64,
    pub c_t1: f64,
    pub c_t2: f64,
    pub c_r: f64,
}

impl VcLearnParams {
    pub fn new(d: u32, vc_alpha: f64, beta: f64) -> Result<Self> {
        Self::with_multipliers(d, vc_alpha, beta, DEFAULT_C_T1, DEFAULT_C_T2, DEFAULT_C_R)
    }

    pub fn with_multipliers(
        d: u32,
        vc_alpha: f64,
        beta: f64,
        c_t1: f64,
        c_t2: f64,
        c_r: f64,
    ) -> Result<Self> {
        if vc_alpha <= 0.0 || vc_alpha >= 1.0 {
            return Err(Error::InvalidParameter(format!("vc_alpha {vc_alpha} outside (0,1)")));
        }
        if !(0.0..1.0).contains(&beta) || beta >= vc_alpha {
            return Err(Error::InvalidParameter(format!(
                "beta {beta} must lie in [0,1) and be smaller than vc_alpha {vc_alpha}"
            )));
        }
        let epsilon = 17.0 * (3.0 * vc_alpha + beta / vc_alpha);
        if epsilon >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "17(3 vc_alpha + beta/vc_alpha) = {epsilon} must be < 1"
            )));
        }
        Ok(Self { d, vc_alpha, beta, c_t1, c_t2, c_r })
    }

    /// Output proximity `17 (3 vc_alpha + beta / vc_alpha)`.
    pub fn epsilon_out(&self) -> f64 {
        17.0 * (3.0 * self.vc_alpha + self.beta / self.vc_alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_sizes_are_sane() {
        let p = ClusterLearnParams::new(0.01, 0.01, 3).unwrap();
        assert!(p.t1 >= 3);
        assert!(p.t2 >= 1);
        assert!((p.epsilon_out - 0.34).abs() < 1e-12);
        assert_eq!(p.r_size(512), 512, "huge raw size clamps to n");
    }

    #[test]
    fn epsilon_out_must_stay_below_one() {
        assert!(ClusterLearnParams::new(0.05, 0.05, 3).is_err());
    }

    #[test]
    fn t1_is_at_least_r() {
        let p = ClusterLearnParams::with_multipliers(0.04, 0.015, 7, 1e-9, 1e-9, 1.0).unwrap();
        assert_eq!(p.t1, 7);
    }

    #[test]
    fn large_dimension_regime_detection() {
        let p = ClusterLearnParams::with_multipliers(0.04, 0.01, 1, 1e-9, 1e-9, 1.0).unwrap();
        assert_eq!(p.t1, 1);
        // bound = 20*2/0.01 = 4000
        assert!(p.large_dimension_regime(4000));
        assert!(!p.large_dimension_regime(3999));
    }

    #[test]
    fn vc_params_validation() {
        assert!(VcLearnParams::new(1, 0.019, 0.0).is_ok());
        assert!(VcLearnParams::new(1, 0.019, 0.019).is_err());
        assert!(VcLearnParams::new(1, 0.2, 0.0).is_err(), "51*0.2 > 1");
    }
}
