//! The index-sequence encoding: Reed-Solomon over `GF(2^l)`.
//!
//! A message of `m` symbols in `[n]` (with `n` standing for the zero field
//! element) is the coefficient vector of a degree-`(m-1)` polynomial,
//! evaluated at all `n` field elements in a fixed enumeration.

use crate::codes::gf2::Gf2m;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeCode {
    field: Gf2m,
    /// Message length; any `m` evaluations determine the polynomial.
    pub m: usize,
}

impl GeCode {
    pub fn new(l: u32, m: usize) -> Result<Self> {
        let field = Gf2m::new(l)?;
        if m == 0 || m > field.order() {
            return Err(Error::InvalidParameter(format!(
                "message length {m} outside 1..={}",
                field.order()
            )));
        }
        Ok(Self { field, m })
    }

    /// Block length `n = 2^l`.
    pub fn n(&self) -> usize {
        self.field.order()
    }

    pub fn field(&self) -> &Gf2m {
        &self.field
    }

    fn sym_to_elem(&self, s: u16) -> Result<u16> {
        let n = self.n() as u16;
        if s == 0 || s > n {
            return Err(Error::IndexOutOfRange { index: s as usize, len: self.n() });
        }
        Ok(if s == n { 0 } else { s })
    }

    fn elem_to_sym(&self, e: u16) -> u16 {
        if e == 0 {
            self.n() as u16
        } else {
            e
        }
    }

    /// Evaluates the polynomial with coefficient vector `z` at every field
    /// element; symbols take values in `[n]`.
    pub fn encode(&self, z: &[u16]) -> Result<Vec<u16>> {
        if z.len() != self.m {
            return Err(Error::LengthMismatch { left: z.len(), right: self.m });
        }
        let coeffs: Result<Vec<u16>> = z.iter().map(|&s| self.sym_to_elem(s)).collect();
        let coeffs = coeffs?;
        Ok((0..self.n() as u16)
            .map(|point| self.elem_to_sym(self.field.eval_poly(&coeffs, point)))
            .collect())
    }

    /// Interpolates from the first `m` evaluations and verifies the rest;
    /// `None` for vectors off the code.
    pub fn decode(&self, y: &[u16]) -> Result<Option<Vec<u16>>> {
        if y.len() != self.n() {
            return Err(Error::LengthMismatch { left: y.len(), right: self.n() });
        }
        let values: Result<Vec<u16>> = y.iter().map(|&s| self.sym_to_elem(s)).collect();
        let values = values?;
        let points: Vec<u16> = (0..self.m as u16).collect();
        let coeffs = self.interpolate(&points, &values[..self.m])?;
        for (point, &expected) in values.iter().enumerate().skip(self.m) {
            if self.field.eval_poly(&coeffs, point as u16) != expected {
                return Ok(None);
            }
        }
        Ok(Some(coeffs.iter().map(|&c| self.elem_to_sym(c)).collect()))
    }

    /// Lagrange interpolation returning the coefficient vector (length `m`).
    fn interpolate(&self, points: &[u16], values: &[u16]) -> Result<Vec<u16>> {
        let f = &self.field;
        let m = points.len();
        // master(X) = prod (X - x_j); coefficients low-to-high
        let mut master = vec![0u16; m + 1];
        master[0] = 1;
        let mut deg = 0usize;
        for &x in points {
            // multiply by (X + x) (subtraction is addition in GF(2^l))
            for t in (0..=deg).rev() {
                let c = master[t];
                master[t + 1] ^= c;
                master[t] = f.mul(c, x);
            }
            deg += 1;
        }
        let mut coeffs = vec![0u16; m];
        let mut quotient = vec![0u16; m];
        for (&xi, &yi) in points.iter().zip(values) {
            // synthetic division: quotient = master / (X - x_i)
            let mut carry = 0u16;
            for t in (0..m).rev() {
                let c = f.add(master[t + 1], f.mul(carry, xi));
                quotient[t] = c;
                carry = c;
            }
            let denom = f.eval_poly(&quotient, xi);
            let scale = f.mul(yi, f.inv(denom)?);
            for t in 0..m {
                coeffs[t] ^= f.mul(scale, quotient[t]);
            }
        }
        Ok(coeffs)
    }
}
