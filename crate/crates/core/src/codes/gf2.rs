//! Arithmetic in the binary field `GF(2^l)`.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// `GF(2^l)` with the lexicographically least irreducible modulus; table
/// driven multiplication for `l <= 8`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Gf2m {
    l: u32,
    poly: u32,
    #[serde(skip)]
    mul_table: Option<Vec<u16>>,
}

impl PartialEq for Gf2m {
    fn eq(&self, other: &Self) -> bool {
        self.l == other.l && self.poly == other.poly
    }
}

impl Gf2m {
    pub fn new(l: u32) -> Result<Self> {
        if l == 0 || l > 15 {
            return Err(Error::InvalidParameter(format!("field degree {l} outside 1..=15")));
        }
        let poly = least_irreducible_poly(l);
        let mut field = Self { l, poly, mul_table: None };
        if l <= 8 {
            let size = 1usize << l;
            let mut table = vec![0u16; size * size];
            for a in 0..size as u16 {
                for b in 0..size as u16 {
                    table[(a as usize) * size + b as usize] = field.mul_slow(a, b);
                }
            }
            field.mul_table = Some(table);
        }
        Ok(field)
    }

    pub fn degree(&self) -> u32 {
        self.l
    }

    /// Number of field elements `2^l`.
    pub fn order(&self) -> usize {
        1 << self.l
    }

    /// The modulus polynomial as a bitmask.
    pub fn modulus(&self) -> u32 {
        self.poly
    }

    pub fn add(&self, a: u16, b: u16) -> u16 {
        a ^ b
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        match &self.mul_table {
            Some(t) => t[(a as usize) * self.order() + b as usize],
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: u16, mut b: u16) -> u16 {
        let mut acc: u32 = 0;
        let mut shifted = a as u32;
        while b > 0 {
            if b & 1 == 1 {
                acc ^= shifted;
            }
            shifted <<= 1;
            if shifted & (1 << self.l) != 0 {
                shifted ^= self.poly;
            }
            b >>= 1;
        }
        acc as u16
    }

    pub fn pow(&self, mut base: u16, mut exp: u64) -> u16 {
        let mut acc = 1u16;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u16) -> Result<u16> {
        if a == 0 {
            return Err(Error::InvalidParameter("zero has no inverse".into()));
        }
        Ok(self.pow(a, (self.order() as u64) - 2))
    }

    /// Horner evaluation of a polynomial with `coeffs[t]` multiplying `x^t`.
    pub fn eval_poly(&self, coeffs: &[u16], x: u16) -> u16 {
        let mut acc = 0u16;
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }
}

/// Smallest integer in `[2^l, 2^{l+1})` encoding an irreducible polynomial
/// with nonzero constant term.
pub fn least_irreducible_poly(l: u32) -> u32 {
    'cand: for p in (((1u32 << l) | 1)..(1u32 << (l + 1))).step_by(2) {
        for d in 2..=(1u32 << (l / 2 + 1)) {
            if d >= p {
                break;
            }
            if poly_rem(p, d) == 0 && degree_of(d) >= 1 && degree_of(d) <= l / 2 {
                continue 'cand;
            }
        }
        return p;
    }
    unreachable!("irreducible polynomials exist in every degree");
}

fn degree_of(p: u32) -> u32 {
    31 - p.leading_zeros()
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree_of(b);
    while a != 0 && degree_of(a) >= db {
        a ^= b << (degree_of(a) - db);
    }
    a
}
