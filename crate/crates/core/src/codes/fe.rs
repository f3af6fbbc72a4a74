//! The final encoding: marker prefix plus per-bit secret chunks driven by
//! the index-sequence code.
//!
//! `FE(z, x)` is the `N`-bit vector `0 1^b SE(GE(z)_1, x_1) ... SE(GE(z)_n, x_n)`.

use crate::bits::BitVector;
use crate::codes::ge::GeCode;
use crate::codes::geometry::GapGeometry;
use crate::codes::se::SeCode;
use crate::{Error, Result};

/// Result of decoding a candidate encoding in full.
#[derive(Clone, Debug)]
pub struct FeDecodeResult {
    /// First bit is 0 and the marker block is all ones.
    pub prefix_ok: bool,
    /// 1-based chunk indices whose secret decode failed.
    pub invalid_chunks: Vec<usize>,
    /// Chunk-decoded index symbols, when every chunk decoded.
    pub index_symbols: Option<Vec<u16>>,
    /// `(z, x)` when the vector is a valid encoding.
    pub payload: Option<(Vec<u16>, BitVector)>,
}

impl FeDecodeResult {
    pub fn is_valid(&self) -> bool {
        self.prefix_ok && self.invalid_chunks.is_empty() && self.payload.is_some()
    }
}

/// Encodes an index message `z` and payload `x`.
pub fn fe_encode(
    geo: &GapGeometry,
    se: &SeCode,
    ge: &GeCode,
    z: &[u16],
    x: &BitVector,
) -> Result<BitVector> {
    if x.len() != geo.n {
        return Err(Error::LengthMismatch { left: x.len(), right: geo.n });
    }
    if se.k != geo.k || ge.n() != geo.n {
        return Err(Error::ShapeMismatch("codes do not match the geometry".into()));
    }
    let symbols = ge.encode(z)?;
    let mut bits = Vec::with_capacity(geo.n_total);
    bits.push(0u8);
    bits.extend(std::iter::repeat_n(1u8, geo.b));
    for (j, &sym) in symbols.iter().enumerate() {
        let chunk = se.encode(sym as usize, x.get(j + 1)?)?;
        bits.extend_from_slice(chunk.as_slice());
    }
    BitVector::new(bits)
}

/// Decodes payload bit `j` from the chunk alone; `None` when the chunk is
/// not a secret codeword.
pub fn fe_decode_bit(geo: &GapGeometry, se: &SeCode, x_enc: &BitVector, j: usize) -> Result<Option<u8>> {
    if x_enc.len() != geo.n_total {
        return Err(Error::LengthMismatch { left: x_enc.len(), right: geo.n_total });
    }
    if j == 0 || j > geo.n {
        return Err(Error::IndexOutOfRange { index: j, len: geo.n });
    }
    let chunk = x_enc.project(&geo.c_indices(j))?;
    Ok(se.decode(&chunk).map(|(_, a)| a))
}

/// Full decode: prefix check, per-chunk secret decode, then index-sequence
/// validity.
pub fn fe_decode_all(
    geo: &GapGeometry,
    se: &SeCode,
    ge: &GeCode,
    x_enc: &BitVector,
) -> Result<FeDecodeResult> {
    if x_enc.len() != geo.n_total {
        return Err(Error::LengthMismatch { left: x_enc.len(), right: geo.n_total });
    }
    let prefix_ok = x_enc.get(1)? == 0 && geo.b_indices().iter().all(|&i| x_enc.get(i).unwrap() == 1);

    let mut invalid_chunks = Vec::new();
    let mut symbols = Vec::with_capacity(geo.n);
    let mut payload_bits = Vec::with_capacity(geo.n);
    for j in 1..=geo.n {
        let chunk = x_enc.project(&geo.c_indices(j))?;
        match se.decode(&chunk) {
            Some((i, a)) => {
                symbols.push(i as u16);
                payload_bits.push(a);
            }
            None => invalid_chunks.push(j),
        }
    }

    if !invalid_chunks.is_empty() {
        return Ok(FeDecodeResult { prefix_ok, invalid_chunks, index_symbols: None, payload: None });
    }
    let payload = match ge.decode(&symbols)? {
        Some(z) if prefix_ok => Some((z, BitVector::new(payload_bits.clone())?)),
        _ => None,
    };
    Ok(FeDecodeResult { prefix_ok, invalid_chunks, index_symbols: Some(symbols), payload })
}

/// Whether the vector lies in the image of the encoding.
pub fn fe_is_valid(geo: &GapGeometry, se: &SeCode, ge: &GeCode, x_enc: &BitVector) -> Result<bool> {
    Ok(fe_decode_all(geo, se, ge, x_enc)?.is_valid())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::geometry::GapSystem;
    use crate::metrics::{hamming_abs, hamming_norm};
    use crate::seeding::rng_from_seed;
    use rand::Rng;

    fn sys(l: u32) -> GapSystem {
        GapSystem::build(l, 1000 + l as u64).unwrap()
    }

    fn random_message(n: usize, m: usize, rng: &mut crate::seeding::Prng) -> Vec<u16> {
        (0..m).map(|_| rng.random_range(1..=n as u16)).collect()
    }

    #[test]
    fn structural_prefix_is_fixed() {
        let s = sys(2);
        let mut rng = rng_from_seed(4);
        for _ in 0..20 {
            let z = random_message(s.geo.n, s.geo.m, &mut rng);
            let x = BitVector::random(s.geo.n, &mut rng);
            let enc = fe_encode(&s.geo, &s.se, &s.ge, &z, &x).unwrap();
            assert_eq!(enc.get(1).unwrap(), 0);
            for i in s.geo.b_indices() {
                assert_eq!(enc.get(i).unwrap(), 1);
            }
        }
    }

    #[test]
    fn decode_inverts_encode() {
        let s = sys(2);
        let mut rng = rng_from_seed(5);
        for _ in 0..100 {
            let z = random_message(s.geo.n, s.geo.m, &mut rng);
            let x = BitVector::random(s.geo.n, &mut rng);
            let enc = fe_encode(&s.geo, &s.se, &s.ge, &z, &x).unwrap();
            let dec = fe_decode_all(&s.geo, &s.se, &s.ge, &enc).unwrap();
            assert!(dec.is_valid());
            let (z2, x2) = dec.payload.unwrap();
            assert_eq!(z2, z);
            assert_eq!(x2, x);
        }
    }

    #[test]
    fn per_bit_decode_reassembles_payload() {
        let s = sys(2);
        let mut rng = rng_from_seed(6);
        let z = random_message(s.geo.n, s.geo.m, &mut rng);
        let x = BitVector::random(s.geo.n, &mut rng);
        let enc = fe_encode(&s.geo, &s.se, &s.ge, &z, &x).unwrap();
        for j in 1..=s.geo.n {
            assert_eq!(fe_decode_bit(&s.geo, &s.se, &enc, j).unwrap(), Some(x.get(j).unwrap()));
        }
    }

    #[test]
    fn corrupted_chunk_is_locally_invalid() {
        let s = sys(2);
        let mut rng = rng_from_seed(7);
        let z = random_message(s.geo.n, s.geo.m, &mut rng);
        let x = BitVector::random(s.geo.n, &mut rng);
        let mut enc = fe_encode(&s.geo, &s.se, &s.ge, &z, &x).unwrap();
        let target = s.geo.c_indices(2)[0];
        enc.set(target, enc.get(target).unwrap() ^ 1).unwrap();
        let dec = fe_decode_all(&s.geo, &s.se, &s.ge, &enc).unwrap();
        assert!(!dec.is_valid());
        assert_eq!(dec.invalid_chunks, vec![2]);
        assert_eq!(fe_decode_bit(&s.geo, &s.se, &enc, 2).unwrap(), None);
    }

    #[test]
    fn random_vectors_are_almost_never_valid() {
        let s = sys(2);
        let mut rng = rng_from_seed(8);
        for _ in 0..200 {
            let v = BitVector::random(s.geo.n_total, &mut rng);
            assert!(!fe_is_valid(&s.geo, &s.se, &s.ge, &v).unwrap());
        }
    }

    #[test]
    fn chunkwise_valid_but_off_code_sequence_is_globally_invalid() {
        let s = sys(2);
        let mut rng = rng_from_seed(9);
        // build a vector whose chunks all decode but whose index sequence
        // does not lie on the degree-(m-1) code
        let z = random_message(s.geo.n, s.geo.m, &mut rng);
        let x = BitVector::random(s.geo.n, &mut rng);
        let symbols = s.ge.encode(&z).unwrap();
        let mut tampered = symbols.clone();
        tampered[0] = if symbols[0] == 1 { 2 } else { 1 };
        if s.ge.decode(&tampered).unwrap().is_some() {
            // m = n would make every sequence valid; not the case here
            panic!("tampered sequence unexpectedly on the code");
        }
        let mut bits = vec![0u8];
        bits.extend(std::iter::repeat_n(1u8, s.geo.b));
        for (j, &sym) in tampered.iter().enumerate() {
            let chunk = s.se.encode(sym as usize, x.get(j + 1).unwrap()).unwrap();
            bits.extend_from_slice(chunk.as_slice());
        }
        let v = BitVector::new(bits).unwrap();
        let dec = fe_decode_all(&s.geo, &s.se, &s.ge, &v).unwrap();
        assert!(dec.prefix_ok);
        assert!(dec.invalid_chunks.is_empty());
        assert!(!dec.is_valid());
    }

    #[test]
    fn distance_grows_with_distinct_index_messages() {
        // distinct z: distance at least zeta^2 N / 2 with the measured zeta
        let s = sys(2);
        let mut rng = rng_from_seed(10);
        let bound = s.geo.zeta_measured * s.geo.zeta_measured * s.geo.n_total as f64 / 2.0;
        let mut checked = 0;
        while checked < 300 {
            let z1 = random_message(s.geo.n, s.geo.m, &mut rng);
            let z2 = random_message(s.geo.n, s.geo.m, &mut rng);
            if z1 == z2 {
                continue;
            }
            let x1 = BitVector::random(s.geo.n, &mut rng);
            let x2 = BitVector::random(s.geo.n, &mut rng);
            let e1 = fe_encode(&s.geo, &s.se, &s.ge, &z1, &x1).unwrap();
            let e2 = fe_encode(&s.geo, &s.se, &s.ge, &z2, &x2).unwrap();
            assert!(hamming_abs(&e1, &e2).unwrap() as f64 >= bound);
            checked += 1;
        }
    }

    #[test]
    fn distance_scales_with_payload_distance() {
        // same or different z, distinct x: distance >= zeta k * |x - x'|
        let s = sys(2);
        let mut rng = rng_from_seed(11);
        for _ in 0..300 {
            let z1 = random_message(s.geo.n, s.geo.m, &mut rng);
            let z2 = if rng.random_bool(0.5) { z1.clone() } else { random_message(s.geo.n, s.geo.m, &mut rng) };
            let x1 = BitVector::random(s.geo.n, &mut rng);
            let x2 = BitVector::random(s.geo.n, &mut rng);
            if x1 == x2 {
                continue;
            }
            let e1 = fe_encode(&s.geo, &s.se, &s.ge, &z1, &x1).unwrap();
            let e2 = fe_encode(&s.geo, &s.se, &s.ge, &z2, &x2).unwrap();
            let payload_dist = hamming_abs(&x1, &x2).unwrap() as f64;
            let bound = s.geo.zeta_measured * s.geo.k as f64 * payload_dist;
            assert!(hamming_abs(&e1, &e2).unwrap() as f64 >= bound);
        }
    }

    #[test]
    fn same_index_message_contracts_payload_distance() {
        let s = sys(2);
        let mut rng = rng_from_seed(12);
        for _ in 0..300 {
            let z = random_message(s.geo.n, s.geo.m, &mut rng);
            let x1 = BitVector::random(s.geo.n, &mut rng);
            let x2 = BitVector::random(s.geo.n, &mut rng);
            let e1 = fe_encode(&s.geo, &s.se, &s.ge, &z, &x1).unwrap();
            let e2 = fe_encode(&s.geo, &s.se, &s.ge, &z, &x2).unwrap();
            assert!(
                hamming_norm(&e1, &e2).unwrap() <= hamming_norm(&x1, &x2).unwrap() + 1e-15
            );
        }
    }
}
