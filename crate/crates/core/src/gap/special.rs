//! The ordering vectors of the canonical (un-permuted) gap property.

use crate::bits::BitVector;
use crate::codes::GapGeometry;

/// The special vectors: the position-one indicator, the prefix chain, and
/// the binary-pattern vectors whose columns enumerate the encoding offsets.
#[derive(Clone, Debug)]
pub struct GapSpecialVectors {
    /// `1 0^(N-1)`.
    pub indicator: BitVector,
    /// `chain[i] = 1^(i+2) 0^(N-2-i)` for `i = 0..b-1`.
    pub chain: Vec<BitVector>,
    /// `patterns[t]` holds bit `t` of the encoding offset at every encoding
    /// position, with the marker block spelling `t` in binary.
    pub patterns: Vec<BitVector>,
}

impl GapSpecialVectors {
    pub fn build(geo: &GapGeometry) -> Self {
        let n_total = geo.n_total;
        let kn = geo.k * geo.n;

        let mut u = vec![0u8; n_total];
        u[0] = 1;
        let indicator = BitVector::new(u).unwrap();

        let chain = (0..geo.b)
            .map(|i| {
                let mut bits = vec![0u8; n_total];
                for b in bits.iter_mut().take(i + 2) {
                    *b = 1;
                }
                BitVector::new(bits).unwrap()
            })
            .collect();

        let patterns = (0..geo.t_pattern_count())
            .map(|t| {
                let mut bits = vec![0u8; n_total];
                // marker block spells t, least significant bit first
                for (pos, bit) in bits.iter_mut().skip(1).take(geo.b).enumerate() {
                    *bit = (t >> pos & 1) as u8;
                }
                // encoding region: offset o carries bit t of o
                for o in 0..kn {
                    bits[geo.b + 1 + o] = (o >> t & 1) as u8;
                }
                BitVector::new(bits).unwrap()
            })
            .collect();

        Self { indicator, chain, patterns }
    }

    /// All special vectors with their canonical masses
    /// (`alpha`, `alpha/b` each, `alpha/|T|` each).
    pub fn weighted(&self, geo: &GapGeometry) -> Vec<(BitVector, f64)> {
        let alpha = geo.gap_alpha;
        let mut out = vec![(self.indicator.clone(), alpha)];
        for v in &self.chain {
            out.push((v.clone(), alpha / geo.b as f64));
        }
        for w in &self.patterns {
            out.push((w.clone(), alpha / self.patterns.len() as f64));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_and_shapes_at_n16() {
        let geo = GapGeometry::new(4).unwrap();
        let sp = GapSpecialVectors::build(&geo);
        assert_eq!(sp.indicator.count_ones(), 1);
        assert_eq!(sp.chain.len(), geo.b);
        for (i, v) in sp.chain.iter().enumerate() {
            assert_eq!(v.count_ones(), i + 2);
        }
        assert_eq!(sp.patterns.len(), 9);
        let total: f64 = sp.weighted(&geo).iter().map(|(_, p)| p).sum();
        assert!((total - 3.0 * geo.gap_alpha).abs() < 1e-12);
    }

    #[test]
    fn pattern_columns_enumerate_offsets() {
        let geo = GapGeometry::new(2).unwrap();
        let sp = GapSpecialVectors::build(&geo);
        let kn = geo.k * geo.n;
        for o in 0..kn {
            let mut value = 0usize;
            for (t, w) in sp.patterns.iter().enumerate() {
                value |= (w.get(geo.b + 2 + o).unwrap() as usize) << t;
            }
            assert_eq!(value, o);
        }
    }

    #[test]
    fn pattern_prefixes_spell_their_index() {
        let geo = GapGeometry::new(4).unwrap();
        let sp = GapSpecialVectors::build(&geo);
        for (t, w) in sp.patterns.iter().enumerate() {
            assert_eq!(w.get(1).unwrap(), 0);
            let mut prefix = 0usize;
            for (pos, &idx) in geo.b_indices().iter().enumerate() {
                prefix |= (w.get(idx).unwrap() as usize) << pos;
            }
            assert_eq!(prefix, t);
        }
    }
}
