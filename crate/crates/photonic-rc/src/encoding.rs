//! Basket encoding and 8-bit quantization.
//!
//! Basket encoding maps a scalar in [0,1] to `n_bin` overlapping
//! interval-membership bits: bit `i` is ON iff the value falls inside the
//! closed window `[c_i - s, c_i + s]` around the i-th bin center. Nearby
//! values share most of their ON bits, so locality survives binarization.
//! The 8-bit quantizer models the camera / stored-state resolution: levels
//! are `round(clip(v,0,1) * 255)` (round half up) and dequantize to
//! `level / 255`.

use crate::error::{Error, Result};

/// Scalar-to-bits encoder. Centers are `(2i-1)/(2 n_bin)` and the window
/// half-width is `(2 floor(n_bin/2) - 1) / (4 n_bin)`; for `n_bin = 10` the
/// half-width is exactly 0.225.
#[derive(Debug, Clone)]
pub struct BasketCodec {
    n_bin: usize,
    centers: Vec<f64>,
    half_width: f64,
    /// Precomputed encodings of the 256 dequantized 8-bit levels. The hot
    /// reservoir loop encodes stored levels, never arbitrary reals.
    level_lut: Vec<u8>,
}

impl BasketCodec {
    pub fn new(n_bin: usize) -> Result<Self> {
        if n_bin < 2 {
            return Err(Error::InvalidParameter(format!(
                "basket encoding needs n_bin >= 2, got {n_bin}"
            )));
        }
        let centers: Vec<f64> = (1..=n_bin)
            .map(|i| (2 * i - 1) as f64 / (2 * n_bin) as f64)
            .collect();
        let half_width = (2 * (n_bin / 2) - 1) as f64 / (4 * n_bin) as f64;
        let mut codec = Self {
            n_bin,
            centers,
            half_width,
            level_lut: Vec::new(),
        };
        let mut lut = vec![0u8; 256 * n_bin];
        for level in 0..256usize {
            let x = level as f64 / 255.0;
            let pattern = codec.encode_scalar(x)?;
            lut[level * n_bin..(level + 1) * n_bin].copy_from_slice(pattern.as_slice());
        }
        codec.level_lut = lut;
        Ok(codec)
    }

    pub fn n_bin(&self) -> usize {
        self.n_bin
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Encodes one scalar; `x` must already lie in [0,1]. Window membership
    /// uses closed intervals, compared directly on the given value.
    pub fn encode_scalar(&self, x: f64) -> Result<BinaryPattern> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!(
                "encoder input {x} outside [0,1]; clip before encoding"
            )));
        }
        let bits = self
            .centers
            .iter()
            .map(|&c| u8::from(x >= c - self.half_width && x <= c + self.half_width))
            .collect();
        Ok(BinaryPattern::new(bits))
    }

    /// Element-wise encoding, concatenated in component order.
    pub fn encode_vector(&self, v: &[f64]) -> Result<BinaryPattern> {
        let mut bits = Vec::with_capacity(v.len() * self.n_bin);
        for (idx, &x) in v.iter().enumerate() {
            let p = self.encode_scalar(x).map_err(|e| match e {
                Error::Domain(m) => Error::Domain(format!("component {idx}: {m}")),
                other => other,
            })?;
            bits.extend_from_slice(p.as_slice());
        }
        Ok(BinaryPattern::new(bits))
    }

    /// Encodes a stored 8-bit state vector into `out` (length `len * n_bin`).
    pub fn encode_levels_into(&self, levels: &[u8], out: &mut [u8]) {
        assert_eq!(out.len(), levels.len() * self.n_bin);
        for (k, &level) in levels.iter().enumerate() {
            let src = &self.level_lut[level as usize * self.n_bin..(level as usize + 1) * self.n_bin];
            out[k * self.n_bin..(k + 1) * self.n_bin].copy_from_slice(src);
        }
    }
}

/// An ordered ON/OFF pattern (one byte per micromirror).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryPattern {
    bits: Vec<u8>,
}

impl BinaryPattern {
    pub fn new(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![0; len] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [u8] {
        &mut self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }

    pub fn hamming_distance(&self, other: &BinaryPattern) -> usize {
        assert_eq!(self.len(), other.len(), "hamming distance needs equal lengths");
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// A stored 8-bit vector; level `k` stands for the real value `k / 255`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantized8 {
    levels: Vec<u8>,
}

impl Quantized8 {
    pub fn new(levels: Vec<u8>) -> Self {
        Self { levels }
    }

    pub fn zeros(len: usize) -> Self {
        Self { levels: vec![0; len] }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[u8] {
        &self.levels
    }

    pub fn dequantize(&self) -> Vec<f64> {
        self.levels.iter().map(|&l| l as f64 / 255.0).collect()
    }
}

/// Quantizes to 8 bits after clipping to [0,1]; models camera saturation.
pub fn quantize8(values: &[f64]) -> Quantized8 {
    Quantized8::new(values.iter().map(|&v| quantize8_scalar(v)).collect())
}

pub fn quantize8_scalar(v: f64) -> u8 {
    // round half up on the clipped value
    (v.clamp(0.0, 1.0) * 255.0 + 0.5).floor() as u8
}

pub fn dequantize8(q: &Quantized8) -> Vec<f64> {
    q.dequantize()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn on_bits(p: &BinaryPattern) -> Vec<usize> {
        // 1-indexed, matching the bin index i
        p.as_slice()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Independent oracle: enumerate bins and test closed-interval membership
    /// straight from the center/half-width formulas.
    fn oracle_bits(x: f64, n_bin: usize) -> Vec<usize> {
        let s = (2 * (n_bin / 2) - 1) as f64 / (4 * n_bin) as f64;
        (1..=n_bin)
            .filter(|&i| {
                let c = (2 * i - 1) as f64 / (2 * n_bin) as f64;
                x >= c - s && x <= c + s
            })
            .collect()
    }

    #[test]
    fn codec_constants() {
        let c = BasketCodec::new(10).unwrap();
        assert_eq!(c.half_width(), 0.225);
        assert_eq!(c.centers()[0], 0.05);
        assert_eq!(c.centers()[9], 0.95);
        for w in c.centers().windows(2) {
            assert!((w[1] - w[0] - 0.1).abs() < 1e-15);
        }

        let c2 = BasketCodec::new(2).unwrap();
        assert_eq!(c2.centers(), &[0.25, 0.75]);
        assert_eq!(c2.half_width(), 0.125);
    }

    #[test]
    fn codec_rejects_degenerate_dimension() {
        assert!(matches!(BasketCodec::new(1), Err(Error::InvalidParameter(_))));
        assert!(matches!(BasketCodec::new(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn scalar_encoding_matches_enumeration_oracle() {
        let c = BasketCodec::new(10).unwrap();
        assert_eq!(on_bits(&c.encode_scalar(0.0).unwrap()), vec![1, 2]);
        assert_eq!(on_bits(&c.encode_scalar(0.5).unwrap()), vec![4, 5, 6, 7]);
        assert_eq!(on_bits(&c.encode_scalar(1.0).unwrap()), vec![9, 10]);
        for level in 0..256usize {
            let x = level as f64 / 255.0;
            assert_eq!(on_bits(&c.encode_scalar(x).unwrap()), oracle_bits(x, 10));
        }
    }

    #[test]
    fn scalar_encoding_rejects_out_of_domain() {
        let c = BasketCodec::new(10).unwrap();
        assert!(matches!(c.encode_scalar(-0.01), Err(Error::Domain(_))));
        assert!(matches!(c.encode_scalar(1.01), Err(Error::Domain(_))));
        assert!(matches!(c.encode_scalar(f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn vector_encoding_concatenates_in_order() {
        let c = BasketCodec::new(10).unwrap();
        let empty = c.encode_vector(&[]).unwrap();
        assert_eq!(empty.len(), 0);

        let p = c.encode_vector(&[0.0, 1.0]).unwrap();
        assert_eq!(p.len(), 20);
        assert_eq!(on_bits(&p), vec![1, 2, 19, 20]);

        let long = c.encode_vector(&vec![0.3; 100]).unwrap();
        assert_eq!(long.len(), 1000);
    }

    #[test]
    fn vector_encoding_reports_offending_component() {
        let c = BasketCodec::new(10).unwrap();
        match c.encode_vector(&[0.2, 1.5, 0.1]) {
            Err(Error::Domain(m)) => assert!(m.contains("component 1"), "{m}"),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn popcount_bounds_exhaustive() {
        let c = BasketCodec::new(10).unwrap();
        for level in 0..256usize {
            let x = level as f64 / 255.0;
            let n = c.encode_scalar(x).unwrap().count_ones();
            assert!((2..=5).contains(&n), "popcount {n} at level {level}");
        }
    }

    #[test]
    fn hamming_locality_bound_exhaustive() {
        let c = BasketCodec::new(10).unwrap();
        let patterns: Vec<BinaryPattern> = (0..256usize)
            .map(|l| c.encode_scalar(l as f64 / 255.0).unwrap())
            .collect();
        for a in 0..256usize {
            for b in 0..256usize {
                let xa = a as f64 / 255.0;
                let xb = b as f64 / 255.0;
                let d = patterns[a].hamming_distance(&patterns[b]);
                let bound = 2 * (((xa - xb).abs() * 10.0).floor() as usize + 1);
                assert!(d <= bound, "H={d} bound={bound} at ({a},{b})");
                if a == b {
                    assert_eq!(d, 0);
                }
            }
        }
    }

    #[test]
    fn level_lut_matches_scalar_encoding() {
        let c = BasketCodec::new(10).unwrap();
        let levels: Vec<u8> = (0..=255).collect();
        let mut out = vec![0u8; 256 * 10];
        c.encode_levels_into(&levels, &mut out);
        for level in 0..256usize {
            let direct = c.encode_scalar(level as f64 / 255.0).unwrap();
            assert_eq!(&out[level * 10..(level + 1) * 10], direct.as_slice());
        }
    }

    #[test]
    fn quantize_endpoints_and_rounding() {
        assert_eq!(quantize8(&[0.0]).levels(), &[0]);
        assert_eq!(quantize8(&[1.0]).levels(), &[255]);
        // 255 * 0.5 = 127.5 rounds half up to 128
        assert_eq!(quantize8(&[0.5]).levels(), &[128]);
        assert_eq!(quantize8(&[1.7]).levels(), &[255]);
        assert_eq!(quantize8(&[-0.3]).levels(), &[0]);
    }

    #[test]
    fn quantize_round_trip_within_half_level() {
        let values: Vec<f64> = (0..1000).map(|i| i as f64 / 999.0 * 1.4 - 0.2).collect();
        let q = quantize8(&values);
        for (&v, d) in values.iter().zip(q.dequantize()) {
            assert!((d - v.clamp(0.0, 1.0)).abs() <= 1.0 / 510.0 + 1e-15);
        }
    }

    #[test]
    fn levels_survive_requantization() {
        let levels: Vec<u8> = (0..=255).collect();
        let q = Quantized8::new(levels.clone());
        let rt = quantize8(&q.dequantize());
        assert_eq!(rt.levels(), levels.as_slice());
    }
}
