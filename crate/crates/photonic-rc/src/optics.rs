//! Numerical stand-in for the light path: binary DMD pattern -> ground-glass
//! diffuser -> intensity camera.
//!
//! The diffuser is a fixed dense matrix with i.i.d. circularly-symmetric
//! complex Gaussian entries `(a + i b) / sqrt(2)`, `a, b ~ N(0,1)`, so the
//! mean modulus-square per entry is 1. One global matrix is shared by all
//! layers; a layer selects a row range (its macro-pixels) and column ranges
//! (its pattern regions) of the same matrix, which models the time-multiplexed
//! reuse of a single physical system. Detection is `|field|^2` scaled by a
//! calibrated exposure and quantized to 8 bits.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::ops::Range;

use crate::encoding::{quantize8, BinaryPattern, Quantized8};
use crate::error::{Error, Result};
use crate::rng::stream;

/// Default cap on matrix entries (128M complex doubles = 2 GiB).
pub const DEFAULT_ENTRY_CAP: usize = 1 << 27;

/// Fixed complex random transform. Fully determined by
/// `(seed, n_rows_max, n_cols)`; regeneration is bit-identical. Entries are
/// drawn column-major (real part then imaginary part per entry) from the
/// ChaCha8 stream tagged `"transmission"`.
pub struct TransmissionModel {
    entries: Vec<Complex64>, // column-major, n_rows_max per column
    seed: u64,
    n_rows_max: usize,
    n_cols: usize,
}

impl TransmissionModel {
    pub fn build(seed: u64, n_rows_max: usize, n_cols: usize) -> Result<Self> {
        Self::build_with_cap(seed, n_rows_max, n_cols, DEFAULT_ENTRY_CAP)
    }

    pub fn build_with_cap(
        seed: u64,
        n_rows_max: usize,
        n_cols: usize,
        entry_cap: usize,
    ) -> Result<Self> {
        if n_rows_max == 0 || n_cols == 0 {
            return Err(Error::InvalidParameter(
                "transmission matrix needs at least one row and one column".into(),
            ));
        }
        let n = n_rows_max
            .checked_mul(n_cols)
            .filter(|&n| n <= entry_cap)
            .ok_or_else(|| {
                Error::Resource(format!(
                    "transmission matrix {n_rows_max}x{n_cols} exceeds the entry cap {entry_cap}"
                ))
            })?;
        let mut rng = stream(seed, "transmission");
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut entries = Vec::with_capacity(n);
        for _ in 0..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            entries.push(Complex64::new(re * inv_sqrt2, im * inv_sqrt2));
        }
        Ok(Self {
            entries,
            seed,
            n_rows_max,
            n_cols,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_rows_max(&self) -> usize {
        self.n_rows_max
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Persistence metadata; the matrix itself is regenerated, never stored.
    pub fn metadata(&self) -> (u64, usize, usize) {
        (self.seed, self.n_rows_max, self.n_cols)
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[col * self.n_rows_max + row]
    }

    pub fn col(&self, col: usize) -> &[Complex64] {
        &self.entries[col * self.n_rows_max..(col + 1) * self.n_rows_max]
    }

    /// Pre-modulus complex field seen by the layer's macro-pixels. Columns are
    /// accumulated in ascending pattern order, skipping OFF bits.
    pub fn field(&self, layer: &LayerOptics, pattern: &BinaryPattern) -> Result<Vec<Complex64>> {
        layer.check_pattern(pattern)?;
        let rows = layer.row_range.clone();
        let mut field = vec![Complex64::new(0.0, 0.0); rows.len()];
        let col0 = layer.col_start();
        for (j, &bit) in pattern.as_slice().iter().enumerate() {
            if bit != 0 {
                let col = &self.col(col0 + j)[rows.clone()];
                for (acc, m) in field.iter_mut().zip(col) {
                    *acc += *m;
                }
            }
        }
        Ok(field)
    }

    /// Speckle intensity: element-wise modulus-square of the field.
    pub fn propagate(&self, layer: &LayerOptics, pattern: &BinaryPattern) -> Result<Vec<f64>> {
        Ok(self.field(layer, pattern)?.iter().map(|c| c.norm_sqr()).collect())
    }

    /// Lockstep intensity computation for a chunk of patterns. Walks the
    /// matrix column by column so each column is loaded once per chunk; the
    /// per-pattern accumulation order is identical to [`propagate`], so the
    /// results are bit-identical to the one-pattern path.
    ///
    /// [`propagate`]: TransmissionModel::propagate
    pub fn propagate_chunk(
        &self,
        layer: &LayerOptics,
        patterns: &[BinaryPattern],
    ) -> Result<Vec<Vec<f64>>> {
        for p in patterns {
            layer.check_pattern(p)?;
        }
        let rows = layer.row_range.clone();
        let width = layer.pattern_width();
        let col0 = layer.col_start();
        let mut fields = vec![vec![Complex64::new(0.0, 0.0); rows.len()]; patterns.len()];
        for j in 0..width {
            let col = &self.col(col0 + j)[rows.clone()];
            for (p, field) in patterns.iter().zip(fields.iter_mut()) {
                if p.as_slice()[j] != 0 {
                    for (acc, m) in field.iter_mut().zip(col) {
                        *acc += *m;
                    }
                }
            }
        }
        Ok(fields
            .into_iter()
            .map(|f| f.iter().map(|c| c.norm_sqr()).collect())
            .collect())
    }
}

/// A layer's view of the shared transmission matrix: which macro-pixel rows it
/// reads and how its DMD pattern regions (input | state | bias) map onto the
/// matrix columns. The bias region carries a fixed seeded pattern whose ON
/// fraction is the layer's bias term.
#[derive(Debug, Clone)]
pub struct LayerOptics {
    pub row_range: Range<usize>,
    pub input_cols: Range<usize>,
    pub state_cols: Range<usize>,
    pub bias_cols: Range<usize>,
    pub bias_pattern: BinaryPattern,
    pub scale: f64,
}

impl LayerOptics {
    /// Lays the three pattern regions out contiguously starting at matrix
    /// column `col_start` and draws the bias pattern at the requested ON
    /// fraction from the stream tagged `"bias-layer-{tag}"`.
    pub fn new(
        row_range: Range<usize>,
        col_start: usize,
        input_width: usize,
        state_width: usize,
        bias_width: usize,
        bias_fraction: f64,
        bias_seed: u64,
        layer_tag: usize,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&bias_fraction) {
            return Err(Error::InvalidParameter(format!(
                "bias fraction {bias_fraction} outside [0,1]"
            )));
        }
        let input_cols = col_start..col_start + input_width;
        let state_cols = input_cols.end..input_cols.end + state_width;
        let bias_cols = state_cols.end..state_cols.end + bias_width;
        let n_on = (bias_fraction * bias_width as f64 + 0.5).floor() as usize;
        let mut idx: Vec<usize> = (0..bias_width).collect();
        use rand::seq::SliceRandom;
        idx.shuffle(&mut stream(bias_seed, &format!("bias-layer-{layer_tag}")));
        let mut bits = vec![0u8; bias_width];
        for &i in idx.iter().take(n_on) {
            bits[i] = 1;
        }
        Ok(Self {
            row_range,
            input_cols,
            state_cols,
            bias_cols,
            bias_pattern: BinaryPattern::new(bits),
            scale: 1.0,
        })
    }

    pub fn col_start(&self) -> usize {
        self.input_cols.start
    }

    pub fn input_width(&self) -> usize {
        self.input_cols.len()
    }

    pub fn state_width(&self) -> usize {
        self.state_cols.len()
    }

    pub fn bias_width(&self) -> usize {
        self.bias_cols.len()
    }

    pub fn pattern_width(&self) -> usize {
        self.input_cols.len() + self.state_cols.len() + self.bias_cols.len()
    }

    pub fn n_rows(&self) -> usize {
        self.row_range.len()
    }

    /// ON fraction actually realized by the bias pattern.
    pub fn bias_on_fraction(&self) -> f64 {
        if self.bias_pattern.is_empty() {
            0.0
        } else {
            self.bias_pattern.count_ones() as f64 / self.bias_pattern.len() as f64
        }
    }

    /// Full DMD pattern for one update: `[input | state | bias]`.
    pub fn assemble(&self, input_bits: &[u8], state_bits: &[u8]) -> Result<BinaryPattern> {
        if input_bits.len() != self.input_width() || state_bits.len() != self.state_width() {
            return Err(Error::Shape(format!(
                "pattern regions {}+{} do not match layer layout {}+{}",
                input_bits.len(),
                state_bits.len(),
                self.input_width(),
                self.state_width()
            )));
        }
        let mut bits = Vec::with_capacity(self.pattern_width());
        bits.extend_from_slice(input_bits);
        bits.extend_from_slice(state_bits);
        bits.extend_from_slice(self.bias_pattern.as_slice());
        Ok(BinaryPattern::new(bits))
    }

    fn check_pattern(&self, pattern: &BinaryPattern) -> Result<()> {
        if pattern.len() != self.pattern_width() {
            return Err(Error::Shape(format!(
                "pattern length {} does not match layer width {}",
                pattern.len(),
                self.pattern_width()
            )));
        }
        debug_assert_eq!(
            &pattern.as_slice()[self.pattern_width() - self.bias_width()..],
            self.bias_pattern.as_slice(),
            "bias region of the pattern must equal the layer bias pattern"
        );
        Ok(())
    }
}

/// Calibrated exposure: the given percentile of all intensities pooled over
/// the warm-up patterns. Detection divides by this scale, so roughly
/// `100 - percentile` percent of fresh values saturate. Nearest-rank
/// percentile; `percentile = 100` selects the maximum.
pub fn calibrate_scale(
    model: &TransmissionModel,
    layer: &LayerOptics,
    warmup: &[BinaryPattern],
    percentile: f64,
) -> Result<f64> {
    if warmup.len() < 32 {
        return Err(Error::InvalidParameter(format!(
            "calibration needs at least 32 warm-up patterns, got {}",
            warmup.len()
        )));
    }
    if !(percentile > 50.0 && percentile <= 100.0) {
        return Err(Error::InvalidParameter(format!(
            "calibration percentile {percentile} outside (50, 100]"
        )));
    }
    let mut pool = Vec::with_capacity(warmup.len() * layer.n_rows());
    for p in warmup {
        pool.extend(model.propagate(layer, p)?);
    }
    percentile_of(&mut pool, percentile)
}

/// Nearest-rank percentile of intensities already pooled by the caller.
pub fn percentile_of(pool: &mut [f64], percentile: f64) -> Result<f64> {
    if pool.iter().all(|&v| v == 0.0) {
        return Err(Error::Calibration(
            "all warm-up intensities are zero; optics are degenerate".into(),
        ));
    }
    pool.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = pool.len();
    let rank = ((percentile / 100.0) * n as f64).ceil() as usize;
    Ok(pool[rank.clamp(1, n) - 1])
}

/// 8-bit camera detection: clip `intensity / scale` to [0,1], then quantize.
pub fn detect(intensity: &[f64], scale: f64) -> Result<Quantized8> {
    if !(scale > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "detection scale must be positive, got {scale}"
        )));
    }
    Ok(quantize8(
        &intensity.iter().map(|&v| v / scale).collect::<Vec<_>>(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn toy_layer(rows: usize, input: usize, state: usize, bias: usize, frac: f64) -> LayerOptics {
        LayerOptics::new(0..rows, 0, input, state, bias, frac, 42, 1).unwrap()
    }

    #[test]
    fn build_is_deterministic_and_seed_sensitive() {
        let a = TransmissionModel::build(7, 16, 24).unwrap();
        let b = TransmissionModel::build(7, 16, 24).unwrap();
        let c = TransmissionModel::build(8, 16, 24).unwrap();
        for j in 0..24 {
            assert_eq!(a.col(j), b.col(j));
        }
        assert!((0..24).any(|j| a.col(j) != c.col(j)));
    }

    #[test]
    fn entries_have_unit_mean_intensity() {
        let m = TransmissionModel::build(11, 1000, 1000).unwrap();
        let mean: f64 = (0..1000)
            .map(|j| m.col(j).iter().map(|c| c.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            / 1e6;
        assert!((0.95..=1.05).contains(&mean), "mean |m|^2 = {mean}");
    }

    #[test]
    fn build_rejects_oversized_request() {
        match TransmissionModel::build_with_cap(1, 1000, 1000, 100) {
            Err(Error::Resource(_)) => {}
            other => panic!("expected resource error, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn zero_pattern_gives_zero_intensity() {
        let m = TransmissionModel::build(3, 8, 30).unwrap();
        let layer = toy_layer(8, 10, 10, 10, 0.0);
        let out = m.propagate(&layer, &BinaryPattern::zeros(30)).unwrap();
        assert!(out.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_bit_selects_one_column() {
        let m = TransmissionModel::build(5, 8, 30).unwrap();
        let layer = toy_layer(8, 10, 10, 10, 0.0);
        let mut bits = vec![0u8; 30];
        bits[3] = 1;
        let out = m.propagate(&layer, &BinaryPattern::new(bits)).unwrap();
        for (k, &v) in out.iter().enumerate() {
            assert!((v - m.entry(k, 3).norm_sqr()).abs() < 1e-15);
        }
    }

    #[test]
    fn one_bit_flip_changes_output() {
        let m = TransmissionModel::build(9, 8, 24).unwrap();
        let layer = toy_layer(8, 8, 8, 8, 0.0);
        let mut a = vec![0u8; 24];
        a[0] = 1;
        a[5] = 1;
        let mut b = a.clone();
        b[5] = 0;
        b[6] = 1;
        let ia = m.propagate(&layer, &BinaryPattern::new(a)).unwrap();
        let ib = m.propagate(&layer, &BinaryPattern::new(b)).unwrap();
        assert_ne!(ia, ib);
    }

    #[test]
    fn field_is_additive_intensity_is_not() {
        // seeded 8x8 instance: disjoint supports p1, p2
        let m = TransmissionModel::build(13, 8, 24).unwrap();
        let layer = toy_layer(8, 8, 8, 8, 0.0);
        let mut b1 = vec![0u8; 24];
        let mut b2 = vec![0u8; 24];
        for j in 0..6 {
            b1[j] = 1;
            b2[8 + j] = 1;
        }
        let mut both = vec![0u8; 24];
        for j in 0..24 {
            both[j] = b1[j] | b2[j];
        }
        let p1 = BinaryPattern::new(b1);
        let p2 = BinaryPattern::new(b2);
        let p12 = BinaryPattern::new(both);

        let f1 = m.field(&layer, &p1).unwrap();
        let f2 = m.field(&layer, &p2).unwrap();
        let f12 = m.field(&layer, &p12).unwrap();
        for k in 0..8 {
            let sum = f1[k] + f2[k];
            assert!((sum - f12[k]).norm() <= 1e-12 * (1.0 + sum.norm()));
        }

        let i1 = m.propagate(&layer, &p1).unwrap();
        let i2 = m.propagate(&layer, &p2).unwrap();
        let i12 = m.propagate(&layer, &p12).unwrap();
        let max_gap = (0..8)
            .map(|k| (i12[k] - i1[k] - i2[k]).abs())
            .fold(0.0f64, f64::max);
        assert!(max_gap > 1e-6, "modulus-square cross terms missing: {max_gap}");
    }

    #[test]
    fn chunk_path_matches_single_pattern_path_bitwise() {
        let m = TransmissionModel::build(3, 12, 40).unwrap();
        let layer = toy_layer(12, 15, 15, 10, 0.3);
        let mut rng = stream(5, "chunk-test");
        let patterns: Vec<BinaryPattern> = (0..17)
            .map(|_| {
                let mut bits: Vec<u8> = (0..30).map(|_| u8::from(rng.random::<f64>() < 0.4)).collect();
                bits.extend_from_slice(layer.bias_pattern.as_slice());
                BinaryPattern::new(bits)
            })
            .collect();
        let batch = m.propagate_chunk(&layer, &patterns).unwrap();
        for (p, row) in patterns.iter().zip(&batch) {
            let single = m.propagate(&layer, p).unwrap();
            assert_eq!(&single, row);
        }
    }

    #[test]
    fn layers_with_different_bias_patterns_differ() {
        let m = TransmissionModel::build(21, 8, 40).unwrap();
        let la = LayerOptics::new(0..8, 0, 10, 10, 20, 0.4, 1, 1).unwrap();
        let lb = LayerOptics::new(0..8, 0, 10, 10, 20, 0.4, 1, 2).unwrap();
        assert_ne!(la.bias_pattern, lb.bias_pattern);
        let input = vec![1u8, 0, 1, 0, 1, 0, 1, 0, 1, 0];
        let state = vec![0u8, 1, 0, 1, 0, 1, 0, 1, 0, 1];
        let pa = la.assemble(&input, &state).unwrap();
        let pb = lb.assemble(&input, &state).unwrap();
        let da = detect(&m.propagate(&la, &pa).unwrap(), 20.0).unwrap();
        let db = detect(&m.propagate(&lb, &pb).unwrap(), 20.0).unwrap();
        assert_ne!(da, db);
    }

    #[test]
    fn bias_fraction_is_realized_within_one_slot() {
        for &frac in &[0.0, 0.1, 0.15, 0.3, 1.0] {
            let layer = toy_layer(4, 4, 4, 40, frac);
            assert!((layer.bias_on_fraction() - frac).abs() <= 1.0 / 40.0 + 1e-12);
        }
    }

    #[test]
    fn propagate_rejects_wrong_length() {
        let m = TransmissionModel::build(1, 4, 30).unwrap();
        let layer = toy_layer(4, 10, 10, 10, 0.0);
        assert!(matches!(
            m.propagate(&layer, &BinaryPattern::zeros(29)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn calibration_constant_distribution_and_max() {
        let mut pool = vec![3.5; 500];
        assert_eq!(percentile_of(&mut pool, 99.0).unwrap(), 3.5);
        let mut pool: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(percentile_of(&mut pool, 100.0).unwrap(), 100.0);
    }

    #[test]
    fn calibration_guards() {
        let m = TransmissionModel::build(2, 4, 30).unwrap();
        let layer = toy_layer(4, 10, 10, 10, 0.0);
        let warmup: Vec<BinaryPattern> = (0..40).map(|_| BinaryPattern::zeros(30)).collect();
        assert!(matches!(
            calibrate_scale(&m, &layer, &warmup[..10], 99.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            calibrate_scale(&m, &layer, &warmup, 40.0),
            Err(Error::InvalidParameter(_))
        ));
        // all-zero patterns -> degenerate optics
        assert!(matches!(
            calibrate_scale(&m, &layer, &warmup, 99.0),
            Err(Error::Calibration(_))
        ));
    }

    #[test]
    fn detection_boundaries() {
        assert_eq!(detect(&[0.0, 0.0], 4.0).unwrap().levels(), &[0, 0]);
        assert_eq!(detect(&[4.0], 4.0).unwrap().levels(), &[255]);
        assert_eq!(detect(&[2.0], 4.0).unwrap().levels(), &[128]);
        assert_eq!(detect(&[9.0], 4.0).unwrap().levels(), &[255]);
        assert!(matches!(detect(&[1.0], 0.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn saturation_fraction_tracks_percentile() {
        // exponential-like speckle from random patterns at ~40% density
        let m = TransmissionModel::build(99, 64, 60).unwrap();
        let layer = toy_layer(64, 25, 25, 10, 0.2);
        let mut rng = stream(17, "warmup");
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut bits: Vec<u8> = (0..50).map(|_| u8::from(rng.random::<f64>() < 0.4)).collect();
            bits.extend_from_slice(layer.bias_pattern.as_slice());
            BinaryPattern::new(bits)
        };
        let warmup: Vec<BinaryPattern> = (0..400).map(|_| draw(&mut rng)).collect();
        let scale = calibrate_scale(&m, &layer, &warmup, 99.0).unwrap();

        let mut rng = stream(18, "fresh");
        let fresh: Vec<BinaryPattern> = (0..400).map(|_| draw(&mut rng)).collect();
        let mut total = 0usize;
        let mut clipped = 0usize;
        for p in &fresh {
            for v in m.propagate(&layer, p).unwrap() {
                total += 1;
                if v > scale {
                    clipped += 1;
                }
            }
        }
        let frac = clipped as f64 / total as f64;
        assert!((frac - 0.01).abs() <= 0.005, "saturated fraction {frac}");
    }
}
