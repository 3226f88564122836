//! Deep time-multiplexed reservoir dynamics.
//!
//! Layer `l` updates its stored 8-bit state as
//! `r_n = (1 - alpha_l) * r_{n-1} + alpha_l * detect(|M [u | x_{n-1} | bias]|^2)`
//! where `u` is the basket-encoded external input for layer 1 and the freshly
//! updated encoded state of layer `l-1` (same time step) for deeper layers.
//! Mixing happens on dequantized reals and is re-quantized to 8 bits each
//! step, matching the stored-state resolution of the physical loop.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::sync::Arc;

use crate::encoding::{quantize8_scalar, BasketCodec, BinaryPattern, Quantized8};
use crate::error::{Error, Result};
use crate::optics::{detect, percentile_of, LayerOptics, TransmissionModel, DEFAULT_ENTRY_CAP};

/// Samples advanced in lockstep per worker; keeps the per-chunk field
/// accumulators cache-resident while each matrix column is streamed once.
const CHUNK: usize = 24;

/// How the per-layer neuron budget is distributed over depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AllocationStrategy {
    #[serde(rename = "decreasing-power-law")]
    DecreasingPowerLaw,
    #[serde(rename = "uniform")]
    Uniform,
    #[serde(rename = "increasing")]
    Increasing,
}

/// Distributes `total` neurons over `depth` layers.
///
/// The decreasing strategy weights layer `l` by `l^-gamma`, normalizes,
/// rounds each share to a multiple of 25 (half up), and absorbs the rounding
/// residue into layer 1, again as a multiple of 25. The increasing strategy
/// is the exact reversal of the decreasing list; uniform rounds `total/depth`
/// to a multiple of 25 for every layer.
pub fn allocate_neurons(
    total: usize,
    depth: usize,
    gamma: f64,
    strategy: AllocationStrategy,
) -> Result<Vec<usize>> {
    if depth < 1 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    if total < 25 * depth {
        return Err(Error::Allocation(format!(
            "budget {total} cannot give {depth} layers at least 25 neurons each"
        )));
    }
    let round25 = |x: f64| -> i64 { 25 * (x / 25.0 + 0.5).floor() as i64 };
    let sizes: Vec<i64> = match strategy {
        AllocationStrategy::Uniform => {
            let per = round25(total as f64 / depth as f64);
            vec![per; depth]
        }
        AllocationStrategy::DecreasingPowerLaw | AllocationStrategy::Increasing => {
            let phi: Vec<f64> = (1..=depth).map(|l| (l as f64).powf(-gamma)).collect();
            let norm: f64 = phi.iter().sum();
            let mut sizes: Vec<i64> = phi
                .iter()
                .map(|w| round25(total as f64 * w / norm))
                .collect();
            let residue = total as i64 - sizes.iter().sum::<i64>();
            sizes[0] += round25(residue as f64);
            if strategy == AllocationStrategy::Increasing {
                sizes.reverse();
            }
            sizes
        }
    };
    if let Some(bad) = sizes.iter().find(|&&n| n < 25) {
        return Err(Error::Allocation(format!(
            "budget {total} over {depth} layers leaves a layer with {bad} < 25 neurons"
        )));
    }
    Ok(sizes.into_iter().map(|n| n as usize).collect())
}

/// Linear leakage schedule from `alpha_first` (layer 1) to `alpha_last`
/// (layer `depth`). Endpoints are returned exactly; `depth = 1` yields
/// `[alpha_first]`.
pub fn leakage_schedule(alpha_first: f64, alpha_last: f64, depth: usize) -> Result<Vec<f64>> {
    for &a in &[alpha_first, alpha_last] {
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::InvalidParameter(format!("leakage rate {a} outside (0,1]")));
        }
    }
    if depth < 1 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    if depth == 1 {
        return Ok(vec![alpha_first]);
    }
    Ok((0..depth)
        .map(|l| {
            if l == depth - 1 {
                alpha_last
            } else {
                alpha_first + (alpha_last - alpha_first) * l as f64 / (depth - 1) as f64
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BiasProfileKind {
    #[serde(rename = "uniform")]
    Uniform,
    #[serde(rename = "mild-increasing")]
    MildIncreasing,
}

/// Per-layer fraction of bias micromirrors held ON.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct BiasProfile {
    pub kind: BiasProfileKind,
    pub base: f64,
    pub increment: f64,
}

impl Default for BiasProfile {
    fn default() -> Self {
        Self {
            kind: BiasProfileKind::MildIncreasing,
            base: 0.10,
            increment: 0.05,
        }
    }
}

impl BiasProfile {
    pub fn fraction(&self, layer: usize) -> f64 {
        match self.kind {
            BiasProfileKind::Uniform => self.base,
            BiasProfileKind::MildIncreasing => self.base + self.increment * layer as f64,
        }
    }
}

/// Declarative description of a deep reservoir architecture.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct DeepConfig {
    pub depth: usize,
    pub total_neurons: usize,
    pub allocation: AllocationStrategy,
    pub gamma: f64,
    pub alpha_first: f64,
    pub alpha_last: f64,
    pub bias_profile: BiasProfile,
    pub n_bin: usize,
    pub bias_seed: u64,
    pub washout: usize,
}

impl Default for DeepConfig {
    fn default() -> Self {
        Self {
            depth: 5,
            total_neurons: 500,
            allocation: AllocationStrategy::DecreasingPowerLaw,
            gamma: 1.2,
            alpha_first: 0.95,
            alpha_last: 0.65,
            bias_profile: BiasProfile::default(),
            n_bin: 10,
            bias_seed: 2,
            washout: 0,
        }
    }
}

/// One resolved layer: size, leakage, bias fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerConfig {
    pub n_neurons: usize,
    pub alpha: f64,
    pub bias_fraction: f64,
}

impl DeepConfig {
    pub fn layer_configs(&self) -> Result<Vec<LayerConfig>> {
        let sizes = allocate_neurons(self.total_neurons, self.depth, self.gamma, self.allocation)?;
        let alphas = leakage_schedule(self.alpha_first, self.alpha_last, self.depth)?;
        sizes
            .into_iter()
            .zip(alphas)
            .enumerate()
            .map(|(l, (n, alpha))| {
                let bias_fraction = self.bias_profile.fraction(l);
                if !(0.0..=1.0).contains(&bias_fraction) {
                    return Err(Error::InvalidParameter(format!(
                        "bias profile gives fraction {bias_fraction} at layer {} (outside [0,1])",
                        l + 1
                    )));
                }
                Ok(LayerConfig {
                    n_neurons: n,
                    alpha,
                    bias_fraction,
                })
            })
            .collect()
    }
}

/// Optics construction knobs (artifact plumbing around the physics).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct OpticsParams {
    pub seed: u64,
    pub calibration_percentile: f64,
    /// Training samples used for exposure calibration.
    pub warmup_samples: usize,
    /// Bias region width as a fraction of the layer's state region width.
    pub bias_width_fraction: f64,
    pub entry_cap: usize,
}

impl Default for OpticsParams {
    fn default() -> Self {
        Self {
            seed: 1,
            calibration_percentile: 99.0,
            warmup_samples: 32,
            bias_width_fraction: 0.1,
            entry_cap: DEFAULT_ENTRY_CAP,
        }
    }
}

/// Per-layer live state: stored 8-bit levels plus their cached basket
/// encoding (`x = G[r]`, kept coherent after every update).
#[derive(Debug, Clone, PartialEq)]
pub struct LayerState {
    pub r: Quantized8,
    pub x: BinaryPattern,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirState {
    pub layers: Vec<LayerState>,
    pub time_index: usize,
}

/// How a sample's per-step states collapse into one readout vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Aggregation {
    #[serde(rename = "final")]
    Final,
    #[serde(rename = "mean")]
    Mean,
    #[serde(rename = "concat-all-steps")]
    ConcatAllSteps,
}

struct Layer {
    config: LayerConfig,
    optics: LayerOptics,
}

/// A calibrated deep reservoir bound to one transmission matrix.
pub struct DeepReservoir {
    codec: BasketCodec,
    model: Arc<TransmissionModel>,
    layers: Vec<Layer>,
    input_dim: usize,
    washout: usize,
}

impl DeepReservoir {
    /// Builds the optics for `deep`, then calibrates each layer's detection
    /// scale on the warm-up sequences (training data only). Calibration runs
    /// a frozen-state pass for a provisional exposure and two dynamic passes
    /// to settle on operating statistics; scales are frozen afterwards.
    pub fn build(
        deep: &DeepConfig,
        optics: &OpticsParams,
        input_dim: usize,
        warmup: &[Vec<Vec<f64>>],
    ) -> Result<Self> {
        let mut rc = Self::assemble(deep, optics, input_dim)?;
        rc.calibrate(optics, warmup)?;
        Ok(rc)
    }

    fn assemble(deep: &DeepConfig, optics: &OpticsParams, input_dim: usize) -> Result<Self> {
        let codec = BasketCodec::new(deep.n_bin)?;
        let configs = deep.layer_configs()?;
        let n_bin = deep.n_bin;

        let mut layers = Vec::with_capacity(configs.len());
        let mut n_cols = 0usize;
        let mut n_rows = 0usize;
        for (l, cfg) in configs.iter().enumerate() {
            let input_width = if l == 0 {
                input_dim * n_bin
            } else {
                configs[l - 1].n_neurons * n_bin
            };
            let state_width = cfg.n_neurons * n_bin;
            let bias_width =
                ((optics.bias_width_fraction * state_width as f64).round() as usize).max(n_bin);
            let lo = LayerOptics::new(
                0..cfg.n_neurons,
                0,
                input_width,
                state_width,
                bias_width,
                cfg.bias_fraction,
                deep.bias_seed,
                l + 1,
            )?;
            n_cols = n_cols.max(lo.pattern_width());
            n_rows = n_rows.max(cfg.n_neurons);
            layers.push(Layer {
                config: cfg.clone(),
                optics: lo,
            });
        }
        let model = Arc::new(TransmissionModel::build_with_cap(
            optics.seed,
            n_rows,
            n_cols,
            optics.entry_cap,
        )?);
        Ok(Self {
            codec,
            model,
            layers,
            input_dim,
            washout: deep.washout,
        })
    }

    fn calibrate(&mut self, optics: &OpticsParams, warmup: &[Vec<Vec<f64>>]) -> Result<()> {
        let warmup = &warmup[..warmup.len().min(optics.warmup_samples)];
        let n_patterns: usize = warmup.iter().map(|s| s.len()).sum();
        if n_patterns < 32 {
            return Err(Error::InvalidParameter(format!(
                "calibration needs at least 32 warm-up patterns, got {n_patterns}"
            )));
        }

        // Frozen pass: states pinned at reset, giving a provisional exposure
        // that does not depend on any scale.
        let mut pools: Vec<Vec<f64>> = vec![Vec::new(); self.layers.len()];
        for frames in warmup {
            let state = self.reset_state();
            for frame in frames {
                let u1 = self.codec.encode_vector(frame)?;
                let mut u: Vec<u8> = u1.as_slice().to_vec();
                for (l, layer) in self.layers.iter().enumerate() {
                    let pattern = layer.optics.assemble(&u, state.layers[l].x.as_slice())?;
                    pools[l].extend(self.model.propagate(&layer.optics, &pattern)?);
                    u = state.layers[l].x.as_slice().to_vec();
                }
            }
        }
        self.apply_scales(optics.calibration_percentile, pools)?;

        // Dynamic passes: full feedback under the current scales.
        for _ in 0..2 {
            let mut pools: Vec<Vec<f64>> = vec![Vec::new(); self.layers.len()];
            for frames in warmup {
                let mut state = self.reset_state();
                for frame in frames {
                    self.step_deep_collect(frame, &mut state, Some(&mut pools))?;
                }
            }
            self.apply_scales(optics.calibration_percentile, pools)?;
        }
        Ok(())
    }

    fn apply_scales(&mut self, percentile: f64, mut pools: Vec<Vec<f64>>) -> Result<()> {
        for (layer, pool) in self.layers.iter_mut().zip(pools.iter_mut()) {
            layer.optics.scale = percentile_of(pool, percentile)?;
        }
        Ok(())
    }

    pub fn codec(&self) -> &BasketCodec {
        &self.codec
    }

    pub fn model(&self) -> &TransmissionModel {
        &self.model
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn layer_config(&self, l: usize) -> &LayerConfig {
        &self.layers[l].config
    }

    pub fn layer_optics(&self, l: usize) -> &LayerOptics {
        &self.layers[l].optics
    }

    pub fn total_neurons(&self) -> usize {
        self.layers.iter().map(|l| l.config.n_neurons).sum()
    }

    /// Readout vector length for a sample of `seq_len` steps.
    pub fn readout_dim(&self, agg: Aggregation, seq_len: usize) -> usize {
        match agg {
            Aggregation::Final | Aggregation::Mean => self.total_neurons(),
            Aggregation::ConcatAllSteps => {
                self.total_neurons() * seq_len.saturating_sub(self.washout)
            }
        }
    }

    /// Fresh all-zero-level state with coherent encodings.
    pub fn reset_state(&self) -> ReservoirState {
        let layers = self
            .layers
            .iter()
            .map(|layer| {
                let n = layer.config.n_neurons;
                let r = Quantized8::zeros(n);
                let mut x = BinaryPattern::zeros(n * self.codec.n_bin());
                self.codec.encode_levels_into(r.levels(), x.as_mut_slice());
                LayerState { r, x }
            })
            .collect();
        ReservoirState {
            layers,
            time_index: 0,
        }
    }

    fn step_layer_on(
        &self,
        l: usize,
        u_bits: &[u8],
        ls: &mut LayerState,
        sink: Option<&mut Vec<f64>>,
    ) -> Result<()> {
        let layer = &self.layers[l];
        let pattern = layer.optics.assemble(u_bits, ls.x.as_slice())?;
        let intensity = self.model.propagate(&layer.optics, &pattern)?;
        if let Some(sink) = sink {
            sink.extend_from_slice(&intensity);
        }
        let detected = detect(&intensity, layer.optics.scale)?;
        self.mix_into(l, &detected, ls);
        Ok(())
    }

    fn mix_into(&self, l: usize, detected: &Quantized8, ls: &mut LayerState) {
        let alpha = self.layers[l].config.alpha;
        let new_levels: Vec<u8> = ls
            .r
            .levels()
            .iter()
            .zip(detected.levels())
            .map(|(&old, &v)| mix_level(old, v, alpha))
            .collect();
        ls.r = Quantized8::new(new_levels);
        self.codec.encode_levels_into(ls.r.levels(), ls.x.as_mut_slice());
    }

    /// One update of a single layer. `u_bits` must match the layer's input
    /// region width. Does not advance the time index.
    pub fn step_layer(
        &self,
        l: usize,
        u_bits: &BinaryPattern,
        state: &mut ReservoirState,
    ) -> Result<()> {
        if l >= self.layers.len() {
            return Err(Error::Shape(format!("layer index {l} out of range")));
        }
        self.step_layer_on(l, u_bits.as_slice(), &mut state.layers[l], None)
    }

    /// One full deep update: layer 1 consumes the encoded external input and
    /// each deeper layer consumes the freshly updated encoded state of its
    /// predecessor at the same time step.
    pub fn step_deep(&self, input: &[f64], state: &mut ReservoirState) -> Result<()> {
        self.step_deep_collect(input, state, None)
    }

    fn step_deep_collect(
        &self,
        input: &[f64],
        state: &mut ReservoirState,
        mut pools: Option<&mut Vec<Vec<f64>>>,
    ) -> Result<()> {
        if input.len() != self.input_dim {
            return Err(Error::Shape(format!(
                "input dimension {} does not match configured {}",
                input.len(),
                self.input_dim
            )));
        }
        let u1 = self.codec.encode_vector(input)?;
        let sink = pools.as_deref_mut().map(|p| &mut p[0]);
        self.step_layer_on(0, u1.as_slice(), &mut state.layers[0], sink)?;
        for l in 1..self.layers.len() {
            let (head, tail) = state.layers.split_at_mut(l);
            let sink = pools.as_deref_mut().map(|p| &mut p[l]);
            self.step_layer_on(l, head[l - 1].x.as_slice(), &mut tail[0], sink)?;
        }
        state.time_index += 1;
        Ok(())
    }

    /// Drives one sample from a reset state and aggregates the dequantized
    /// layer-concatenated states into a readout vector.
    pub fn run_sequence(&self, frames: &[Vec<f64>], agg: Aggregation) -> Result<Vec<f64>> {
        if frames.is_empty() {
            return Err(Error::InvalidInput("empty sample sequence".into()));
        }
        if self.washout >= frames.len() {
            return Err(Error::InvalidInput(format!(
                "washout {} leaves no usable steps in a {}-step sample",
                self.washout,
                frames.len()
            )));
        }
        let mut state = self.reset_state();
        let mut agg_state = AggState::new(self, agg, frames.len());
        for (n, frame) in frames.iter().enumerate() {
            self.step_deep(frame, &mut state)?;
            agg_state.observe(self, n, &state);
        }
        Ok(agg_state.finish())
    }

    /// Batched [`run_sequence`]: samples are grouped by length and advanced
    /// in lockstep chunks, in parallel. Results are bit-identical to the
    /// per-sample path.
    ///
    /// [`run_sequence`]: DeepReservoir::run_sequence
    pub fn run_batch(&self, samples: &[Vec<Vec<f64>>], agg: Aggregation) -> Result<Vec<Vec<f64>>> {
        let mut by_len: Vec<usize> = (0..samples.len()).collect();
        by_len.sort_by_key(|&i| samples[i].len());
        let chunks: Vec<&[usize]> = by_len
            .chunk_by(|a, b| samples[*a].len() == samples[*b].len())
            .flat_map(|group| group.chunks(CHUNK))
            .collect();
        let results: Vec<(usize, Vec<f64>)> = chunks
            .into_par_iter()
            .map(|chunk| -> Result<Vec<(usize, Vec<f64>)>> {
                let seqs: Vec<&[Vec<f64>]> = chunk.iter().map(|&i| samples[i].as_slice()).collect();
                let outs = self.run_chunk(&seqs, agg)?;
                Ok(chunk.iter().copied().zip(outs).collect())
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let mut out: Vec<Option<Vec<f64>>> = vec![None; samples.len()];
        for (i, v) in results {
            out[i] = Some(v);
        }
        Ok(out.into_iter().map(Option::unwrap).collect())
    }

    fn run_chunk(&self, seqs: &[&[Vec<f64>]], agg: Aggregation) -> Result<Vec<Vec<f64>>> {
        let b = seqs.len();
        let t = seqs[0].len();
        if t == 0 {
            return Err(Error::InvalidInput("empty sample sequence".into()));
        }
        if self.washout >= t {
            return Err(Error::InvalidInput(format!(
                "washout {} leaves no usable steps in a {t}-step sample",
                self.washout
            )));
        }
        let mut states: Vec<ReservoirState> = (0..b).map(|_| self.reset_state()).collect();
        let mut aggs: Vec<AggState> = (0..b).map(|_| AggState::new(self, agg, t)).collect();
        let mut patterns: Vec<BinaryPattern> = Vec::with_capacity(b);
        for n in 0..t {
            for (l, layer) in self.layers.iter().enumerate() {
                patterns.clear();
                for (s, state) in states.iter().enumerate() {
                    let pattern = if l == 0 {
                        if seqs[s][n].len() != self.input_dim {
                            return Err(Error::Shape(format!(
                                "input dimension {} does not match configured {}",
                                seqs[s][n].len(),
                                self.input_dim
                            )));
                        }
                        let u1 = self.codec.encode_vector(&seqs[s][n])?;
                        layer.optics.assemble(u1.as_slice(), state.layers[l].x.as_slice())?
                    } else {
                        layer.optics.assemble(
                            state.layers[l - 1].x.as_slice(),
                            state.layers[l].x.as_slice(),
                        )?
                    };
                    patterns.push(pattern);
                }
                let intensities = self.model.propagate_chunk(&layer.optics, &patterns)?;
                for (state, intensity) in states.iter_mut().zip(&intensities) {
                    let detected = detect(intensity, layer.optics.scale)?;
                    self.mix_into(l, &detected, &mut state.layers[l]);
                }
            }
            for (state, agg_state) in states.iter_mut().zip(aggs.iter_mut()) {
                state.time_index += 1;
                agg_state.observe(self, n, state);
            }
        }
        Ok(aggs.into_iter().map(AggState::finish).collect())
    }

    /// Dequantized `[r^(1) | ... | r^(L)]` snapshot.
    pub fn concat_state(&self, state: &ReservoirState) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_neurons());
        for ls in &state.layers {
            out.extend(ls.r.levels().iter().map(|&v| v as f64 / 255.0));
        }
        out
    }

    /// Writes a per-step, per-layer, per-neuron trajectory of stored 8-bit
    /// levels as CSV (`step,layer,neuron,level`).
    pub fn dump_trajectory(&self, frames: &[Vec<f64>], path: &std::path::Path) -> Result<()> {
        let mut state = self.reset_state();
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "step,layer,neuron,level")?;
        for (n, frame) in frames.iter().enumerate() {
            self.step_deep(frame, &mut state)?;
            for (l, ls) in state.layers.iter().enumerate() {
                for (k, &level) in ls.r.levels().iter().enumerate() {
                    writeln!(out, "{},{},{},{}", n, l + 1, k, level)?;
                }
            }
        }
        Ok(())
    }
}

/// Leaky mix of one stored level with one detected level, re-quantized.
pub(crate) fn mix_level(old: u8, detected: u8, alpha: f64) -> u8 {
    quantize8_scalar((1.0 - alpha) * (old as f64 / 255.0) + alpha * (detected as f64 / 255.0))
}

enum AggState {
    Final { last: Vec<f64>, last_step: usize },
    Mean { sum: Vec<f64>, count: usize, washout: usize },
    Concat { out: Vec<f64>, washout: usize },
}

impl AggState {
    fn new(rc: &DeepReservoir, agg: Aggregation, seq_len: usize) -> Self {
        match agg {
            Aggregation::Final => AggState::Final {
                last: Vec::new(),
                last_step: seq_len - 1,
            },
            Aggregation::Mean => AggState::Mean {
                sum: vec![0.0; rc.total_neurons()],
                count: 0,
                washout: rc.washout,
            },
            Aggregation::ConcatAllSteps => AggState::Concat {
                out: Vec::with_capacity(rc.total_neurons() * (seq_len - rc.washout)),
                washout: rc.washout,
            },
        }
    }

    fn observe(&mut self, rc: &DeepReservoir, n: usize, state: &ReservoirState) {
        match self {
            AggState::Final { last, last_step } => {
                if n == *last_step {
                    *last = rc.concat_state(state);
                }
            }
            AggState::Mean { sum, count, washout } => {
                if n >= *washout {
                    for (acc, v) in sum.iter_mut().zip(rc.concat_state(state)) {
                        *acc += v;
                    }
                    *count += 1;
                }
            }
            AggState::Concat { out, washout } => {
                if n >= *washout {
                    out.extend(rc.concat_state(state));
                }
            }
        }
    }

    fn finish(self) -> Vec<f64> {
        match self {
            AggState::Final { last, .. } => last,
            AggState::Mean { sum, count, .. } => {
                sum.into_iter().map(|v| v / count as f64).collect()
            }
            AggState::Concat { out, .. } => out,
        }
    }
}
