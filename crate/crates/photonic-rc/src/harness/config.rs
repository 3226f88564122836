//! Declarative experiment configuration: a sectioned TOML file with typed
//! keys. Every field has a default; the resolved configuration (defaults
//! applied, seeds injected) is serialized back into the report together with
//! its SHA-256 digest, so runs are diffable and reproducible.
//!
//! Seed policy: the `[seeds]` section is authoritative. `architecture.bias_seed`
//! and `optics.seed` are derived from it when a run is assembled (repetition
//! `r` uses `seeds.optics + r`), and any values given for them directly are
//! overwritten.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

use super::synthetic::SynthConfig;
use crate::error::{Error, Result};
use crate::reservoir::{Aggregation, DeepConfig, OpticsParams};

/// Environment variable naming the dataset root directory (default `./data`).
pub const DATA_ROOT_ENV: &str = "PHOTONIC_RC_DATA";

pub fn data_root() -> PathBuf {
    std::env::var_os(DATA_ROOT_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DatasetKind {
    #[serde(rename = "mnist")]
    Mnist,
    #[serde(rename = "sequence-dir")]
    SequenceDir,
    #[serde(rename = "synthetic")]
    Synthetic,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetConfig {
    pub kind: DatasetKind,
    /// Directory under the data root (or absolute) for mnist / sequence-dir.
    pub path: String,
    /// Generator parameters when `kind = "synthetic"`.
    pub synth: SynthConfig,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            kind: DatasetKind::Synthetic,
            path: String::new(),
            synth: SynthConfig::default(),
        }
    }
}

impl DatasetConfig {
    pub fn resolved_path(&self) -> PathBuf {
        let p = Path::new(&self.path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            data_root().join(p)
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessingConfig {
    pub hog_cell: usize,
    pub hog_block: usize,
    pub hog_bins: usize,
    pub hog_signed: bool,
    pub pca_components: usize,
    pub pca_per_position: bool,
    /// Enforce the 86-channel / 130-step cochleagram geometry.
    pub ti46_mode: bool,
}

impl Default for PreprocessingConfig {
    fn default() -> Self {
        Self {
            hog_cell: 7,
            hog_block: 1,
            hog_bins: 9,
            hog_signed: false,
            pca_components: 25,
            pca_per_position: false,
            ti46_mode: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ReadoutConfig {
    pub lambda_grid: Vec<f64>,
    pub folds: usize,
    pub standardize: bool,
}

impl Default for ReadoutConfig {
    fn default() -> Self {
        Self {
            lambda_grid: (-6..=6).map(|e| 10f64.powi(e)).collect(),
            folds: 3,
            standardize: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CvProtocol {
    #[serde(rename = "holdout")]
    Holdout,
    #[serde(rename = "mnist-7fold")]
    Mnist7Fold,
    #[serde(rename = "ti46-grouped-10fold")]
    Ti46Grouped10Fold,
    #[serde(rename = "kth-central-2fold")]
    KthCentral2Fold,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ProtocolConfig {
    pub cv: CvProtocol,
    pub aggregation: Aggregation,
    /// Holdout train share (sequence datasets).
    pub train_fraction: f64,
    /// Desk-scale MNIST holdout subsample sizes; 0 means the full pool.
    pub mnist_train_subsample: usize,
    pub mnist_test_subsample: usize,
    /// Independent experiments with optics seeds `optics, optics+1, ...`.
    pub repetitions: usize,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            cv: CvProtocol::Holdout,
            aggregation: Aggregation::Final,
            train_fraction: 0.75,
            mnist_train_subsample: 10000,
            mnist_test_subsample: 2000,
            repetitions: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct Seeds {
    pub optics: u64,
    pub bias: u64,
    pub shuffle: u64,
}

impl Default for Seeds {
    fn default() -> Self {
        Self {
            optics: 1,
            bias: 2,
            shuffle: 3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct OutputConfig {
    pub dir: String,
    /// When non-empty, the first training sample's state trajectory is
    /// dumped to this file (relative to `dir`).
    pub trajectory_dump: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct ExperimentConfig {
    pub dataset: DatasetConfig,
    pub preprocessing: PreprocessingConfig,
    pub architecture: DeepConfig,
    pub optics: OpticsParams,
    pub readout: ReadoutConfig,
    pub protocol: ProtocolConfig,
    pub seeds: Seeds,
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let mut cfg: ExperimentConfig = toml::from_str(text)
            .map_err(|e| Error::Format(format!("config parse error: {e}")))?;
        cfg.normalize();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Applies the seed policy (the `[seeds]` section is authoritative).
    fn normalize(&mut self) {
        self.architecture.bias_seed = self.seeds.bias;
        self.optics.seed = self.seeds.optics;
    }

    pub fn validate(&self) -> Result<()> {
        let r = &self.readout;
        if r.lambda_grid.is_empty() {
            return Err(Error::InvalidParameter("readout.lambda_grid is empty".into()));
        }
        if r.lambda_grid.iter().any(|&l| !(l > 0.0))
            || r.lambda_grid.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidParameter(
                "readout.lambda_grid must be strictly positive and ascending".into(),
            ));
        }
        if r.folds < 2 {
            return Err(Error::InvalidParameter("readout.folds must be at least 2".into()));
        }
        if self.protocol.repetitions == 0 {
            return Err(Error::InvalidParameter("protocol.repetitions must be positive".into()));
        }
        // surfaces allocation/schedule problems before any data is loaded
        self.architecture.layer_configs()?;
        Ok(())
    }

    /// Canonical serialization of the fully resolved configuration.
    pub fn resolved_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.resolved_toml().as_bytes());
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reservoir::AllocationStrategy;

    #[test]
    fn defaults_round_trip_and_digest_is_stable() {
        let cfg = ExperimentConfig::from_toml("").unwrap();
        assert_eq!(cfg.readout.lambda_grid.len(), 13);
        assert_eq!(cfg.architecture.depth, 5);
        let text = cfg.resolved_toml();
        let back = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(back.digest(), cfg.digest());
    }

    #[test]
    fn sections_parse_and_seeds_are_authoritative() {
        let text = r#"
[dataset]
kind = "synthetic"

[dataset.synth]
kind = "delayed-recall"
classes = 3

[architecture]
depth = 2
total_neurons = 100
allocation = "uniform"
bias_seed = 999

[seeds]
optics = 7
bias = 8
shuffle = 9

[protocol]
cv = "holdout"
aggregation = "mean"
"#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(cfg.dataset.synth.classes, 3);
        assert_eq!(cfg.architecture.allocation, AllocationStrategy::Uniform);
        // seeds section wins over inline bias_seed
        assert_eq!(cfg.architecture.bias_seed, 8);
        assert_eq!(cfg.optics.seed, 7);
        assert_eq!(cfg.protocol.aggregation, Aggregation::Mean);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(ExperimentConfig::from_toml("[readout]\nlambda_grid = []").is_err());
        assert!(ExperimentConfig::from_toml("[readout]\nlambda_grid = [1.0, 1.0]").is_err());
        assert!(ExperimentConfig::from_toml("[readout]\nfolds = 1").is_err());
        // budget too small for the default depth of 5
        assert!(ExperimentConfig::from_toml("[architecture]\ntotal_neurons = 50").is_err());
    }

    #[test]
    fn digest_tracks_any_field_change() {
        let a = ExperimentConfig::from_toml("").unwrap();
        let b = ExperimentConfig::from_toml("[seeds]\noptics = 2").unwrap();
        assert_ne!(a.digest(), b.digest());
    }
}
