//! Experiment orchestration: dataset loaders, cross-validation protocols,
//! config-driven runs, parametric sweeps, and result emission.

pub mod config;
pub mod cv;
pub mod experiment;
pub mod idx;
pub mod report;
pub mod sweep;
pub mod synthetic;

pub use config::{
    data_root, CvProtocol, DatasetConfig, DatasetKind, ExperimentConfig, OutputConfig,
    PreprocessingConfig, ProtocolConfig, ReadoutConfig, Seeds, DATA_ROOT_ENV,
};
pub use cv::{cv_kth_central, cv_mnist_7fold, cv_ti46_grouped, holdout_split, Split};
pub use experiment::{
    build_splits, fit_fold, fold_fitted_params, load_dataset, run_experiment, FittedParams,
    FoldArtifacts, LoadedData,
};
pub use idx::{load_idx_images, load_idx_labels, load_mnist, MnistData};
pub use report::{FoldRow, FoldStatus, RunReport};
pub use sweep::{run_sweep, SweepAxis, SweepGrid, SweepReport};
pub use synthetic::{synthetic_task, SynthConfig, SynthKind};
