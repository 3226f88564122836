//! End-to-end experiment orchestration.
//!
//! Each fold fits everything data-dependent (strip PCA or scaling bounds,
//! detector calibration, readout standardization, the regularization search)
//! on that fold's training indices only, drives the reservoir over all
//! samples, trains the readout, and scores the test block. A failing fold is
//! recorded in the report and does not abort the remaining folds.

use rand::seq::SliceRandom;
use std::path::Path;
use std::time::Instant;

use super::config::{CvProtocol, DatasetKind, ExperimentConfig};
use super::cv::{cv_kth_central, cv_mnist_7fold, cv_ti46_grouped, holdout_split, Split};
use super::idx::{load_mnist, MnistData};
use super::report::{FoldRow, FoldStatus, RunReport};
use super::synthetic::synthetic_task;
use crate::error::{Error, Result};
use crate::features::{
    normalize_sequence, Bounds, HogParams, MnistPipeline, MnistPipelineParams, SequenceDataset,
};
use crate::readout::{
    select_lambda, train_ridge, ConfusionMatrix, DesignMatrix, ReadoutModel, Standardization,
    TrainOptions,
};
use crate::reservoir::DeepReservoir;
use crate::rng::stream;

pub enum LoadedData {
    Mnist(MnistData),
    Sequences(SequenceDataset),
}

impl LoadedData {
    pub fn n_samples(&self) -> usize {
        match self {
            LoadedData::Mnist(d) => d.len(),
            LoadedData::Sequences(d) => d.samples.len(),
        }
    }

    pub fn class_names(&self) -> Vec<String> {
        match self {
            LoadedData::Mnist(_) => (0..10).map(|d| d.to_string()).collect(),
            LoadedData::Sequences(d) => d.class_names.clone(),
        }
    }

    pub fn label(&self, i: usize) -> usize {
        match self {
            LoadedData::Mnist(d) => d.labels[i],
            LoadedData::Sequences(d) => d.samples[i].label,
        }
    }
}

/// Loads the configured dataset. In MNIST holdout mode the desk-scale
/// subsample is drawn here (train from the train pool, test from the test
/// pool, both seeded).
pub fn load_dataset(cfg: &ExperimentConfig) -> Result<LoadedData> {
    match cfg.dataset.kind {
        DatasetKind::Mnist => {
            let mut data = load_mnist(&cfg.dataset.resolved_path())?;
            if cfg.protocol.cv == CvProtocol::Holdout {
                let n_train = match cfg.protocol.mnist_train_subsample {
                    0 => data.train_count,
                    n => n.min(data.train_count),
                };
                let n_test = match cfg.protocol.mnist_test_subsample {
                    0 => data.test_count(),
                    n => n.min(data.test_count()),
                };
                // class-stratified seeded subsample
                let pick = |range: std::ops::Range<usize>, count: usize, tag: &str| {
                    let mut per_class: Vec<Vec<usize>> = vec![Vec::new(); 10];
                    for i in range {
                        per_class[data.labels[i]].push(i);
                    }
                    for (c, idx) in per_class.iter_mut().enumerate() {
                        idx.shuffle(&mut stream(cfg.seeds.shuffle, &format!("{tag}-{c}")));
                    }
                    let mut keep = Vec::with_capacity(count);
                    let mut round = 0usize;
                    while keep.len() < count {
                        for idx in &per_class {
                            if keep.len() < count {
                                if let Some(&i) = idx.get(round) {
                                    keep.push(i);
                                }
                            }
                        }
                        round += 1;
                    }
                    keep
                };
                let keep: Vec<usize> = pick(0..data.train_count, n_train, "mnist-subsample-train")
                    .into_iter()
                    .chain(pick(data.train_count..data.len(), n_test, "mnist-subsample-test"))
                    .collect();
                data = MnistData {
                    images: keep.iter().map(|&i| data.images[i].clone()).collect(),
                    labels: keep.iter().map(|&i| data.labels[i]).collect(),
                    train_count: n_train,
                };
            }
            Ok(LoadedData::Mnist(data))
        }
        DatasetKind::SequenceDir => Ok(LoadedData::Sequences(
            crate::features::load_sequence_dir(&cfg.dataset.resolved_path())?,
        )),
        DatasetKind::Synthetic => Ok(LoadedData::Sequences(synthetic_task(&cfg.dataset.synth))),
    }
}

/// Builds the fold index splits for the configured protocol.
pub fn build_splits(cfg: &ExperimentConfig, data: &LoadedData) -> Result<Vec<Split>> {
    match (data, cfg.protocol.cv) {
        (LoadedData::Mnist(d), CvProtocol::Holdout) => Ok(vec![Split {
            train: (0..d.train_count).collect(),
            test: (d.train_count..d.len()).collect(),
        }]),
        (LoadedData::Mnist(d), CvProtocol::Mnist7Fold) => {
            cv_mnist_7fold(d.len(), cfg.seeds.shuffle)
        }
        (LoadedData::Mnist(_), other) => Err(Error::Protocol(format!(
            "protocol {other:?} needs a sequence dataset"
        ))),
        (LoadedData::Sequences(d), CvProtocol::Holdout) => holdout_split(
            d.samples.len(),
            cfg.protocol.train_fraction,
            cfg.seeds.shuffle,
        ),
        (LoadedData::Sequences(d), CvProtocol::Ti46Grouped10Fold) => {
            let labels: Vec<usize> = d.samples.iter().map(|s| s.label).collect();
            cv_ti46_grouped(&labels, d.n_classes(), cfg.seeds.shuffle)
        }
        (LoadedData::Sequences(d), CvProtocol::KthCentral2Fold) => {
            let tagged: Vec<(String, u32)> = d
                .samples
                .iter()
                .map(|s| (s.source_id.clone(), s.group))
                .collect();
            cv_kth_central(&tagged)
        }
        (LoadedData::Sequences(_), CvProtocol::Mnist7Fold) => Err(Error::Protocol(
            "the 7-fold MNIST protocol needs the MNIST dataset".into(),
        )),
    }
}

/// Everything fitted on a fold's training data; compared verbatim by the
/// no-leakage instrumentation test.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedParams {
    pub mnist_pipeline: Option<MnistPipeline>,
    pub bounds: Option<Bounds>,
    pub detection_scales: Vec<f64>,
    pub lambda: f64,
    pub standardization: Option<Standardization>,
}

pub struct FoldArtifacts {
    pub params: FittedParams,
    pub model: ReadoutModel,
    pub test_design: DesignMatrix,
    pub n_train: usize,
    pub n_test: usize,
}

struct FoldFeatures {
    train_seqs: Vec<Vec<Vec<f64>>>,
    test_seqs: Vec<Vec<Vec<f64>>>,
    train_labels: Vec<usize>,
    test_labels: Vec<usize>,
    mnist_pipeline: Option<MnistPipeline>,
    bounds: Option<Bounds>,
}

fn prepare_features(
    cfg: &ExperimentConfig,
    data: &LoadedData,
    train_idx: &[usize],
    test_idx: &[usize],
) -> Result<FoldFeatures> {
    let train_labels: Vec<usize> = train_idx.iter().map(|&i| data.label(i)).collect();
    let test_labels: Vec<usize> = test_idx.iter().map(|&i| data.label(i)).collect();
    match data {
        LoadedData::Mnist(d) => {
            let params = MnistPipelineParams {
                hog: HogParams {
                    cell_size: cfg.preprocessing.hog_cell,
                    block_size: cfg.preprocessing.hog_block,
                    n_orientations: cfg.preprocessing.hog_bins,
                    signed: cfg.preprocessing.hog_signed,
                },
                pca_components: cfg.preprocessing.pca_components,
                per_position: cfg.preprocessing.pca_per_position,
            };
            let pipeline =
                MnistPipeline::fit(train_idx.iter().map(|&i| &d.images[i]), &params)?;
            let transform = |idx: &[usize]| -> Result<Vec<Vec<Vec<f64>>>> {
                idx.iter().map(|&i| pipeline.transform(&d.images[i])).collect()
            };
            Ok(FoldFeatures {
                train_seqs: transform(train_idx)?,
                test_seqs: transform(test_idx)?,
                train_labels,
                test_labels,
                mnist_pipeline: Some(pipeline),
                bounds: None,
            })
        }
        LoadedData::Sequences(d) => {
            let bounds = Bounds::fit(train_idx.iter().map(|&i| &d.samples[i]))?;
            let ti46 = cfg.preprocessing.ti46_mode;
            let transform = |idx: &[usize]| -> Result<Vec<Vec<Vec<f64>>>> {
                idx.iter()
                    .map(|&i| Ok(normalize_sequence(&d.samples[i], &bounds, ti46)?.frames))
                    .collect()
            };
            Ok(FoldFeatures {
                train_seqs: transform(train_idx)?,
                test_seqs: transform(test_idx)?,
                train_labels,
                test_labels,
                mnist_pipeline: None,
                bounds: Some(bounds),
            })
        }
    }
}

/// Fits one fold end to end (preprocessing, calibration, reservoir features,
/// regularization search, readout). Everything data-dependent consumes the
/// training indices only; `trajectory` optionally dumps the first training
/// sample's state evolution.
pub fn fit_fold(
    cfg: &ExperimentConfig,
    data: &LoadedData,
    split: &Split,
    optics_seed: u64,
    fold_tag: usize,
    trajectory: Option<&Path>,
) -> Result<FoldArtifacts> {
    let mut train_idx = split.train.clone();
    train_idx.shuffle(&mut stream(
        cfg.seeds.shuffle,
        &format!("fold-{fold_tag}-order"),
    ));

    let features = prepare_features(cfg, data, &train_idx, &split.test)?;
    if features.train_seqs.is_empty() || features.test_seqs.is_empty() {
        return Err(Error::Protocol("fold with an empty train or test side".into()));
    }

    let mut optics = cfg.optics.clone();
    optics.seed = optics_seed;
    let input_dim = features.train_seqs[0][0].len();
    let reservoir = DeepReservoir::build(&cfg.architecture, &optics, input_dim, &features.train_seqs)?;
    if let Some(path) = trajectory {
        reservoir.dump_trajectory(&features.train_seqs[0], path)?;
    }

    let agg = cfg.protocol.aggregation;
    let train_cols = reservoir.run_batch(&features.train_seqs, agg)?;
    let test_cols = reservoir.run_batch(&features.test_seqs, agg)?;
    let class_names = data.class_names();
    let n_classes = class_names.len();
    let train_design = DesignMatrix::from_columns(train_cols, features.train_labels, n_classes)?;
    let test_design = DesignMatrix::from_columns(test_cols, features.test_labels, n_classes)?;

    let opts = TrainOptions {
        standardize: cfg.readout.standardize,
        class_names,
    };
    let lambda = select_lambda(
        &train_design,
        &cfg.readout.lambda_grid,
        cfg.readout.folds,
        &opts,
    )?;
    let model = train_ridge(&train_design, lambda, &opts)?;

    let detection_scales = (0..reservoir.depth())
        .map(|l| reservoir.layer_optics(l).scale)
        .collect();
    Ok(FoldArtifacts {
        params: FittedParams {
            mnist_pipeline: features.mnist_pipeline,
            bounds: features.bounds,
            detection_scales,
            lambda,
            standardization: model.standardization().cloned(),
        },
        model,
        test_design,
        n_train: split.train.len(),
        n_test: split.test.len(),
    })
}

/// Instrumentation entry point for the no-leakage check: returns only the
/// fitted parameters of one fold.
pub fn fold_fitted_params(
    cfg: &ExperimentConfig,
    data: &LoadedData,
    split: &Split,
    optics_seed: u64,
    fold_tag: usize,
) -> Result<FittedParams> {
    fit_fold(cfg, data, split, optics_seed, fold_tag, None).map(|a| a.params)
}

/// Runs the configured experiment: all repetitions and folds, with failing
/// folds recorded as failure markers rather than aborting the run.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    let started = Instant::now();
    cfg.validate()?;
    let data = load_dataset(cfg)?;
    let splits = build_splits(cfg, &data)?;

    let mut notes = Vec::new();
    if cfg.dataset.kind == DatasetKind::Mnist && cfg.protocol.cv == CvProtocol::Holdout {
        notes.push(format!(
            "non-paper-scale MNIST subsample: {} train / {} test (holdout)",
            cfg.protocol.mnist_train_subsample, cfg.protocol.mnist_test_subsample
        ));
    }
    if cfg.architecture.depth > 1 {
        notes.push(
            "per-layer sizes follow the configured allocation rule; the paper states only totals"
                .to_string(),
        );
    }

    let mut rows = Vec::new();
    let mut confusion: Option<ConfusionMatrix> = None;
    let mut first_error: Option<String> = None;
    for rep in 0..cfg.protocol.repetitions {
        let optics_seed = cfg.seeds.optics + rep as u64;
        for (fold, split) in splits.iter().enumerate() {
            let traj_path = cfg.output.dir.clone();
            let want_traj =
                rep == 0 && fold == 0 && !cfg.output.trajectory_dump.is_empty();
            let trajectory = if want_traj {
                std::fs::create_dir_all(&traj_path)?;
                Some(Path::new(&traj_path).join(&cfg.output.trajectory_dump))
            } else {
                None
            };
            let status = match fit_fold(cfg, &data, split, optics_seed, fold, trajectory.as_deref())
                .and_then(|art| Ok((art.model.score(&art.test_design)?, art)))
            {
                Ok(((accuracy, fold_confusion), art)) => {
                    match confusion.as_mut() {
                        Some(total) => total.merge(&fold_confusion),
                        None => confusion = Some(fold_confusion),
                    }
                    FoldStatus::Ok {
                        accuracy,
                        lambda: art.params.lambda,
                    }
                }
                Err(e) => {
                    let msg = e.to_string();
                    if first_error.is_none() {
                        first_error = Some(msg.clone());
                    }
                    FoldStatus::Failed { error: msg }
                }
            };
            rows.push(FoldRow {
                rep,
                fold,
                n_train: split.train.len(),
                n_test: split.test.len(),
                status,
            });
        }
    }

    if confusion.is_none() {
        return Err(Error::InvalidInput(format!(
            "every fold failed; first error: {}",
            first_error.unwrap_or_default()
        )));
    }
    Ok(RunReport::new(
        cfg,
        rows,
        confusion,
        notes,
        started.elapsed().as_secs_f64(),
    ))
}
