//! Run reports and their machine-readable emission.
//!
//! `results.csv` (one row per fold per repetition) and `confusion.csv` are
//! deterministic for fixed seeds; the wall clock appears only in the human
//! summary, which is excluded from the bit-identical guarantee.

use std::fmt::Write as _;
use std::path::Path;

use super::config::ExperimentConfig;
use crate::error::Result;
use crate::readout::ConfusionMatrix;

#[derive(Debug, Clone, PartialEq)]
pub enum FoldStatus {
    Ok { accuracy: f64, lambda: f64 },
    Failed { error: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldRow {
    pub rep: usize,
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub status: FoldStatus,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub rows: Vec<FoldRow>,
    /// Mean accuracy per repetition (successful folds only).
    pub rep_means: Vec<f64>,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub confusion: Option<ConfusionMatrix>,
    pub resolved_config: String,
    pub config_digest: String,
    pub notes: Vec<String>,
    pub wall_clock_secs: f64,
}

fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (values.len() - 1) as f64)
        .sqrt()
}

impl RunReport {
    pub fn new(
        cfg: &ExperimentConfig,
        rows: Vec<FoldRow>,
        confusion: Option<ConfusionMatrix>,
        notes: Vec<String>,
        wall_clock_secs: f64,
    ) -> Self {
        let reps = rows.iter().map(|r| r.rep).max().map_or(0, |m| m + 1);
        let mut rep_means = Vec::new();
        for rep in 0..reps {
            let accs: Vec<f64> = rows
                .iter()
                .filter(|r| r.rep == rep)
                .filter_map(|r| match r.status {
                    FoldStatus::Ok { accuracy, .. } => Some(accuracy),
                    FoldStatus::Failed { .. } => None,
                })
                .collect();
            if !accs.is_empty() {
                rep_means.push(accs.iter().sum::<f64>() / accs.len() as f64);
            }
        }
        let fold_accs: Vec<f64> = rows
            .iter()
            .filter_map(|r| match r.status {
                FoldStatus::Ok { accuracy, .. } => Some(accuracy),
                FoldStatus::Failed { .. } => None,
            })
            .collect();
        let mean_accuracy = if fold_accs.is_empty() {
            f64::NAN
        } else {
            fold_accs.iter().sum::<f64>() / fold_accs.len() as f64
        };
        let std_accuracy = if rep_means.len() > 1 {
            sample_std(&rep_means)
        } else {
            sample_std(&fold_accs)
        };
        Self {
            rows,
            rep_means,
            mean_accuracy,
            std_accuracy,
            confusion,
            resolved_config: cfg.resolved_toml(),
            config_digest: cfg.digest(),
            notes,
            wall_clock_secs,
        }
    }

    /// Long-format per-fold results; excludes the wall clock so repeated runs
    /// with identical seeds are byte-identical.
    pub fn results_csv(&self) -> String {
        let mut out = String::from("rep,fold,status,accuracy,lambda,n_train,n_test\n");
        for r in &self.rows {
            match &r.status {
                FoldStatus::Ok { accuracy, lambda } => {
                    let _ = writeln!(
                        out,
                        "{},{},ok,{},{},{},{}",
                        r.rep, r.fold, accuracy, lambda, r.n_train, r.n_test
                    );
                }
                FoldStatus::Failed { .. } => {
                    let _ = writeln!(out, "{},{},failed,,,{},{}", r.rep, r.fold, r.n_train, r.n_test);
                }
            }
        }
        out
    }

    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mean accuracy: {:.6} +/- {:.6}", self.mean_accuracy, self.std_accuracy);
        let _ = writeln!(out, "repetition means: {:?}", self.rep_means);
        for r in &self.rows {
            match &r.status {
                FoldStatus::Ok { accuracy, lambda } => {
                    let _ = writeln!(
                        out,
                        "rep {} fold {}: accuracy {:.6} (lambda {:.3e}, {} train / {} test)",
                        r.rep, r.fold, accuracy, lambda, r.n_train, r.n_test
                    );
                }
                FoldStatus::Failed { error } => {
                    let _ = writeln!(out, "rep {} fold {}: FAILED: {error}", r.rep, r.fold);
                }
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(out, "wall clock: {:.1}s", self.wall_clock_secs);
        let _ = writeln!(out, "config digest: {}", self.config_digest);
        let _ = writeln!(out, "\n--- resolved config ---\n{}", self.resolved_config);
        out
    }

    /// Writes `results.csv`, `confusion.csv`, and `summary.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("results.csv"), self.results_csv())?;
        if let Some(c) = &self.confusion {
            std::fs::write(dir.join("confusion.csv"), c.to_csv())?;
        }
        std::fs::write(dir.join("summary.txt"), self.summary_text())?;
        Ok(())
    }
}
