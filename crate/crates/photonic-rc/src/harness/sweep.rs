//! Parametric sweeps over the architectural axes: neuron allocation,
//! leakage configuration, bias profile, and depth-vs-shallow under a budget
//! sweep. Every grid point runs the full experiment with all other base
//! settings fixed; a failing cell is recorded and the sweep continues.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::config::ExperimentConfig;
use super::experiment::run_experiment;
use super::report::{FoldStatus, RunReport};
use crate::error::{Error, Result};
use crate::reservoir::{AllocationStrategy, BiasProfileKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Allocation,
    Leakage,
    Bias,
    Depth,
}

impl FromStr for SweepAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "allocation-strategy" | "allocation" => Ok(Self::Allocation),
            "leakage-config" | "leakage" => Ok(Self::Leakage),
            "bias-profile" | "bias" => Ok(Self::Bias),
            "depth-vs-shallow" | "depth" => Ok(Self::Depth),
            other => Err(Error::InvalidParameter(format!(
                "unknown sweep axis '{other}' (allocation | leakage | bias | depth)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepGrid {
    /// Depths for the allocation / leakage / bias axes.
    pub depths: Vec<usize>,
    /// Total budgets for the depth-vs-shallow axis.
    pub budgets: Vec<usize>,
    /// Budget rule for the depth-indexed axes: total = per_layer * depth.
    pub neurons_per_layer: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            depths: vec![2, 3, 4, 5],
            budgets: vec![200, 300, 400, 500],
            neurons_per_layer: 100,
        }
    }
}

pub struct SweepCell {
    pub series: String,
    pub depth: usize,
    pub budget: usize,
    pub outcome: std::result::Result<RunReport, String>,
}

pub struct SweepReport {
    pub axis: SweepAxis,
    pub cells: Vec<SweepCell>,
}

fn cell_configs(
    base: &ExperimentConfig,
    axis: SweepAxis,
    grid: &SweepGrid,
) -> Vec<(String, usize, usize, ExperimentConfig)> {
    let mut cells = Vec::new();
    let mut push = |series: String, depth: usize, budget: usize, cfg: ExperimentConfig| {
        cells.push((series, depth, budget, cfg));
    };
    match axis {
        SweepAxis::Allocation => {
            for (label, strategy) in [
                ("decreasing", AllocationStrategy::DecreasingPowerLaw),
                ("uniform", AllocationStrategy::Uniform),
                ("increasing", AllocationStrategy::Increasing),
            ] {
                for &d in &grid.depths {
                    let mut cfg = base.clone();
                    cfg.architecture.allocation = strategy;
                    cfg.architecture.depth = d;
                    cfg.architecture.total_neurons = grid.neurons_per_layer * d;
                    push(label.to_string(), d, cfg.architecture.total_neurons, cfg);
                }
            }
        }
        SweepAxis::Leakage => {
            for (label, first, last) in [
                ("decreasing-0.95-0.65", 0.95, 0.65),
                ("increasing-0.65-0.95", 0.65, 0.95),
                ("fixed-0.65", 0.65, 0.65),
                ("fixed-0.95", 0.95, 0.95),
            ] {
                for &d in &grid.depths {
                    let mut cfg = base.clone();
                    cfg.architecture.allocation = AllocationStrategy::DecreasingPowerLaw;
                    cfg.architecture.alpha_first = first;
                    cfg.architecture.alpha_last = last;
                    cfg.architecture.depth = d;
                    cfg.architecture.total_neurons = grid.neurons_per_layer * d;
                    push(label.to_string(), d, cfg.architecture.total_neurons, cfg);
                }
            }
        }
        SweepAxis::Bias => {
            for (label, kind) in [
                ("mild-increasing", BiasProfileKind::MildIncreasing),
                ("uniform", BiasProfileKind::Uniform),
            ] {
                for &d in &grid.depths {
                    let mut cfg = base.clone();
                    cfg.architecture.bias_profile.kind = kind;
                    cfg.architecture.depth = d;
                    cfg.architecture.total_neurons = grid.neurons_per_layer * d;
                    push(label.to_string(), d, cfg.architecture.total_neurons, cfg);
                }
            }
        }
        SweepAxis::Depth => {
            for d in [1usize, 3, 5] {
                for &budget in &grid.budgets {
                    let mut cfg = base.clone();
                    cfg.architecture.depth = d;
                    cfg.architecture.total_neurons = budget;
                    if d == 1 {
                        // shallow baseline: single layer at fixed 0.95
                        cfg.architecture.alpha_first = 0.95;
                        cfg.architecture.alpha_last = 0.95;
                    }
                    push(format!("depth-{d}"), d, budget, cfg);
                }
            }
        }
    }
    cells
}

/// Executes every grid point; cell failures are recorded, not fatal.
pub fn run_sweep(base: &ExperimentConfig, axis: SweepAxis, grid: &SweepGrid) -> SweepReport {
    let cells = cell_configs(base, axis, grid)
        .into_iter()
        .map(|(series, depth, budget, cfg)| SweepCell {
            series,
            depth,
            budget,
            outcome: run_experiment(&cfg).map_err(|e| e.to_string()),
        })
        .collect();
    SweepReport { axis, cells }
}

impl SweepReport {
    /// Long-format table: one row per fold per cell.
    pub fn results_csv(&self) -> String {
        let mut out = String::from("series,depth,budget,rep,fold,status,accuracy,lambda\n");
        for cell in &self.cells {
            match &cell.outcome {
                Ok(report) => {
                    for r in &report.rows {
                        match &r.status {
                            FoldStatus::Ok { accuracy, lambda } => {
                                let _ = writeln!(
                                    out,
                                    "{},{},{},{},{},ok,{},{}",
                                    cell.series, cell.depth, cell.budget, r.rep, r.fold, accuracy, lambda
                                );
                            }
                            FoldStatus::Failed { .. } => {
                                let _ = writeln!(
                                    out,
                                    "{},{},{},{},{},failed,,",
                                    cell.series, cell.depth, cell.budget, r.rep, r.fold
                                );
                            }
                        }
                    }
                }
                Err(_) => {
                    let _ = writeln!(
                        out,
                        "{},{},{},,,cell-failed,,",
                        cell.series, cell.depth, cell.budget
                    );
                }
            }
        }
        out
    }

    /// Per-panel plot data: series, x (depth or budget), mean, std.
    pub fn plot_csv(&self) -> String {
        let x_is_budget = self.axis == SweepAxis::Depth;
        let mut out = String::from("series,x,mean_accuracy,std_accuracy\n");
        for cell in &self.cells {
            if let Ok(report) = &cell.outcome {
                let x = if x_is_budget { cell.budget } else { cell.depth };
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    cell.series, x, report.mean_accuracy, report.std_accuracy
                );
            }
        }
        out
    }

    pub fn failures(&self) -> Vec<(String, usize, usize, String)> {
        self.cells
            .iter()
            .filter_map(|c| {
                c.outcome
                    .as_ref()
                    .err()
                    .map(|e| (c.series.clone(), c.depth, c.budget, e.clone()))
            })
            .collect()
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("sweep_results.csv"), self.results_csv())?;
        std::fs::write(dir.join("sweep_plot.csv"), self.plot_csv())?;
        let mut summary = String::new();
        for (series, depth, budget, error) in self.failures() {
            let _ = writeln!(summary, "FAILED cell {series} depth={depth} budget={budget}: {error}");
        }
        for cell in &self.cells {
            if let Ok(r) = &cell.outcome {
                let _ = writeln!(
                    summary,
                    "{} depth={} budget={}: {:.6} +/- {:.6}",
                    cell.series, cell.depth, cell.budget, r.mean_accuracy, r.std_accuracy
                );
            }
        }
        std::fs::write(dir.join("sweep_summary.txt"), summary)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_grids_have_the_documented_shapes() {
        let base = ExperimentConfig::from_toml("").unwrap();
        let grid = SweepGrid::default();
        assert_eq!(cell_configs(&base, SweepAxis::Allocation, &grid).len(), 12);
        assert_eq!(cell_configs(&base, SweepAxis::Leakage, &grid).len(), 16);
        assert_eq!(cell_configs(&base, SweepAxis::Bias, &grid).len(), 8);
        assert_eq!(cell_configs(&base, SweepAxis::Depth, &grid).len(), 12);
        // budget rule: N = neurons_per_layer * L on depth-indexed axes
        for (_, d, budget, cfg) in cell_configs(&base, SweepAxis::Allocation, &grid) {
            assert_eq!(budget, 100 * d);
            assert_eq!(cfg.architecture.total_neurons, 100 * d);
        }
        // shallow cells pin alpha at 0.95
        for (series, d, _, cfg) in cell_configs(&base, SweepAxis::Depth, &grid) {
            if d == 1 {
                assert_eq!(series, "depth-1");
                assert_eq!(cfg.architecture.alpha_first, 0.95);
                assert_eq!(cfg.architecture.alpha_last, 0.95);
            }
        }
    }

    #[test]
    fn axis_names_parse() {
        assert_eq!("allocation".parse::<SweepAxis>().unwrap(), SweepAxis::Allocation);
        assert_eq!("leakage-config".parse::<SweepAxis>().unwrap(), SweepAxis::Leakage);
        assert_eq!("bias-profile".parse::<SweepAxis>().unwrap(), SweepAxis::Bias);
        assert_eq!("depth-vs-shallow".parse::<SweepAxis>().unwrap(), SweepAxis::Depth);
        assert!("speed".parse::<SweepAxis>().is_err());
    }
}
