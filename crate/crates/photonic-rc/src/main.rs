use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use photonic_rc::encoding::BasketCodec;
use photonic_rc::features::write_sequence_dir;
use photonic_rc::harness::{
    run_experiment, run_sweep, synthetic_task, ExperimentConfig, SweepAxis, SweepGrid, SynthConfig,
    SynthKind,
};

#[derive(Parser)]
#[command(
    name = "photonic-rc",
    about = "Desk-scale simulator and benchmark harness for deep binarized photonic reservoir computing",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment described by a TOML config.
    Run {
        config: PathBuf,
        /// Output directory (overrides the config's `output.dir`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parametric sweep around a base config.
    Sweep {
        config: PathBuf,
        /// allocation | leakage | bias | depth
        #[arg(long)]
        axis: String,
        /// Depth grid for the allocation/leakage/bias axes, e.g. 2,3,4,5.
        #[arg(long)]
        depths: Option<String>,
        /// Budget grid for the depth axis, e.g. 200,300,400,500.
        #[arg(long)]
        budgets: Option<String>,
        /// Budget rule for depth-indexed axes: total neurons = value * depth.
        #[arg(long, default_value_t = 100)]
        neurons_per_layer: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Basket-encode a numeric vector file (values in [0,1], separated by
    /// commas or whitespace) and print the bit pattern.
    Encode {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        n_bin: usize,
    },
    /// Dataset utilities.
    Dataset {
        #[command(subcommand)]
        command: DatasetCommand,
    },
    /// Re-render summary tables from a results CSV.
    Report { results: PathBuf },
}

#[derive(Subcommand)]
enum DatasetCommand {
    /// Generate a synthetic sequence-classification dataset.
    Synth {
        /// delayed-recall | noisy-channel-classification
        kind: String,
        #[arg(long, default_value_t = 5)]
        classes: usize,
        #[arg(long, default_value_t = 10)]
        dim: usize,
        #[arg(long, default_value_t = 12)]
        length: usize,
        #[arg(long, default_value_t = 2)]
        delay: usize,
        #[arg(long, default_value_t = 0.25)]
        noise: f64,
        #[arg(long, default_value_t = 60)]
        per_class: usize,
        #[arg(long, default_value_t = 11)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_list(text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("bad grid entry '{t}': {e}")))
        .collect()
}

fn run() -> Result<(), String> {
    match Cli::parse().command {
        Command::Run { config, out } => {
            let mut cfg = ExperimentConfig::load(&config).map_err(|e| e.to_string())?;
            if let Some(dir) = out {
                cfg.output.dir = dir.display().to_string();
            }
            let report = run_experiment(&cfg).map_err(|e| e.to_string())?;
            let dir = PathBuf::from(&cfg.output.dir);
            report.write(&dir).map_err(|e| e.to_string())?;
            print!("{}", report.summary_text());
            println!("results written to {}", dir.display());
            Ok(())
        }
        Command::Sweep {
            config,
            axis,
            depths,
            budgets,
            neurons_per_layer,
            out,
        } => {
            let mut cfg = ExperimentConfig::load(&config).map_err(|e| e.to_string())?;
            if let Some(dir) = out {
                cfg.output.dir = dir.display().to_string();
            }
            let axis: SweepAxis = axis.parse().map_err(|e: photonic_rc::Error| e.to_string())?;
            let mut grid = SweepGrid {
                neurons_per_layer,
                ..SweepGrid::default()
            };
            if let Some(d) = depths {
                grid.depths = parse_list(&d)?;
            }
            if let Some(b) = budgets {
                grid.budgets = parse_list(&b)?;
            }
            let report = run_sweep(&cfg, axis, &grid);
            let dir = PathBuf::from(&cfg.output.dir);
            report.write(&dir).map_err(|e| e.to_string())?;
            for line in report.plot_csv().lines() {
                println!("{line}");
            }
            let failures = report.failures();
            if !failures.is_empty() {
                eprintln!("{} cell(s) failed; see sweep_summary.txt", failures.len());
            }
            println!("sweep results written to {}", dir.display());
            Ok(())
        }
        Command::Encode { file, n_bin } => {
            let text = std::fs::read_to_string(&file).map_err(|e| e.to_string())?;
            let values: Vec<f64> = text
                .split([',', ' ', '\t', '\n', '\r'])
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().map_err(|e| format!("bad value '{t}': {e}")))
                .collect::<Result<_, _>>()?;
            let codec = BasketCodec::new(n_bin).map_err(|e| e.to_string())?;
            let pattern = codec.encode_vector(&values).map_err(|e| e.to_string())?;
            let bits: String = pattern.as_slice().iter().map(|&b| char::from(b'0' + b)).collect();
            println!("{bits}");
            Ok(())
        }
        Command::Dataset {
            command:
                DatasetCommand::Synth {
                    kind,
                    classes,
                    dim,
                    length,
                    delay,
                    noise,
                    per_class,
                    seed,
                    out,
                },
        } => {
            let kind = match kind.as_str() {
                "delayed-recall" => SynthKind::DelayedRecall,
                "noisy-channel-classification" | "noisy-channel" => SynthKind::NoisyChannel,
                other => return Err(format!("unknown synthetic task '{other}'")),
            };
            let cfg = SynthConfig {
                kind,
                classes,
                dim,
                length,
                delay,
                noise,
                samples_per_class: per_class,
                seed,
            };
            let dataset = synthetic_task(&cfg);
            write_sequence_dir(&out, &dataset).map_err(|e| e.to_string())?;
            println!(
                "wrote {} samples ({} classes) to {}",
                dataset.samples.len(),
                dataset.class_names.len(),
                out.display()
            );
            Ok(())
        }
        Command::Report { results } => render_report(&results),
    }
}

/// Groups a long-format results CSV and prints mean +/- std per group.
fn render_report(path: &PathBuf) -> Result<(), String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| "empty results file".to_string())?
        .split(',')
        .collect();
    let acc_col = header
        .iter()
        .position(|&h| h == "accuracy")
        .ok_or_else(|| "no 'accuracy' column".to_string())?;
    let status_col = header.iter().position(|&h| h == "status");
    // group key: everything before the rep/fold columns
    let key_cols: Vec<usize> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| !matches!(**h, "rep" | "fold" | "status" | "accuracy" | "lambda" | "n_train" | "n_test"))
        .map(|(i, _)| i)
        .collect();

    use std::collections::BTreeMap;
    let mut groups: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut failures = 0usize;
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split(',').collect();
        if let Some(sc) = status_col {
            if fields.get(sc).copied() != Some("ok") {
                failures += 1;
                continue;
            }
        }
        let acc: f64 = match fields.get(acc_col).and_then(|v| v.parse().ok()) {
            Some(a) => a,
            None => continue,
        };
        let key = if key_cols.is_empty() {
            "all".to_string()
        } else {
            key_cols
                .iter()
                .map(|&i| fields.get(i).copied().unwrap_or(""))
                .collect::<Vec<_>>()
                .join(",")
        };
        groups.entry(key).or_default().push(acc);
    }
    println!("group,folds,mean_accuracy,std_accuracy");
    for (key, accs) in &groups {
        let mean = accs.iter().sum::<f64>() / accs.len() as f64;
        let std = if accs.len() > 1 {
            (accs.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / (accs.len() - 1) as f64)
                .sqrt()
        } else {
            0.0
        };
        println!("{key},{},{mean:.6},{std:.6}", accs.len());
    }
    if failures > 0 {
        eprintln!("{failures} failed row(s) skipped");
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
