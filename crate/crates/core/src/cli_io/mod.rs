//! Command-line front end: argument parsing, config resolution and the four
//! experiment commands (`eigs`, `roc`, `sweep`, `calibrate`).
//!
//! Every run writes into one output directory: the result tables (CSV, plus
//! JSON summaries where relevant) and a `manifest.json` echoing the resolved
//! configuration. Feeding that manifest back via `--config` reproduces the
//! tables byte for byte, independent of `--workers`.

mod commands;
mod config;
mod manifest;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{
    auc_summary, calibration_table, eigen_profile, execute, roc_csv, roc_curves, sweep_csv,
    sweep_results, AucEntry, EigenProfile, ThresholdEntry,
};
pub use config::{
    load_config_file, parse_detectors, parse_f64_list, parse_usize_list, CommandKind,
    PartialRunConfig, RunConfig, SweepAxisName,
};
pub use manifest::{RunManifest, MANIFEST_FILE};
pub use output::{fmt_num, CsvTable};

use crate::error::{Result, SenseError};
use crate::signal_model::FieldMode;

#[derive(Debug, Parser)]
#[command(
    name = "overlap-sense",
    version,
    about = "Eigenvalue spectrum sensing with overlapping sensor subgroups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean sorted eigenvalues of R and R' under H0 and H1.
    Eigs(CommonArgs),
    /// ROC curves and AUC per (detector, p).
    Roc(CommonArgs),
    /// Pd at a fixed false-alarm rate across an SNR grid.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Row ordering of the output table.
        #[arg(long, value_enum)]
        axis: Option<SweepAxisName>,
    },
    /// Empirical thresholds per (detector, p).
    Calibrate(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML config file, or a manifest.json from an earlier run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Trials per hypothesis (realizations for `eigs`, calibration trials
    /// for `calibrate`).
    #[arg(long)]
    pub trials: Option<usize>,
    /// H0 trials for threshold calibration in `sweep`.
    #[arg(long)]
    pub calibration_trials: Option<usize>,
    /// Comma list of rlrt, glrt, mme, eme, or `all`.
    #[arg(long)]
    pub detector: Option<String>,
    /// Overlap values, e.g. `1,2,3` or `1-7`.
    #[arg(long)]
    pub p: Option<String>,
    /// SNR values in dB, e.g. `-13` or `-20:0:1`.
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<String>,
    /// Target false-alarm probability.
    #[arg(long)]
    pub pfa: Option<f64>,
    /// Number of sensors M.
    #[arg(long)]
    pub sensors: Option<usize>,
    /// Samples per sensor N.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub noise_variance: Option<f64>,
    /// Output directory (default: out/<command>).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores). Does not change results.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, value_parser = parse_field)]
    pub field: Option<FieldMode>,
}

fn parse_field(s: &str) -> std::result::Result<FieldMode, String> {
    match s {
        "real" => Ok(FieldMode::Real),
        "complex" => Ok(FieldMode::Complex),
        other => Err(format!("expected real or complex, got '{other}'")),
    }
}

impl CommonArgs {
    /// Flag values as a partial config.
    pub fn overrides(&self) -> Result<PartialRunConfig> {
        Ok(PartialRunConfig {
            sensors: self.sensors,
            samples: self.samples,
            overlaps: self.p.as_deref().map(parse_usize_list).transpose()?,
            snr_db: self.snr_db.as_deref().map(parse_f64_list).transpose()?,
            noise_variance: self.noise_variance,
            field: self.field,
            channel: None,
            seed: self.seed,
            trials: self.trials,
            calibration_trials: self.calibration_trials,
            pfa: self.pfa,
            detectors: self.detector.as_deref().map(parse_detectors).transpose()?,
            axis: None,
        })
    }
}

/// A parsed invocation ready to execute.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: CommandKind,
    pub config: RunConfig,
    pub out_dir: PathBuf,
    pub workers: Option<usize>,
}

impl Command {
    /// Resolves defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<Invocation> {
        let (kind, common, axis) = match self {
            Command::Eigs(c) => (CommandKind::Eigs, c, None),
            Command::Roc(c) => (CommandKind::Roc, c, None),
            Command::Sweep { common, axis } => (CommandKind::Sweep, common, *axis),
            Command::Calibrate(c) => (CommandKind::Calibrate, c, None),
        };
        let mut config = RunConfig::defaults(kind);
        if let Some(path) = &common.config {
            load_config_file(path)?.apply(&mut config);
        }
        common.overrides()?.apply(&mut config);
        if let Some(axis) = axis {
            config.axis = axis;
        }
        if common.workers == Some(0) {
            return Err(SenseError::config("--workers must be at least 1"));
        }
        Ok(Invocation {
            command: kind,
            config,
            out_dir: common
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("out").join(kind.as_str())),
            workers: common.workers,
        })
    }
}

impl Invocation {
    /// Runs on a dedicated pool when a worker count was given.
    pub fn run(&self) -> Result<RunManifest> {
        let go = || {
            let mut m = execute(self.command, &self.config, &self.out_dir)?;
            if self.workers.is_some() {
                m.workers = self.workers;
                m.write(&self.out_dir)?;
            }
            Ok(m)
        };
        match self.workers {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| SenseError::config(format!("cannot start {n} workers: {e}")))?
                .install(go),
            None => go(),
        }
    }
}
