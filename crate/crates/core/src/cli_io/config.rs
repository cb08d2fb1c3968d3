//! Run configuration: per-command defaults, an optional config file (TOML, or
//! a previously written `manifest.json`), and command-line overrides, in that
//! order of precedence from lowest to highest.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::detectors::{DetectorKind, DetectorName};
use crate::error::{Result, SenseError};
use crate::montecarlo::{check_alpha, check_min_eigen_regime, MIN_TRIALS};
use crate::signal_model::{check_overlap, ChannelModel, FieldMode, ScenarioConfig, SignalPower};

use super::manifest::RunManifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Eigs,
    Roc,
    Sweep,
    Calibrate,
}

impl CommandKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CommandKind::Eigs => "eigs",
            CommandKind::Roc => "roc",
            CommandKind::Sweep => "sweep",
            CommandKind::Calibrate => "calibrate",
        }
    }
}

/// Ordering of rows in a sweep table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxisName {
    #[default]
    Snr,
    P,
}

/// Fully resolved run configuration. This is what the manifest echoes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub sensors: usize,
    pub samples: usize,
    pub overlaps: Vec<usize>,
    pub snr_db: Vec<f64>,
    pub noise_variance: f64,
    pub field: FieldMode,
    pub channel: ChannelModel,
    pub seed: u64,
    /// Evaluation trials per hypothesis and grid point; realizations for
    /// `eigs`; calibration trials for `calibrate`.
    pub trials: usize,
    /// H0 trials used to calibrate thresholds in `sweep`.
    pub calibration_trials: usize,
    pub pfa: f64,
    pub detectors: Vec<DetectorName>,
    pub axis: SweepAxisName,
}

impl RunConfig {
    pub fn defaults(command: CommandKind) -> Self {
        let base = RunConfig {
            sensors: 8,
            samples: 200,
            overlaps: (1..=7).collect(),
            snr_db: vec![-13.0],
            noise_variance: 1.0,
            field: FieldMode::Complex,
            channel: ChannelModel::Unit,
            seed: 1,
            trials: 10_000,
            calibration_trials: 10_000,
            pfa: 0.1,
            detectors: DetectorName::ALL.to_vec(),
            axis: SweepAxisName::Snr,
        };
        match command {
            CommandKind::Eigs => RunConfig {
                sensors: 6,
                overlaps: vec![2],
                snr_db: vec![3.0],
                trials: 50,
                ..base
            },
            CommandKind::Roc => base,
            CommandKind::Sweep => RunConfig {
                snr_db: (-20..=0).map(f64::from).collect(),
                trials: 1_000,
                detectors: vec![DetectorName::Rlrt, DetectorName::Glrt],
                ..base
            },
            CommandKind::Calibrate => RunConfig {
                overlaps: vec![1],
                ..base
            },
        }
    }

    /// Scenario at the given overlap and SNR.
    pub fn scenario(&self, overlap: usize, snr_db: f64) -> ScenarioConfig {
        ScenarioConfig {
            num_sensors: self.sensors,
            num_samples: self.samples,
            overlap,
            signal: SignalPower::SnrDb(snr_db),
            noise_variance: self.noise_variance,
            field_mode: self.field,
            channel_model: self.channel.clone(),
            master_seed: self.seed,
        }
    }

    pub fn detector_kinds(&self) -> Vec<DetectorKind> {
        self.detectors
            .iter()
            .map(|d| d.with_noise_variance(self.noise_variance))
            .collect()
    }

    pub fn validate(&self, command: CommandKind) -> Result<()> {
        if self.overlaps.is_empty() {
            return Err(SenseError::config("no overlap values given"));
        }
        if self.snr_db.is_empty() {
            return Err(SenseError::config("no SNR values given"));
        }
        if self.detectors.is_empty() {
            return Err(SenseError::config("no detectors given"));
        }
        for &p in &self.overlaps {
            check_overlap(self.sensors, p)?;
        }
        for &snr in &self.snr_db {
            self.scenario(self.overlaps[0], snr).validate()?;
        }
        for d in self.detector_kinds() {
            d.validate()?;
        }
        check_alpha(self.pfa)?;
        match command {
            CommandKind::Eigs => {
                if self.trials == 0 {
                    return Err(SenseError::config("eigs needs at least one realization"));
                }
                if self.overlaps.len() != 1 || self.snr_db.len() != 1 {
                    return Err(SenseError::config(
                        "eigs takes exactly one --p value and one --snr-db value",
                    ));
                }
            }
            CommandKind::Roc => {
                if self.snr_db.len() != 1 {
                    return Err(SenseError::config("roc takes exactly one --snr-db value"));
                }
                check_min_eigen_regime(&self.scenario(1, 0.0), &self.detector_kinds())?;
            }
            CommandKind::Sweep | CommandKind::Calibrate => {
                check_min_eigen_regime(&self.scenario(1, 0.0), &self.detector_kinds())?;
                let calib = match command {
                    CommandKind::Sweep => {
                        if self.trials < MIN_TRIALS {
                            return Err(SenseError::config(format!(
                                "trials = {} is below the minimum of {MIN_TRIALS}",
                                self.trials
                            )));
                        }
                        self.calibration_trials
                    }
                    _ => self.trials,
                };
                if calib < MIN_TRIALS {
                    return Err(SenseError::config(format!(
                        "{calib} calibration trials is below the minimum of {MIN_TRIALS}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Config file contents; every key optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialRunConfig {
    pub sensors: Option<usize>,
    pub samples: Option<usize>,
    pub overlaps: Option<Vec<usize>>,
    pub snr_db: Option<Vec<f64>>,
    pub noise_variance: Option<f64>,
    pub field: Option<FieldMode>,
    pub channel: Option<ChannelModel>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub calibration_trials: Option<usize>,
    pub pfa: Option<f64>,
    pub detectors: Option<Vec<DetectorName>>,
    pub axis: Option<SweepAxisName>,
}

impl PartialRunConfig {
    /// Fills `base` with every value present here.
    pub fn apply(self, base: &mut RunConfig) {
        macro_rules! take {
            ($($f:ident),*) => {$( if let Some(v) = self.$f { base.$f = v; } )*};
        }
        take!(
            sensors,
            samples,
            overlaps,
            snr_db,
            noise_variance,
            field,
            channel,
            seed,
            trials,
            calibration_trials,
            pfa,
            detectors,
            axis
        );
    }
}

impl From<RunConfig> for PartialRunConfig {
    fn from(c: RunConfig) -> Self {
        PartialRunConfig {
            sensors: Some(c.sensors),
            samples: Some(c.samples),
            overlaps: Some(c.overlaps),
            snr_db: Some(c.snr_db),
            noise_variance: Some(c.noise_variance),
            field: Some(c.field),
            channel: Some(c.channel),
            seed: Some(c.seed),
            trials: Some(c.trials),
            calibration_trials: Some(c.calibration_trials),
            pfa: Some(c.pfa),
            detectors: Some(c.detectors),
            axis: Some(c.axis),
        }
    }
}

/// Reads a TOML config file, or the `config` section of a JSON manifest.
pub fn load_config_file(path: &Path) -> Result<PartialRunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| SenseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let parse_err = |message: String| SenseError::Parse {
        path: path.display().to_string(),
        message,
    };
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        let manifest: RunManifest =
            serde_json::from_str(&text).map_err(|e| parse_err(e.to_string()))?;
        Ok(manifest.config.into())
    } else {
        toml::from_str(&text).map_err(|e| parse_err(e.to_string()))
    }
}

/// Parses a comma-separated list whose items are numbers or `start:stop:step`
/// ranges (inclusive of `stop`), e.g. `-20:0:1` or `1,2,5`.
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| SenseError::config(format!("'{t}' is not a number")))
        };
        match parts.as_slice() {
            [v] => out.push(num(v)?),
            [a, b] | [a, b, _] => {
                let (start, stop) = (num(a)?, num(b)?);
                let step = if parts.len() == 3 { num(parts[2])? } else { 1.0 };
                if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() {
                    return Err(SenseError::config(format!("bad range '{item}'")));
                }
                let n = ((stop - start) / step + 1e-9).floor();
                if n < 0.0 {
                    return Err(SenseError::config(format!("empty range '{item}'")));
                }
                // Index-based so grid values carry no accumulated rounding.
                out.extend((0..=n as usize).map(|i| start + i as f64 * step));
            }
            _ => return Err(SenseError::config(format!("bad list item '{item}'"))),
        }
    }
    if out.is_empty() {
        return Err(SenseError::config(format!("empty list '{s}'")));
    }
    Ok(out)
}

/// Like [`parse_f64_list`] for nonnegative integers, also accepting `a-b`.
pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| SenseError::config(format!("'{t}' is not a nonnegative integer")))
        };
        match item.split_once(['-', ':']) {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(SenseError::config(format!("empty range '{item}'")));
                }
                out.extend(a..=b);
            }
            None => out.push(num(item)?),
        }
    }
    if out.is_empty() {
        return Err(SenseError::config(format!("empty list '{s}'")));
    }
    Ok(out)
}

/// Parses `rlrt,glrt` or `all`.
pub fn parse_detectors(s: &str) -> Result<Vec<DetectorName>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(DetectorName::ALL.to_vec());
    }
    let out: Vec<DetectorName> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(SenseError::config("empty detector list"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_lists_and_ranges() {
        assert_eq!(parse_f64_list("-13").unwrap(), vec![-13.0]);
        assert_eq!(parse_f64_list("1, 2.5").unwrap(), vec![1.0, 2.5]);
        let grid = parse_f64_list("-20:0:1").unwrap();
        assert_eq!(grid.len(), 21);
        assert_eq!(grid[0], -20.0);
        assert_eq!(grid[20], 0.0);
        assert_eq!(parse_f64_list("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(parse_f64_list("").is_err());
        assert!(parse_f64_list("x").is_err());
        assert!(parse_f64_list("0:1:0").is_err());
        assert!(parse_f64_list("1:0").is_err());
    }

    #[test]
    fn integer_lists() {
        assert_eq!(parse_usize_list("1-7").unwrap(), (1..=7).collect::<Vec<_>>());
        assert_eq!(parse_usize_list("1,3,5").unwrap(), vec![1, 3, 5]);
        assert_eq!(parse_usize_list("2:3").unwrap(), vec![2, 3]);
        assert!(parse_usize_list("3-1").is_err());
        assert!(parse_usize_list("-1").is_err());
    }

    #[test]
    fn detector_lists() {
        assert_eq!(parse_detectors("all").unwrap().len(), 4);
        assert_eq!(
            parse_detectors("rlrt,EME").unwrap(),
            vec![DetectorName::Rlrt, DetectorName::Eme]
        );
        assert!(parse_detectors("rlrt,xyz").is_err());
    }

    #[test]
    fn toml_overrides_defaults() {
        let partial: PartialRunConfig = toml::from_str(
            r#"
            sensors = 6
            snr_db = [3.0]
            detectors = ["glrt"]
            field = "real"
            channel = { kind = "fixed", gains = [[1.0, 0.0], [0.5, 0.5], [1.0, 0.0], [1.0, 0.0], [1.0, 0.0], [1.0, 0.0]] }
            "#,
        )
        .unwrap();
        let mut cfg = RunConfig::defaults(CommandKind::Roc);
        partial.apply(&mut cfg);
        assert_eq!(cfg.sensors, 6);
        assert_eq!(cfg.samples, 200);
        assert_eq!(cfg.field, FieldMode::Real);
        assert_eq!(cfg.detectors, vec![DetectorName::Glrt]);
        assert!(matches!(cfg.channel, ChannelModel::Fixed { ref gains } if gains.len() == 6));
        // Default overlaps 1..=7 are invalid for 6 sensors.
        assert!(cfg.validate(CommandKind::Roc).is_err());
        cfg.overlaps = vec![1, 2];
        assert!(cfg.validate(CommandKind::Roc).is_ok());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<PartialRunConfig>("sensor = 3").is_err());
    }

    #[test]
    fn per_command_validation() {
        for c in [
            CommandKind::Eigs,
            CommandKind::Roc,
            CommandKind::Sweep,
            CommandKind::Calibrate,
        ] {
            RunConfig::defaults(c).validate(c).unwrap();
        }
        let mut eigs = RunConfig::defaults(CommandKind::Eigs);
        eigs.overlaps = vec![1, 2];
        assert!(eigs.validate(CommandKind::Eigs).is_err());
        let mut sweep = RunConfig::defaults(CommandKind::Sweep);
        sweep.trials = 10;
        assert!(sweep.validate(CommandKind::Sweep).is_err());
        let mut starved = RunConfig::defaults(CommandKind::Roc);
        starved.samples = 4;
        assert!(starved.validate(CommandKind::Roc).is_err());
        starved.detectors = vec![DetectorName::Rlrt];
        assert!(starved.validate(CommandKind::Roc).is_ok());
    }
}
