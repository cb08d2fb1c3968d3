use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{CommandKind, RunConfig, SweepAxisName};
use super::manifest::RunManifest;
use super::output::{fmt_num, write_json, CsvTable};
use crate::covariance::{assemble_covariance_from_blocks, eigvals_hermitian, sample_covariance};
use crate::detectors::DetectorName;
use crate::error::{Result, SenseError};
use crate::montecarlo::{
    calibrate_threshold, calibration_seed, run_paired, sweep_overlap_paired, sweep_snr_paired,
    LabelledRoc, SweepResult,
};
use crate::signal_model::{realize_trial, Hypothesis};

/// Mean sorted eigenvalues of R and R' under both hypotheses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenProfile {
    pub overlap: usize,
    pub snr_db: f64,
    pub realizations: usize,
    pub r_h0: Vec<f64>,
    pub r_h1: Vec<f64>,
    pub rprime_h0: Vec<f64>,
    pub rprime_h1: Vec<f64>,
}

impl EigenProfile {
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&[
            "index",
            "mean_eig_R_H0",
            "mean_eig_R_H1",
            "mean_eig_Rprime_H0",
            "mean_eig_Rprime_H1",
        ]);
        let cell = |v: &[f64], i: usize| v.get(i).map_or_else(String::new, |&x| fmt_num(x));
        for i in 0..self.rprime_h0.len().max(self.r_h0.len()) {
            t.push_row(&[
                (i + 1).to_string(),
                cell(&self.r_h0, i),
                cell(&self.r_h1, i),
                cell(&self.rprime_h0, i),
                cell(&self.rprime_h1, i),
            ]);
        }
        t
    }
}

fn mean_columns(rows: &[Vec<f64>]) -> Vec<f64> {
    let k = rows.len() as f64;
    let mut acc = vec![0.0; rows[0].len()];
    for r in rows {
        for (a, v) in acc.iter_mut().zip(r) {
            *a += v;
        }
    }
    acc.iter().map(|a| a / k).collect()
}

/// Averages eigenvalue profiles over `cfg.trials` realizations at the first
/// overlap and SNR of the config. H0 and H1 share noise per realization.
pub fn eigen_profile(cfg: &RunConfig) -> Result<EigenProfile> {
    let (p, snr) = (cfg.overlaps[0], cfg.snr_db[0]);
    let scenario = cfg.scenario(p, snr);
    scenario.validate()?;
    let per_trial: Vec<[Vec<f64>; 4]> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut out: [Vec<f64>; 4] = Default::default();
            for (k, h) in [Hypothesis::H0, Hypothesis::H1].into_iter().enumerate() {
                let x = realize_trial(&scenario, h, cfg.seed, t)?;
                let r = sample_covariance(&x.data);
                let rp = assemble_covariance_from_blocks(&r, p)?;
                out[k] = eigvals_hermitian(&r)?.values().to_vec();
                out[k + 2] = eigvals_hermitian(&rp)?.values().to_vec();
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let column = |k: usize| mean_columns(&per_trial.iter().map(|r| r[k].clone()).collect::<Vec<_>>());
    Ok(EigenProfile {
        overlap: p,
        snr_db: snr,
        realizations: cfg.trials,
        r_h0: column(0),
        r_h1: column(1),
        rprime_h0: column(2),
        rprime_h1: column(3),
    })
}

/// One ROC per (detector, overlap) at the config's SNR.
pub fn roc_curves(cfg: &RunConfig) -> Result<Vec<LabelledRoc>> {
    let scenario = cfg.scenario(cfg.overlaps[0], cfg.snr_db[0]);
    sweep_overlap_paired(
        &scenario,
        &cfg.overlaps,
        &cfg.detector_kinds(),
        cfg.trials,
        cfg.seed,
    )
}

pub fn roc_csv(curves: &[LabelledRoc]) -> CsvTable {
    let mut t = CsvTable::new(&["detector", "p", "pf", "pd"]);
    for c in curves {
        let name = c.detector.name().to_string();
        for &(pf, pd) in &c.curve.points {
            t.push_row(&[name.clone(), c.overlap.to_string(), fmt_num(pf), fmt_num(pd)]);
        }
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AucEntry {
    pub detector: DetectorName,
    pub p: usize,
    pub snr_db: f64,
    pub auc: f64,
    pub trials: usize,
    pub seed: u64,
}

pub fn auc_summary(curves: &[LabelledRoc], seed: u64) -> Vec<AucEntry> {
    curves
        .iter()
        .map(|c| AucEntry {
            detector: c.detector.name(),
            p: c.overlap,
            snr_db: c.snr_db,
            auc: c.curve.auc,
            trials: c.trials,
            seed,
        })
        .collect()
}

/// Pd at the target false-alarm rate for every (detector, overlap, SNR).
pub fn sweep_results(cfg: &RunConfig) -> Result<Vec<SweepResult>> {
    sweep_snr_paired(
        &cfg.scenario(cfg.overlaps[0], cfg.snr_db[0]),
        &cfg.overlaps,
        &cfg.detector_kinds(),
        &cfg.snr_db,
        cfg.trials,
        cfg.calibration_trials,
        cfg.pfa,
        cfg.seed,
    )
}

pub fn sweep_csv(results: &[SweepResult], axis: SweepAxisName) -> CsvTable {
    let mut rows = Vec::new();
    for r in results {
        for pt in &r.points {
            rows.push((r.detector.name(), pt, r.trials));
        }
    }
    if axis == SweepAxisName::P {
        // Detector-major, then SNR, then p; the sort is stable.
        let rank = |d: DetectorName| results.iter().position(|r| r.detector.name() == d);
        rows.sort_by(|a, b| {
            rank(a.0)
                .cmp(&rank(b.0))
                .then(a.1.snr_db.total_cmp(&b.1.snr_db))
        });
    }
    let mut t = CsvTable::new(&["detector", "p", "snr_db", "pd", "gamma", "trials"]);
    for (name, pt, trials) in rows {
        t.push_row(&[
            name.to_string(),
            pt.overlap.to_string(),
            fmt_num(pt.snr_db),
            fmt_num(pt.pd),
            fmt_num(pt.gamma),
            trials.to_string(),
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEntry {
    pub detector: DetectorName,
    pub p: usize,
    pub sensors: usize,
    pub samples: usize,
    pub pfa: f64,
    pub gamma: f64,
    pub calibration_trials: usize,
    pub seed: u64,
    pub calibration_seed: u64,
}

/// Thresholds for every (detector, overlap), from `cfg.trials` H0 trials on
/// the calibration seed (the same thresholds `sweep` would use).
pub fn calibration_table(cfg: &RunConfig) -> Result<Vec<ThresholdEntry>> {
    let cseed = calibration_seed(cfg.seed);
    let detectors = cfg.detector_kinds();
    let h0 = run_paired(
        &cfg.scenario(cfg.overlaps[0], cfg.snr_db[0]),
        Hypothesis::H0,
        &cfg.overlaps,
        &detectors,
        cfg.trials,
        cseed,
    )?;
    let mut out = Vec::new();
    for (di, d) in detectors.iter().enumerate() {
        for (pi, &p) in cfg.overlaps.iter().enumerate() {
            out.push(ThresholdEntry {
                detector: d.name(),
                p,
                sensors: cfg.sensors,
                samples: cfg.samples,
                pfa: cfg.pfa,
                gamma: calibrate_threshold(h0.get(pi, di), cfg.pfa)?,
                calibration_trials: cfg.trials,
                seed: cfg.seed,
                calibration_seed: cseed,
            });
        }
    }
    Ok(out)
}

/// Runs `command` with a resolved config, writing outputs and the manifest
/// into `out_dir`.
pub fn execute(command: CommandKind, cfg: &RunConfig, out_dir: &Path) -> Result<RunManifest> {
    cfg.validate(command)?;
    std::fs::create_dir_all(out_dir).map_err(|source| SenseError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let started = std::time::Instant::now();
    let mut manifest = RunManifest::new(command, cfg.clone());

    match command {
        CommandKind::Eigs => {
            let profile = eigen_profile(cfg)?;
            let path = out_dir.join("eigs.csv");
            profile.to_csv().write(&path)?;
            manifest.outputs.push(path);
        }
        CommandKind::Roc => {
            let curves = roc_curves(cfg)?;
            let csv = out_dir.join("roc.csv");
            roc_csv(&curves).write(&csv)?;
            let json = out_dir.join("auc.json");
            write_json(&json, &auc_summary(&curves, cfg.seed))?;
            manifest.outputs.extend([csv, json]);
        }
        CommandKind::Sweep => {
            if cfg.pfa * (cfg.calibration_trials as f64) < 10.0 {
                manifest
                    .warnings
                    .push("fewer than 10 calibration values expected above threshold".into());
            }
            let results = sweep_results(cfg)?;
            let path = out_dir.join("sweep.csv");
            sweep_csv(&results, cfg.axis).write(&path)?;
            manifest.outputs.push(path);
            manifest.calibration_seed = Some(calibration_seed(cfg.seed));
        }
        CommandKind::Calibrate => {
            if cfg.pfa * (cfg.trials as f64) < 10.0 {
                manifest
                    .warnings
                    .push("fewer than 10 calibration values expected above threshold".into());
            }
            let table = calibration_table(cfg)?;
            let path = out_dir.join("thresholds.json");
            write_json(&path, &table)?;
            manifest.outputs.push(path);
            manifest.calibration_seed = Some(calibration_seed(cfg.seed));
        }
    }

    manifest.duration_seconds = started.elapsed().as_secs_f64();
    let path = manifest.write(out_dir)?;
    manifest.outputs.push(path);
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(command: CommandKind) -> RunConfig {
        RunConfig {
            sensors: 4,
            samples: 40,
            overlaps: vec![1, 2],
            trials: 120,
            calibration_trials: 150,
            ..RunConfig::defaults(command)
        }
    }

    #[test]
    fn eigen_profile_shape() {
        let cfg = RunConfig {
            sensors: 6,
            overlaps: vec![2],
            trials: 5,
            ..small(CommandKind::Eigs)
        };
        let prof = eigen_profile(&cfg).unwrap();
        assert_eq!(prof.r_h0.len(), 6);
        assert_eq!(prof.rprime_h1.len(), 10);
        let csv = prof.to_csv();
        assert_eq!(csv.as_str().lines().count(), 11);
        assert!(csv.as_str().lines().last().unwrap().starts_with("10,,,"));
    }

    #[test]
    fn sweep_table_rows() {
        let cfg = RunConfig {
            snr_db: vec![-5.0, 0.0],
            detectors: vec![DetectorName::Glrt],
            ..small(CommandKind::Sweep)
        };
        let res = sweep_results(&cfg).unwrap();
        let by_snr = sweep_csv(&res, SweepAxisName::Snr);
        let lines: Vec<&str> = by_snr.as_str().lines().collect();
        assert_eq!(lines[0], "detector,p,snr_db,pd,gamma,trials");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("glrt,1,-5,"));
        assert!(lines[2].starts_with("glrt,1,0,"));
        let by_p = sweep_csv(&res, SweepAxisName::P);
        let lines: Vec<&str> = by_p.as_str().lines().collect();
        assert!(lines[1].starts_with("glrt,1,-5,"));
        assert!(lines[2].starts_with("glrt,2,-5,"));
    }

    #[test]
    fn calibration_matches_sweep_thresholds() {
        let sweep_cfg = RunConfig {
            detectors: vec![DetectorName::Mme],
            ..small(CommandKind::Sweep)
        };
        let calib_cfg = RunConfig {
            trials: sweep_cfg.calibration_trials,
            ..sweep_cfg.clone()
        };
        let table = calibration_table(&calib_cfg).unwrap();
        let sweep = sweep_results(&sweep_cfg).unwrap();
        for (entry, res) in table.iter().zip(&sweep) {
            assert_eq!(entry.gamma, res.points[0].gamma);
        }
    }
}
