//! Seeded Monte Carlo campaigns: per-trial statistics, empirical threshold
//! calibration, detection probability, ROC curves and sweeps.
//!
//! Trials run on the ambient rayon pool. Each trial regenerates its own data
//! from `(master_seed, trial)`, and results are collected in trial order, so
//! output never depends on the number of workers.

mod roc;
mod sweep;

pub use roc::{
    auc_bootstrap_se, auc_concordance, paired_auc_comparison, roc_curve, AucComparison,
    RocCurve,
};
pub use sweep::{
    sweep_overlap, sweep_overlap_paired, sweep_snr, sweep_snr_paired, LabelledRoc, SweepAxis,
    SweepResult,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covariance::{assemble_covariance_from_blocks, eigvals_hermitian, sample_covariance};
use crate::detectors::DetectorKind;
use crate::error::{Result, SenseError};
use crate::signal_model::{check_overlap, realize_trial, Hypothesis, ScenarioConfig};
use crate::streams::derive_seed;

/// Smallest trial count for which quantile calibration is accepted.
pub const MIN_TRIALS: usize = 100;

/// Domain tag mixed into the master seed for threshold calibration runs.
pub const CALIBRATION_DOMAIN: u64 = 0xCA11_B4A7;

/// Master seed used for H0 calibration trials; never equal to the evaluation
/// seed it is derived from.
pub fn calibration_seed(master_seed: u64) -> u64 {
    derive_seed(master_seed, CALIBRATION_DOMAIN)
}

/// One detector evaluated on one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub scenario: ScenarioConfig,
    pub detector: DetectorKind,
    /// Evaluation trials per hypothesis (and per sweep point).
    pub trials: usize,
    /// H0 trials used to calibrate the threshold.
    pub calibration_trials: usize,
    pub target_pfa: f64,
    #[serde(default)]
    pub sweep: Option<SweepAxis>,
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.detector.validate()?;
        check_min_eigen_regime(&self.scenario, &[self.detector])?;
        for (what, n) in [
            ("trials", self.trials),
            ("calibration_trials", self.calibration_trials),
        ] {
            if n < MIN_TRIALS {
                return Err(SenseError::config(format!(
                    "{what} = {n} is below the minimum of {MIN_TRIALS}"
                )));
            }
        }
        check_alpha(self.target_pfa)?;
        match &self.sweep {
            Some(SweepAxis::Snr(grid)) if grid.is_empty() => {
                return Err(SenseError::config("empty SNR grid"))
            }
            Some(SweepAxis::Overlap(grid)) => {
                if grid.is_empty() {
                    return Err(SenseError::config("empty overlap grid"));
                }
                for &p in grid {
                    check_overlap(self.scenario.num_sensors, p)?;
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Non-fatal configuration concerns.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let expected = self.target_pfa * self.calibration_trials as f64;
        if expected < 10.0 {
            out.push(format!(
                "only {expected:.1} calibration values expected above the threshold; \
                 the quantile estimate will be noisy"
            ));
        }
        out
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(SenseError::config(format!(
            "target false-alarm rate must lie in (0, 1), got {alpha}"
        )));
    }
    Ok(())
}

/// Minimum-eigenvalue detectors are meaningless when the sample covariance
/// is rank deficient because N < M.
pub(crate) fn check_min_eigen_regime(
    scenario: &ScenarioConfig,
    detectors: &[DetectorKind],
) -> Result<()> {
    if scenario.num_samples < scenario.num_sensors {
        if let Some(d) = detectors.iter().find(|d| d.needs_min_eigenvalue()) {
            return Err(SenseError::config(format!(
                "{} needs N >= M (got N={}, M={})",
                d.name(),
                scenario.num_samples,
                scenario.num_sensors
            )));
        }
    }
    Ok(())
}

/// Statistics for every (overlap, detector) pair, computed from the same
/// received matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedStats {
    overlaps: Vec<usize>,
    detectors: Vec<DetectorKind>,
    trials: usize,
    // [overlap][detector][trial]
    stats: Vec<Vec<Vec<f64>>>,
}

impl PairedStats {
    pub fn overlaps(&self) -> &[usize] {
        &self.overlaps
    }

    pub fn detectors(&self) -> &[DetectorKind] {
        &self.detectors
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    /// Statistics for the `p_idx`-th overlap and `d_idx`-th detector.
    pub fn get(&self, p_idx: usize, d_idx: usize) -> &[f64] {
        &self.stats[p_idx][d_idx]
    }

    /// Looks up statistics by overlap value and detector.
    pub fn find(&self, overlap: usize, detector: DetectorKind) -> Option<&[f64]> {
        let p = self.overlaps.iter().position(|&o| o == overlap)?;
        let d = self.detectors.iter().position(|&k| k == detector)?;
        Some(self.get(p, d))
    }
}

/// Statistics of one trial for every (overlap, detector) pair, flattened
/// overlap-major.
fn trial_statistics(
    scenario: &ScenarioConfig,
    hypothesis: Hypothesis,
    overlaps: &[usize],
    detectors: &[DetectorKind],
    master_seed: u64,
    trial: u64,
) -> Result<Vec<f64>> {
    let x = realize_trial(scenario, hypothesis, master_seed, trial)?;
    let r = sample_covariance(&x.data);
    let mut out = Vec::with_capacity(overlaps.len() * detectors.len());
    for &p in overlaps {
        let rp = assemble_covariance_from_blocks(&r, p)?;
        let spec = eigvals_hermitian(&rp)?;
        for d in detectors {
            out.push(d.statistic(&spec)?);
        }
    }
    Ok(out)
}

/// Runs `trials` paired trials: each received matrix is reused for every
/// overlap and detector. `scenario.overlap` is ignored in favor of `overlaps`.
pub fn run_paired(
    scenario: &ScenarioConfig,
    hypothesis: Hypothesis,
    overlaps: &[usize],
    detectors: &[DetectorKind],
    trials: usize,
    master_seed: u64,
) -> Result<PairedStats> {
    scenario.validate()?;
    if overlaps.is_empty() || detectors.is_empty() {
        return Err(SenseError::config("need at least one overlap and one detector"));
    }
    for &p in overlaps {
        check_overlap(scenario.num_sensors, p)?;
    }
    for d in detectors {
        d.validate()?;
    }
    check_min_eigen_regime(scenario, detectors)?;

    let rows: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            trial_statistics(scenario, hypothesis, overlaps, detectors, master_seed, t).map_err(
                |e| SenseError::Trial {
                    trial: t,
                    source: Box::new(e),
                },
            )
        })
        .collect::<Result<_>>()?;

    let nd = detectors.len();
    let stats = (0..overlaps.len())
        .map(|pi| {
            (0..nd)
                .map(|di| rows.iter().map(|row| row[pi * nd + di]).collect())
                .collect()
        })
        .collect();
    Ok(PairedStats {
        overlaps: overlaps.to_vec(),
        detectors: detectors.to_vec(),
        trials,
        stats,
    })
}

/// Statistics of `trials` trials at the scenario's own overlap, in trial order.
pub fn run_trials(
    scenario: &ScenarioConfig,
    hypothesis: Hypothesis,
    detector: DetectorKind,
    trials: usize,
    master_seed: u64,
) -> Result<Vec<f64>> {
    let mut paired = run_paired(
        scenario,
        hypothesis,
        &[scenario.overlap],
        &[detector],
        trials,
        master_seed,
    )?;
    Ok(std::mem::take(&mut paired.stats[0][0]))
}

/// Empirical upper (1 - alpha) quantile of the H0 statistics: the
/// ceil((1 - alpha) K)-th order statistic.
pub fn calibrate_threshold(h0_stats: &[f64], alpha: f64) -> Result<f64> {
    if h0_stats.is_empty() {
        return Err(SenseError::Empty("H0 statistics"));
    }
    check_alpha(alpha)?;
    if h0_stats.iter().any(|v| v.is_nan()) {
        return Err(SenseError::NonFinite("NaN among H0 statistics".into()));
    }
    let mut sorted = h0_stats.to_vec();
    sorted.sort_by(f64::total_cmp);
    let k = sorted.len();
    // Guard against (1 - alpha) K landing a hair above an integer.
    let rank = ((1.0 - alpha) * k as f64 - 1e-9).ceil().clamp(1.0, k as f64) as usize;
    Ok(sorted[rank - 1])
}

/// Fraction of statistics strictly above `threshold`.
pub fn estimate_pd(h1_stats: &[f64], threshold: f64) -> Result<f64> {
    if h1_stats.is_empty() {
        return Err(SenseError::Empty("H1 statistics"));
    }
    let above = h1_stats.iter().filter(|&&t| t > threshold).count();
    Ok(above as f64 / h1_stats.len() as f64)
}
