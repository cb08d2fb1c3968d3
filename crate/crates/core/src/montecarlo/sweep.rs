use serde::{Deserialize, Serialize};

use super::{
    calibrate_threshold, calibration_seed, check_alpha, estimate_pd, roc_curve, run_paired,
    CampaignConfig, RocCurve,
};
use crate::detectors::DetectorKind;
use crate::error::{Result, SenseError};
use crate::signal_model::{Hypothesis, ScenarioConfig};

/// Which scenario parameter a sweep varies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Per-sensor SNR values in dB.
    Snr(Vec<f64>),
    /// Overlap counts p.
    Overlap(Vec<usize>),
}

/// One grid point of a detection-probability sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub overlap: usize,
    pub snr_db: f64,
    pub pd: f64,
    /// Threshold calibrated for this point's (detector, overlap).
    pub gamma: f64,
}

/// Detection probability of one detector at a fixed false-alarm target,
/// across a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub detector: DetectorKind,
    pub points: Vec<SweepPoint>,
    pub target_pfa: f64,
    pub trials: usize,
    pub calibration_trials: usize,
    pub seed: u64,
}

/// An ROC curve tagged with what produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelledRoc {
    pub detector: DetectorKind,
    pub overlap: usize,
    pub snr_db: f64,
    pub trials: usize,
    pub curve: RocCurve,
}

/// Pd-vs-SNR curves for every (detector, overlap) pair.
///
/// Thresholds are calibrated once per (detector, overlap) from H0 trials on
/// the calibration seed; H0 data does not depend on the SNR. Every SNR point
/// reuses the same evaluation seed, so the curves are paired across SNR,
/// overlap and detector. Results are ordered detector-major, then overlap.
#[allow(clippy::too_many_arguments)]
pub fn sweep_snr_paired(
    scenario: &ScenarioConfig,
    overlaps: &[usize],
    detectors: &[DetectorKind],
    snr_grid: &[f64],
    trials: usize,
    calibration_trials: usize,
    target_pfa: f64,
    seed: u64,
) -> Result<Vec<SweepResult>> {
    if snr_grid.is_empty() {
        return Err(SenseError::config("empty SNR grid"));
    }
    check_alpha(target_pfa)?;
    let calib = run_paired(
        scenario,
        Hypothesis::H0,
        overlaps,
        detectors,
        calibration_trials,
        calibration_seed(seed),
    )?;
    let mut gammas = vec![vec![0.0; detectors.len()]; overlaps.len()];
    for (pi, row) in gammas.iter_mut().enumerate() {
        for (di, g) in row.iter_mut().enumerate() {
            *g = calibrate_threshold(calib.get(pi, di), target_pfa)?;
        }
    }

    let mut pds = vec![vec![Vec::with_capacity(snr_grid.len()); detectors.len()]; overlaps.len()];
    for &snr in snr_grid {
        let h1 = run_paired(
            &scenario.with_snr_db(snr),
            Hypothesis::H1,
            overlaps,
            detectors,
            trials,
            seed,
        )?;
        for pi in 0..overlaps.len() {
            for di in 0..detectors.len() {
                pds[pi][di].push(estimate_pd(h1.get(pi, di), gammas[pi][di])?);
            }
        }
    }

    let mut out = Vec::with_capacity(detectors.len() * overlaps.len());
    for (di, &detector) in detectors.iter().enumerate() {
        for (pi, &overlap) in overlaps.iter().enumerate() {
            let points = snr_grid
                .iter()
                .zip(&pds[pi][di])
                .map(|(&snr_db, &pd)| SweepPoint {
                    overlap,
                    snr_db,
                    pd,
                    gamma: gammas[pi][di],
                })
                .collect();
            out.push(SweepResult {
                detector,
                points,
                target_pfa,
                trials,
                calibration_trials,
                seed,
            });
        }
    }
    Ok(out)
}

/// Pd-vs-SNR for the campaign's detector at the scenario's overlap.
pub fn sweep_snr(campaign: &CampaignConfig, snr_grid: &[f64]) -> Result<SweepResult> {
    campaign.validate()?;
    let mut all = sweep_snr_paired(
        &campaign.scenario,
        &[campaign.scenario.overlap],
        &[campaign.detector],
        snr_grid,
        campaign.trials,
        campaign.calibration_trials,
        campaign.target_pfa,
        campaign.scenario.master_seed,
    )?;
    Ok(all.remove(0))
}

/// ROC curves for every (detector, overlap) pair from one paired set of H0
/// and H1 trials. Ordered detector-major, then overlap.
pub fn sweep_overlap_paired(
    scenario: &ScenarioConfig,
    overlaps: &[usize],
    detectors: &[DetectorKind],
    trials: usize,
    seed: u64,
) -> Result<Vec<LabelledRoc>> {
    let h0 = run_paired(scenario, Hypothesis::H0, overlaps, detectors, trials, seed)?;
    let h1 = run_paired(scenario, Hypothesis::H1, overlaps, detectors, trials, seed)?;
    let mut out = Vec::with_capacity(detectors.len() * overlaps.len());
    for (di, &detector) in detectors.iter().enumerate() {
        for (pi, &overlap) in overlaps.iter().enumerate() {
            out.push(LabelledRoc {
                detector,
                overlap,
                snr_db: scenario.snr_db(),
                trials,
                curve: roc_curve(h0.get(pi, di), h1.get(pi, di))?,
            });
        }
    }
    Ok(out)
}

/// One ROC per overlap in `overlap_grid` for the campaign's detector.
pub fn sweep_overlap(campaign: &CampaignConfig, overlap_grid: &[usize]) -> Result<Vec<LabelledRoc>> {
    campaign.validate()?;
    if overlap_grid.is_empty() {
        return Err(SenseError::config("empty overlap grid"));
    }
    sweep_overlap_paired(
        &campaign.scenario,
        overlap_grid,
        &[campaign.detector],
        campaign.trials,
        campaign.scenario.master_seed,
    )
}
