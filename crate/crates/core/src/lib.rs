//! Eigenvalue-based spectrum sensing with overlapping sensor subgroups.
//!
//! An array of M sensors observes N samples of a possible primary-user
//! signal. Besides the usual sample covariance R of the M x N data, the
//! crate builds the covariance R' of the combinatorial matrix formed by
//! stacking p overlapping windows of M' = M - p + 1 consecutive sensors, and
//! evaluates four eigenvalue detectors (RLRT, GLRT, MME, EME) on either.
//!
//! The [`montecarlo`] module calibrates thresholds from noise-only trials and
//! produces ROC curves and Pd-vs-SNR sweeps; [`cli_io`] wraps it in the
//! `overlap-sense` command-line tool. See `examples/` for one runnable
//! program per capability.

pub mod cli_io;
pub mod covariance;
pub mod detectors;
pub mod error;
pub mod linalg;
pub mod montecarlo;
pub mod signal_model;
pub mod streams;

pub use covariance::{
    assemble_covariance_from_blocks, build_combinatorial, build_subgroups, eigvals_hermitian,
    sample_covariance, trace, CombinatorialMatrix, CovarianceMatrix, EigenSpectrum,
};
pub use detectors::{decide, eme, glrt, mme, rlrt, Decision, DetectorKind, DetectorName};
pub use error::{Result, SenseError};
pub use linalg::CMatrix;
pub use montecarlo::{
    calibrate_threshold, estimate_pd, roc_curve, run_paired, run_trials, CampaignConfig,
    RocCurve, SweepResult,
};
pub use signal_model::{
    ChannelModel, FieldMode, Hypothesis, ReceivedMatrix, ScenarioConfig, SignalPower,
};
