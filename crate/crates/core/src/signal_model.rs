//! Primary-user signal, channel and noise generation, and synthesis of the
//! received M x N data matrix under either hypothesis.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SenseError};
use crate::linalg::CMatrix;
use crate::streams::{trial_stream, StreamId};

/// Real-valued or circularly-symmetric complex samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FieldMode {
    Real,
    #[default]
    Complex,
}

/// How the per-sensor channel gains are produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelModel {
    /// Every gain is 1.
    #[default]
    Unit,
    /// Explicit gains, one per sensor.
    Fixed { gains: Vec<Complex64> },
    /// Fresh Gaussian gains each trial, normalized to unit mean power.
    RayleighPerTrial,
}

/// Signal power, given either directly or relative to the noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalPower {
    /// Per-sensor SNR in dB: sigma_s^2 = sigma_n^2 * 10^(snr_db / 10).
    SnrDb(f64),
    /// Linear signal variance.
    Variance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    /// Noise only.
    H0,
    /// Primary user present.
    H1,
}

/// Full description of one sensing scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub num_sensors: usize,
    pub num_samples: usize,
    /// Number of overlapping subgroups; 1 means no overlap.
    pub overlap: usize,
    pub signal: SignalPower,
    pub noise_variance: f64,
    #[serde(default)]
    pub field_mode: FieldMode,
    #[serde(default)]
    pub channel_model: ChannelModel,
    pub master_seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            num_sensors: 8,
            num_samples: 200,
            overlap: 1,
            signal: SignalPower::SnrDb(-13.0),
            noise_variance: 1.0,
            field_mode: FieldMode::Complex,
            channel_model: ChannelModel::Unit,
            master_seed: 0,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let m = self.num_sensors;
        if m < 2 {
            return Err(SenseError::config(format!("need at least 2 sensors, got {m}")));
        }
        if self.num_samples == 0 {
            return Err(SenseError::config("need at least one sample per sensor"));
        }
        check_overlap(m, self.overlap)?;
        if !(self.noise_variance.is_finite() && self.noise_variance > 0.0) {
            return Err(SenseError::config(format!(
                "noise variance must be positive and finite, got {}",
                self.noise_variance
            )));
        }
        match self.signal {
            SignalPower::SnrDb(db) if db.is_nan() || db == f64::INFINITY => {
                return Err(SenseError::config(format!("invalid snr_db {db}")));
            }
            SignalPower::Variance(v) if !(v.is_finite() && v >= 0.0) => {
                return Err(SenseError::config(format!(
                    "signal variance must be nonnegative and finite, got {v}"
                )));
            }
            _ => {}
        }
        if let ChannelModel::Fixed { gains } = &self.channel_model {
            if gains.len() != m {
                return Err(SenseError::config(format!(
                    "fixed channel has {} gains for {m} sensors",
                    gains.len()
                )));
            }
        }
        Ok(())
    }

    /// Linear signal variance sigma_s^2.
    pub fn signal_variance(&self) -> f64 {
        match self.signal {
            SignalPower::SnrDb(db) => self.noise_variance * 10f64.powf(db / 10.0),
            SignalPower::Variance(v) => v,
        }
    }

    /// Per-sensor SNR in dB implied by the configuration.
    pub fn snr_db(&self) -> f64 {
        match self.signal {
            SignalPower::SnrDb(db) => db,
            SignalPower::Variance(v) => 10.0 * (v / self.noise_variance).log10(),
        }
    }

    /// Subgroup height M' = M - p + 1.
    pub fn m_prime(&self) -> usize {
        self.num_sensors + 1 - self.overlap
    }

    /// Dimension L = p * M' of the overlapped covariance.
    pub fn dimension(&self) -> usize {
        self.overlap * self.m_prime()
    }

    pub fn with_overlap(&self, overlap: usize) -> Self {
        Self {
            overlap,
            ..self.clone()
        }
    }

    pub fn with_snr_db(&self, snr_db: f64) -> Self {
        Self {
            signal: SignalPower::SnrDb(snr_db),
            ..self.clone()
        }
    }
}

pub(crate) fn check_overlap(num_sensors: usize, overlap: usize) -> Result<()> {
    if overlap == 0 || overlap >= num_sensors {
        return Err(SenseError::config(format!(
            "overlap p={overlap} outside 1..={} for M={num_sensors}",
            num_sensors.saturating_sub(1)
        )));
    }
    Ok(())
}

/// Transmitted primary-user samples S (length N).
#[derive(Debug, Clone, PartialEq)]
pub struct SignalVector(pub Vec<Complex64>);

/// Channel gains A (length M).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVector(pub Vec<Complex64>);

/// Received M x N data matrix together with the hypothesis it was drawn under.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedMatrix {
    pub data: CMatrix,
    pub hypothesis: Hypothesis,
}

/// Zero-mean unit-variance draw scaled to unit total power.
#[inline]
fn unit_gaussian<R: Rng + ?Sized>(field: FieldMode, rng: &mut R) -> Complex64 {
    match field {
        FieldMode::Real => Complex64::new(rng.sample(StandardNormal), 0.0),
        FieldMode::Complex => {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
        }
    }
}

/// i.i.d. zero-mean Gaussian samples of variance `variance`.
pub fn gen_pu_signal<R: Rng + ?Sized>(
    num_samples: usize,
    variance: f64,
    field: FieldMode,
    rng: &mut R,
) -> SignalVector {
    let scale = variance.sqrt();
    SignalVector(
        (0..num_samples)
            .map(|_| unit_gaussian(field, rng) * scale)
            .collect(),
    )
}

pub fn gen_channel<R: Rng + ?Sized>(
    num_sensors: usize,
    model: &ChannelModel,
    field: FieldMode,
    rng: &mut R,
) -> Result<ChannelVector> {
    match model {
        ChannelModel::Unit => Ok(ChannelVector(vec![Complex64::new(1.0, 0.0); num_sensors])),
        ChannelModel::Fixed { gains } => {
            if gains.len() != num_sensors {
                return Err(SenseError::config(format!(
                    "fixed channel has {} gains for {num_sensors} sensors",
                    gains.len()
                )));
            }
            Ok(ChannelVector(gains.clone()))
        }
        ChannelModel::RayleighPerTrial => {
            let raw: Vec<Complex64> = (0..num_sensors).map(|_| unit_gaussian(field, rng)).collect();
            let power = raw.iter().map(|a| a.norm_sqr()).sum::<f64>() / num_sensors as f64;
            if power == 0.0 {
                return Err(SenseError::Degenerate("all-zero channel draw".into()));
            }
            let k = power.sqrt().recip();
            Ok(ChannelVector(raw.into_iter().map(|a| a * k).collect()))
        }
    }
}

/// M x N i.i.d. zero-mean Gaussian noise of variance `variance`.
///
/// Draws are produced at unit power and then multiplied by sqrt(variance), so
/// a variance of 4 reproduces the unit-variance draw scaled by exactly 2.
pub fn gen_noise<R: Rng + ?Sized>(
    num_sensors: usize,
    num_samples: usize,
    variance: f64,
    field: FieldMode,
    rng: &mut R,
) -> CMatrix {
    let scale = variance.sqrt();
    let data = (0..num_sensors * num_samples)
        .map(|_| unit_gaussian(field, rng) * scale)
        .collect();
    CMatrix::from_vec(num_sensors, num_samples, data).expect("sized by construction")
}

/// X = W under H0, X = A S + W under H1.
pub fn synthesize_received(
    hypothesis: Hypothesis,
    channel: &ChannelVector,
    signal: &SignalVector,
    noise: CMatrix,
) -> Result<ReceivedMatrix> {
    let (m, n) = (noise.rows(), noise.cols());
    if channel.0.len() != m || signal.0.len() != n {
        return Err(SenseError::Dimension(format!(
            "channel length {} and signal length {} do not conform to {m}x{n} noise",
            channel.0.len(),
            signal.0.len()
        )));
    }
    let mut data = noise;
    if hypothesis == Hypothesis::H1 {
        for (i, a) in channel.0.iter().enumerate() {
            for (x, s) in data.row_mut(i).iter_mut().zip(&signal.0) {
                *x = a * s + *x;
            }
        }
    }
    Ok(ReceivedMatrix { data, hypothesis })
}

/// Draws the received matrix of trial `trial` under `master_seed`.
///
/// The noise comes from the trial's noise stream regardless of hypothesis, so
/// H0 and H1 runs sharing a seed share noise realizations.
pub fn realize_trial(
    cfg: &ScenarioConfig,
    hypothesis: Hypothesis,
    master_seed: u64,
    trial: u64,
) -> Result<ReceivedMatrix> {
    let (m, n, field) = (cfg.num_sensors, cfg.num_samples, cfg.field_mode);
    let noise = gen_noise(
        m,
        n,
        cfg.noise_variance,
        field,
        &mut trial_stream(master_seed, trial, StreamId::Noise),
    );
    match hypothesis {
        Hypothesis::H0 => Ok(ReceivedMatrix {
            data: noise,
            hypothesis,
        }),
        Hypothesis::H1 => {
            let channel = gen_channel(
                m,
                &cfg.channel_model,
                field,
                &mut trial_stream(master_seed, trial, StreamId::Channel),
            )?;
            let signal = gen_pu_signal(
                n,
                cfg.signal_variance(),
                field,
                &mut trial_stream(master_seed, trial, StreamId::Signal),
            );
            synthesize_received(hypothesis, &channel, &signal, noise)
        }
    }
}
