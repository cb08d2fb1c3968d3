//! Scalar test statistics computed from an eigenspectrum, and the threshold
//! decision rule.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::covariance::EigenSpectrum;
use crate::error::{Result, SenseError};
use crate::signal_model::Hypothesis;

/// Eigenvalues at or below this fraction of the largest are treated as zero
/// by the minimum-eigenvalue detectors.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// A detector and, for RLRT, the known noise variance it needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DetectorKind {
    /// Roy's largest root test, lambda_1 / sigma_n^2.
    Rlrt { noise_variance: f64 },
    /// lambda_1 over the mean eigenvalue.
    Glrt,
    /// Maximum over minimum eigenvalue.
    Mme,
    /// Mean eigenvalue (energy) over minimum eigenvalue.
    Eme,
}

impl DetectorKind {
    pub fn name(&self) -> DetectorName {
        match self {
            DetectorKind::Rlrt { .. } => DetectorName::Rlrt,
            DetectorKind::Glrt => DetectorName::Glrt,
            DetectorKind::Mme => DetectorName::Mme,
            DetectorKind::Eme => DetectorName::Eme,
        }
    }

    /// Whether the detector divides by the smallest eigenvalue.
    pub fn needs_min_eigenvalue(&self) -> bool {
        matches!(self, DetectorKind::Mme | DetectorKind::Eme)
    }

    pub fn validate(&self) -> Result<()> {
        if let DetectorKind::Rlrt { noise_variance } = *self {
            if !(noise_variance.is_finite() && noise_variance > 0.0) {
                return Err(SenseError::config(format!(
                    "RLRT needs a positive noise variance, got {noise_variance}"
                )));
            }
        }
        Ok(())
    }

    /// Evaluates this detector's statistic on `spec`.
    pub fn statistic(&self, spec: &EigenSpectrum) -> Result<f64> {
        match *self {
            DetectorKind::Rlrt { noise_variance } => rlrt(spec, noise_variance),
            DetectorKind::Glrt => glrt(spec, spec.len()),
            DetectorKind::Mme => mme(spec),
            DetectorKind::Eme => eme(spec, spec.len()),
        }
    }
}

/// Detector identity without parameters; used on the command line and in
/// output tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorName {
    Rlrt,
    Glrt,
    Mme,
    Eme,
}

impl DetectorName {
    pub const ALL: [DetectorName; 4] = [
        DetectorName::Rlrt,
        DetectorName::Glrt,
        DetectorName::Mme,
        DetectorName::Eme,
    ];

    /// Attaches the noise variance RLRT needs; ignored for blind detectors.
    pub fn with_noise_variance(self, noise_variance: f64) -> DetectorKind {
        match self {
            DetectorName::Rlrt => DetectorKind::Rlrt { noise_variance },
            DetectorName::Glrt => DetectorKind::Glrt,
            DetectorName::Mme => DetectorKind::Mme,
            DetectorName::Eme => DetectorKind::Eme,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            DetectorName::Rlrt => "rlrt",
            DetectorName::Glrt => "glrt",
            DetectorName::Mme => "mme",
            DetectorName::Eme => "eme",
        }
    }
}

impl fmt::Display for DetectorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for DetectorName {
    type Err = SenseError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rlrt" => Ok(DetectorName::Rlrt),
            "glrt" => Ok(DetectorName::Glrt),
            "mme" => Ok(DetectorName::Mme),
            "eme" => Ok(DetectorName::Eme),
            other => Err(SenseError::config(format!("unknown detector '{other}'"))),
        }
    }
}

pub fn rlrt(spec: &EigenSpectrum, noise_variance: f64) -> Result<f64> {
    if !(noise_variance.is_finite() && noise_variance > 0.0) {
        return Err(SenseError::config(format!(
            "RLRT needs a positive noise variance, got {noise_variance}"
        )));
    }
    Ok(spec.largest() / noise_variance)
}

/// L * lambda_1 / trace. With a spectrum of R' this is the overlapped GLRT
/// with L = pM'.
pub fn glrt(spec: &EigenSpectrum, dimension: usize) -> Result<f64> {
    check_dimension(spec, dimension)?;
    let tr = spec.trace();
    if tr.is_nan() || tr <= 0.0 {
        return Err(SenseError::Degenerate(format!(
            "GLRT needs positive trace, got {tr}"
        )));
    }
    Ok(spec.largest() / (tr / dimension as f64))
}

/// lambda_max / lambda_min, where lambda_min is the smallest eigenvalue inside
/// the spectrum's structural rank.
pub fn mme(spec: &EigenSpectrum) -> Result<f64> {
    let min = usable_min(spec)?;
    Ok(spec.largest() / min)
}

/// (trace / L) / lambda_min, with lambda_min as in [`mme`].
pub fn eme(spec: &EigenSpectrum, dimension: usize) -> Result<f64> {
    check_dimension(spec, dimension)?;
    let min = usable_min(spec)?;
    Ok((spec.trace() / dimension as f64) / min)
}

fn check_dimension(spec: &EigenSpectrum, dimension: usize) -> Result<()> {
    if dimension != spec.len() {
        return Err(SenseError::Dimension(format!(
            "dimension {dimension} does not match spectrum length {}",
            spec.len()
        )));
    }
    Ok(())
}

fn usable_min(spec: &EigenSpectrum) -> Result<f64> {
    let min = spec.smallest_in_rank();
    if min.is_nan() || min <= RANK_TOLERANCE * spec.largest().abs() {
        return Err(SenseError::RankDeficient { value: min });
    }
    Ok(min)
}

/// A statistic compared against a threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub statistic: f64,
    pub threshold: f64,
    pub verdict: Hypothesis,
}

/// H1 iff `statistic > threshold`; ties go to H0.
pub fn decide(statistic: f64, threshold: f64) -> Result<Decision> {
    if !statistic.is_finite() || !threshold.is_finite() {
        return Err(SenseError::NonFinite(format!(
            "decision on statistic {statistic} against threshold {threshold}"
        )));
    }
    let verdict = if statistic > threshold {
        Hypothesis::H1
    } else {
        Hypothesis::H0
    };
    Ok(Decision {
        statistic,
        threshold,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(v: &[f64]) -> EigenSpectrum {
        EigenSpectrum::from_values(v.to_vec()).unwrap()
    }

    #[test]
    fn rlrt_values() {
        assert_eq!(rlrt(&spec(&[4.0, 1.0, 1.0]), 2.0).unwrap(), 2.0);
        assert_eq!(rlrt(&spec(&[3.5, 1.0]), 1.0).unwrap(), 3.5);
        assert!(matches!(rlrt(&spec(&[1.0]), 0.0), Err(SenseError::Config(_))));
        assert!(matches!(rlrt(&spec(&[1.0]), -1.0), Err(SenseError::Config(_))));
    }

    #[test]
    fn glrt_values() {
        assert_eq!(glrt(&spec(&[0.7; 5]), 5).unwrap(), 1.0);
        assert_eq!(glrt(&spec(&[6.0, 2.0, 2.0, 2.0]), 4).unwrap(), 2.0);
        assert!(matches!(
            glrt(&spec(&[0.0, 0.0]), 2),
            Err(SenseError::Degenerate(_))
        ));
        assert!(matches!(
            glrt(&spec(&[1.0, 0.0]), 3),
            Err(SenseError::Dimension(_))
        ));
    }

    #[test]
    fn mme_and_eme_values() {
        assert_eq!(mme(&spec(&[1.0; 4])).unwrap(), 1.0);
        assert_eq!(mme(&spec(&[4.0, 3.0, 2.0])).unwrap(), 2.0);
        assert_eq!(eme(&spec(&[2.5; 3]), 3).unwrap(), 1.0);
        assert_eq!(eme(&spec(&[6.0, 4.0, 2.0]), 3).unwrap(), 2.0);
        assert!(matches!(
            mme(&spec(&[4.0, 0.0])),
            Err(SenseError::RankDeficient { .. })
        ));
        assert!(matches!(
            eme(&spec(&[4.0, 1e-20]), 2),
            Err(SenseError::RankDeficient { .. })
        ));
    }

    #[test]
    fn decisions_are_strict() {
        assert_eq!(decide(2.0, 1.0).unwrap().verdict, Hypothesis::H1);
        assert_eq!(decide(1.0, 1.0).unwrap().verdict, Hypothesis::H0);
        assert_eq!(decide(0.5, 1.0).unwrap().verdict, Hypothesis::H0);
        assert!(decide(f64::NAN, 1.0).is_err());
        assert!(decide(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn names_round_trip() {
        for d in DetectorName::ALL {
            assert_eq!(d.as_str().parse::<DetectorName>().unwrap(), d);
            assert_eq!(d.with_noise_variance(2.0).name(), d);
        }
        assert!("nope".parse::<DetectorName>().is_err());
    }
}
