use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SenseError};

/// Empirical ROC: (pf, pd) points sorted by pf, from (0, 0) to (1, 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
}

impl RocCurve {
    /// Detection probability at false-alarm rate `pf`, reading the step curve
    /// at the last point whose pf does not exceed it.
    pub fn pd_at(&self, pf: f64) -> f64 {
        self.points
            .iter()
            .take_while(|(f, _)| *f <= pf)
            .map(|&(_, d)| d)
            .fold(0.0, f64::max)
    }
}

fn check_nonempty(h0: &[f64], h1: &[f64]) -> Result<()> {
    if h0.is_empty() {
        return Err(SenseError::Empty("H0 statistics"));
    }
    if h1.is_empty() {
        return Err(SenseError::Empty("H1 statistics"));
    }
    if h0.iter().chain(h1).any(|v| v.is_nan()) {
        return Err(SenseError::NonFinite("NaN statistic in ROC input".into()));
    }
    Ok(())
}

/// Sweeps the threshold down through every observed statistic. Just below each
/// distinct value v, pf and pd count the statistics that are >= v.
pub fn roc_curve(h0: &[f64], h1: &[f64]) -> Result<RocCurve> {
    check_nonempty(h0, h1)?;
    let desc = |v: &[f64]| {
        let mut s = v.to_vec();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    };
    let (s0, s1) = (desc(h0), desc(h1));
    let (k0, k1) = (s0.len() as f64, s1.len() as f64);

    let mut points = vec![(0.0, 0.0)];
    let (mut i, mut j) = (0, 0);
    while i < s0.len() || j < s1.len() {
        let v = match (s0.get(i), s1.get(j)) {
            (Some(&a), Some(&b)) => a.max(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        while i < s0.len() && s0[i] >= v {
            i += 1;
        }
        while j < s1.len() && s1[j] >= v {
            j += 1;
        }
        points.push((i as f64 / k0, j as f64 / k1));
    }

    let auc = points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) * 0.5)
        .sum();
    Ok(RocCurve { points, auc })
}

/// Mann-Whitney form of the AUC: the fraction of (h1, h0) pairs with
/// h1 > h0, ties counting one half.
pub fn auc_concordance(h0: &[f64], h1: &[f64]) -> Result<f64> {
    check_nonempty(h0, h1)?;
    let mut s0 = h0.to_vec();
    s0.sort_by(f64::total_cmp);
    Ok(concordance_sorted(&s0, h1))
}

fn concordance_sorted(sorted_h0: &[f64], h1: &[f64]) -> f64 {
    let mut score = 0.0;
    for &v in h1 {
        let below = sorted_h0.partition_point(|&x| x < v);
        let not_above = sorted_h0.partition_point(|&x| x <= v);
        score += below as f64 + 0.5 * (not_above - below) as f64;
    }
    score / (sorted_h0.len() as f64 * h1.len() as f64)
}

fn resampled_auc(h0: &[f64], h1: &[f64], idx0: &[usize], idx1: &[usize]) -> f64 {
    let mut s0: Vec<f64> = idx0.iter().map(|&i| h0[i]).collect();
    s0.sort_by(f64::total_cmp);
    let r1: Vec<f64> = idx1.iter().map(|&i| h1[i]).collect();
    concordance_sorted(&s0, &r1)
}

fn bootstrap_indices(k0: usize, k1: usize, seed: u64, rep: u64) -> (Vec<usize>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    let idx0 = (0..k0).map(|_| rng.random_range(0..k0)).collect();
    let idx1 = (0..k1).map(|_| rng.random_range(0..k1)).collect();
    (idx0, idx1)
}

fn std_dev(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Bootstrap standard error of a single AUC, resampling H0 and H1 trials
/// independently.
pub fn auc_bootstrap_se(h0: &[f64], h1: &[f64], reps: usize, seed: u64) -> Result<f64> {
    check_nonempty(h0, h1)?;
    if reps < 2 {
        return Err(SenseError::config("bootstrap needs at least 2 replicates"));
    }
    let aucs: Vec<f64> = (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let (i0, i1) = bootstrap_indices(h0.len(), h1.len(), seed, r);
            resampled_auc(h0, h1, &i0, &i1)
        })
        .collect();
    Ok(std_dev(&aucs))
}

/// AUCs of two detectors evaluated on the same trials, and the bootstrap
/// standard error of their difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AucComparison {
    pub auc_a: f64,
    pub auc_b: f64,
    /// auc_a - auc_b.
    pub difference: f64,
    pub se: f64,
}

impl AucComparison {
    /// Difference in units of its standard error.
    pub fn z(&self) -> f64 {
        self.difference / self.se
    }
}

/// Paired bootstrap: each replicate resamples trial indices once and applies
/// them to both detectors, so shared realizations stay paired.
pub fn paired_auc_comparison(
    a_h0: &[f64],
    a_h1: &[f64],
    b_h0: &[f64],
    b_h1: &[f64],
    reps: usize,
    seed: u64,
) -> Result<AucComparison> {
    check_nonempty(a_h0, a_h1)?;
    check_nonempty(b_h0, b_h1)?;
    if a_h0.len() != b_h0.len() || a_h1.len() != b_h1.len() {
        return Err(SenseError::Dimension(
            "paired comparison needs equal trial counts".into(),
        ));
    }
    if reps < 2 {
        return Err(SenseError::config("bootstrap needs at least 2 replicates"));
    }
    let auc_a = auc_concordance(a_h0, a_h1)?;
    let auc_b = auc_concordance(b_h0, b_h1)?;
    let diffs: Vec<f64> = (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let (i0, i1) = bootstrap_indices(a_h0.len(), a_h1.len(), seed, r);
            resampled_auc(a_h0, a_h1, &i0, &i1) - resampled_auc(b_h0, b_h1, &i0, &i1)
        })
        .collect();
    Ok(AucComparison {
        auc_a,
        auc_b,
        difference: auc_a - auc_b,
        se: std_dev(&diffs),
    })
}
