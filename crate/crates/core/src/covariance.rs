//! Overlapping subgroups, the stacked combinatorial matrix, sample covariance
//! matrices and their eigenspectra.
//!
//! With M sensors and overlap p, subgroup i (0-based) holds sensor rows
//! i..i+M' where M' = M - p + 1. Stacking the p subgroups along the sensor
//! axis gives the pM' x N combinatorial matrix X_c, and its covariance
//! R' = X_c X_c^H / N is a block matrix whose (i, j) block is the M' x M'
//! window of R = X X^H / N starting at (i, j). Both routes are implemented
//! and must agree.

use num_complex::Complex64;

use crate::error::{Result, SenseError};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::signal_model::check_overlap;

/// The p stacked subgroups of a received matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinatorialMatrix {
    data: CMatrix,
    overlap: usize,
    m_prime: usize,
    num_sensors: usize,
}

impl CombinatorialMatrix {
    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn overlap(&self) -> usize {
        self.overlap
    }

    pub fn m_prime(&self) -> usize {
        self.m_prime
    }

    /// Covariance R' of the stacked matrix.
    pub fn covariance(&self) -> CovarianceMatrix {
        let mut r = sample_covariance(&self.data);
        r.source = CovarianceSource::Combinatorial {
            overlap: self.overlap,
            num_sensors: self.num_sensors,
        };
        r
    }
}

/// Where a covariance matrix came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovarianceSource {
    /// Straight from a data matrix (R).
    Plain,
    /// From overlapping subgroups of `num_sensors` sensors (R').
    Combinatorial { overlap: usize, num_sensors: usize },
}

/// Hermitian L x L sample covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    entries: CMatrix,
    source: CovarianceSource,
    num_samples: usize,
}

impl CovarianceMatrix {
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn dimension(&self) -> usize {
        self.entries.rows()
    }

    pub fn source(&self) -> CovarianceSource {
        self.source
    }

    pub fn num_samples(&self) -> usize {
        self.num_samples
    }

    /// Upper bound on the rank implied by how the matrix was built.
    ///
    /// R' is a congruence P R P^T of the M x M matrix R with a 0/1 selection
    /// matrix P, so its rank never exceeds min(M, N) even though L = pM' > M
    /// whenever 1 < p < M.
    pub fn rank_bound(&self) -> usize {
        let rows = match self.source {
            CovarianceSource::Plain => self.dimension(),
            CovarianceSource::Combinatorial { num_sensors, .. } => num_sensors,
        };
        rows.min(self.num_samples).min(self.dimension())
    }
}

/// Eigenvalues sorted descending, plus the matrix trace.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    values: Vec<f64>,
    trace: f64,
    rank_bound: usize,
}

impl EigenSpectrum {
    /// Builds a spectrum from raw values; they are sorted descending and the
    /// trace is their sum. The rank bound is the full length.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(SenseError::Empty("eigenvalue list"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SenseError::NonFinite("eigenvalue list".into()));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        let trace = values.iter().sum();
        let rank_bound = values.len();
        Ok(Self {
            values,
            trace,
            rank_bound,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn largest(&self) -> f64 {
        self.values[0]
    }

    /// Smallest eigenvalue overall.
    pub fn smallest(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Smallest eigenvalue that is not structurally zero.
    pub fn smallest_in_rank(&self) -> f64 {
        self.values[self.rank_bound - 1]
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    pub fn rank_bound(&self) -> usize {
        self.rank_bound
    }

    /// Every eigenvalue multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * k).collect(),
            trace: self.trace * k,
            rank_bound: self.rank_bound,
        }
    }
}

/// Splits the rows of `x` into `overlap` windows of M' consecutive sensors.
pub fn build_subgroups(x: &CMatrix, overlap: usize) -> Result<Vec<CMatrix>> {
    let m = x.rows();
    check_overlap(m, overlap)?;
    let m_prime = m + 1 - overlap;
    Ok((0..overlap)
        .map(|i| {
            let rows: Vec<&[Complex64]> = (i..i + m_prime).map(|r| x.row(r)).collect();
            CMatrix::from_rows(&rows).expect("rows share a width")
        })
        .collect())
}

/// Stacks the subgroups vertically into a pM' x N matrix.
pub fn build_combinatorial(x: &CMatrix, overlap: usize) -> Result<CombinatorialMatrix> {
    let m = x.rows();
    check_overlap(m, overlap)?;
    let m_prime = m + 1 - overlap;
    let mut data = Vec::with_capacity(overlap * m_prime * x.cols());
    for i in 0..overlap {
        for r in i..i + m_prime {
            data.extend_from_slice(x.row(r));
        }
    }
    Ok(CombinatorialMatrix {
        data: CMatrix::from_vec(overlap * m_prime, x.cols(), data)?,
        overlap,
        m_prime,
        num_sensors: m,
    })
}

/// (1/N) Y Y^H.
///
/// Only the upper triangle is accumulated; the lower triangle is its exact
/// conjugate mirror, which is what averaging the product with its conjugate
/// transpose would yield bit for bit.
pub fn sample_covariance(y: &CMatrix) -> CovarianceMatrix {
    let (l, n) = (y.rows(), y.cols());
    let mut c = CMatrix::zeros(l, l);
    let inv_n = if n == 0 { 0.0 } else { 1.0 / n as f64 };
    for i in 0..l {
        let yi = y.row(i);
        let diag: f64 = yi.iter().map(|v| v.norm_sqr()).sum();
        c[(i, i)] = Complex64::new(diag * inv_n, 0.0);
        for j in (i + 1)..l {
            let acc: Complex64 = yi.iter().zip(y.row(j)).map(|(a, b)| a * b.conj()).sum();
            c[(i, j)] = acc * inv_n;
            c[(j, i)] = c[(i, j)].conj();
        }
    }
    CovarianceMatrix {
        entries: c,
        source: CovarianceSource::Plain,
        num_samples: n,
    }
}

/// Assembles R' directly from R: block (i, j) is the M' x M' window of R with
/// top-left corner (i, j).
pub fn assemble_covariance_from_blocks(
    r: &CovarianceMatrix,
    overlap: usize,
) -> Result<CovarianceMatrix> {
    let m = r.dimension();
    check_overlap(m, overlap)?;
    let m_prime = m + 1 - overlap;
    let l = overlap * m_prime;
    let src = r.entries();
    let mut out = CMatrix::zeros(l, l);
    for bi in 0..overlap {
        for bj in 0..overlap {
            for a in 0..m_prime {
                for b in 0..m_prime {
                    out[(bi * m_prime + a, bj * m_prime + b)] = src[(bi + a, bj + b)];
                }
            }
        }
    }
    Ok(CovarianceMatrix {
        entries: out,
        source: CovarianceSource::Combinatorial {
            overlap,
            num_sensors: m,
        },
        num_samples: r.num_samples,
    })
}

/// Full eigenspectrum of a Hermitian covariance matrix.
pub fn eigvals_hermitian(c: &CovarianceMatrix) -> Result<EigenSpectrum> {
    let values = hermitian_eigenvalues(c.entries())?;
    if values.is_empty() {
        return Err(SenseError::Empty("covariance matrix"));
    }
    Ok(EigenSpectrum {
        values,
        trace: trace(c),
        rank_bound: c.rank_bound().max(1),
    })
}

/// Sum of the (real) diagonal entries.
pub fn trace(c: &CovarianceMatrix) -> f64 {
    c.entries().trace_re()
}

/// How many subgroups contain each sensor.
///
/// R' has the same nonzero eigenvalues as D^(1/2) R D^(1/2) with D the
/// diagonal of these counts. The counts are symmetric under p <-> M + 1 - p.
pub fn overlap_multiplicities(num_sensors: usize, overlap: usize) -> Result<Vec<usize>> {
    check_overlap(num_sensors, overlap)?;
    let m_prime = num_sensors + 1 - overlap;
    Ok((0..num_sensors)
        .map(|s| (0..overlap).filter(|&i| i <= s && s < i + m_prime).count())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn labelled(m: usize, n: usize) -> CMatrix {
        let rows: Vec<Vec<Complex64>> = (0..m)
            .map(|i| (0..n).map(|j| c(i as f64 + 1.0, j as f64)).collect())
            .collect();
        CMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn subgroup_index_sets() {
        let x = labelled(3, 2);
        let g = build_subgroups(&x, 2).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].row(0), x.row(0));
        assert_eq!(g[0].row(1), x.row(1));
        assert_eq!(g[1].row(0), x.row(1));
        assert_eq!(g[1].row(1), x.row(2));

        let x = labelled(4, 2);
        let g = build_subgroups(&x, 3).unwrap();
        let firsts: Vec<f64> = g.iter().map(|s| s[(0, 0)].re).collect();
        assert_eq!(firsts, vec![1.0, 2.0, 3.0]);
        assert!(g.iter().all(|s| s.rows() == 2));

        assert_eq!(build_subgroups(&x, 1).unwrap(), vec![x.clone()]);
        assert!(build_subgroups(&x, 0).is_err());
        assert!(build_subgroups(&x, 4).is_err());
    }

    #[test]
    fn combinatorial_stacking() {
        let x = labelled(3, 5);
        let xc = build_combinatorial(&x, 2).unwrap();
        assert_eq!(xc.data().rows(), 4);
        let order: Vec<f64> = (0..4).map(|r| xc.data()[(r, 0)].re).collect();
        assert_eq!(order, vec![1.0, 2.0, 2.0, 3.0]);

        assert_eq!(build_combinatorial(&x, 1).unwrap().data(), &x);
        assert_eq!(build_combinatorial(&labelled(8, 3), 7).unwrap().data().rows(), 14);
    }

    #[test]
    fn covariance_small_cases() {
        let r = sample_covariance(&CMatrix::zeros(3, 4));
        assert_eq!(r.entries(), &CMatrix::zeros(3, 3));

        let ones = CMatrix::from_real_rows(&[[1.0; 6]]).unwrap();
        assert_eq!(sample_covariance(&ones).entries()[(0, 0)], c(1.0, 0.0));
    }

    #[test]
    fn covariance_matches_double_loop() {
        let y = CMatrix::from_rows(&[
            [c(0.3, -1.2), c(1.1, 0.4), c(-0.7, 0.9), c(2.0, 0.1)],
            [c(-1.5, 0.2), c(0.6, 0.6), c(0.0, -0.4), c(1.3, 1.7)],
            [c(0.8, 0.8), c(-0.2, 1.9), c(1.4, -0.3), c(-0.9, -1.1)],
        ])
        .unwrap();
        let r = sample_covariance(&y);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = c(0.0, 0.0);
                for n in 0..4 {
                    acc += y[(i, n)] * y[(j, n)].conj();
                }
                acc /= 4.0;
                assert!((r.entries()[(i, j)] - acc).norm() <= 1e-12 * acc.norm().max(1.0));
            }
        }
    }

    #[test]
    fn assembled_layout_entries() {
        // R with r_ij = 10 i + j (1-based) makes the layout readable.
        let rows: Vec<Vec<f64>> = (1..=3)
            .map(|i| (1..=3).map(|j| (10 * i + j) as f64).collect())
            .collect();
        let r = CovarianceMatrix {
            entries: CMatrix::from_real_rows(&rows).unwrap(),
            source: CovarianceSource::Plain,
            num_samples: 10,
        };
        let rp = assemble_covariance_from_blocks(&r, 2).unwrap();
        assert_eq!(rp.dimension(), 4);
        assert_eq!(rp.entries()[(0, 3)].re, 13.0);
        assert_eq!(rp.entries()[(1, 2)].re, 22.0);
        assert_eq!(assemble_covariance_from_blocks(&r, 1).unwrap().entries(), r.entries());
        assert!(assemble_covariance_from_blocks(&r, 3).is_err());
    }

    #[test]
    fn trace_of_assembled_p2() {
        let x = labelled(5, 7);
        let r = sample_covariance(&x);
        let rp = assemble_covariance_from_blocks(&r, 2).unwrap();
        let m_prime = 4;
        let expected: f64 = (0..2)
            .flat_map(|i| (i..i + m_prime).map(|m| r.entries()[(m, m)].re))
            .sum();
        assert!((trace(&rp) - expected).abs() <= 1e-12 * expected);
        assert_eq!(trace(&CovarianceMatrix {
            entries: CMatrix::identity(6),
            source: CovarianceSource::Plain,
            num_samples: 1,
        }), 6.0);
    }

    #[test]
    fn spectrum_of_identity_and_rank_one() {
        let id = CovarianceMatrix {
            entries: CMatrix::identity(5),
            source: CovarianceSource::Plain,
            num_samples: 100,
        };
        assert_eq!(eigvals_hermitian(&id).unwrap().values(), &[1.0; 5]);

        // v v^H with |v|^2 = 5.
        let v = [c(1.0, 0.0), c(0.0, 2.0), c(0.0, 0.0)];
        let r = sample_covariance(&CMatrix::from_rows(&[[v[0]], [v[1]], [v[2]]]).unwrap());
        let ev = eigvals_hermitian(&r).unwrap();
        assert!((ev.values()[0] - 5.0).abs() < 1e-12);
        assert!(ev.values()[1].abs() < 1e-12 && ev.values()[2].abs() < 1e-12);
        assert_eq!(ev.rank_bound(), 1);
    }

    #[test]
    fn multiplicities() {
        assert_eq!(overlap_multiplicities(8, 1).unwrap(), vec![1; 8]);
        assert_eq!(overlap_multiplicities(8, 2).unwrap(), vec![1, 2, 2, 2, 2, 2, 2, 1]);
        assert_eq!(
            overlap_multiplicities(8, 2).unwrap(),
            overlap_multiplicities(8, 7).unwrap()
        );
        assert_eq!(overlap_multiplicities(8, 4).unwrap(), vec![1, 2, 3, 4, 4, 3, 2, 1]);
    }

    #[test]
    fn rank_bound_of_overlapped_covariance() {
        let x = labelled(4, 10);
        let r = sample_covariance(&x);
        assert_eq!(r.rank_bound(), 4);
        let rp = assemble_covariance_from_blocks(&r, 2).unwrap();
        assert_eq!(rp.dimension(), 6);
        assert_eq!(rp.rank_bound(), 4);
        let starved = sample_covariance(&labelled(4, 2));
        assert_eq!(starved.rank_bound(), 2);
    }
}
