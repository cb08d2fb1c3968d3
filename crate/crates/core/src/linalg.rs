//! Dense complex matrices and a Hermitian eigensolver sized for sensor arrays.
//!
//! Matrices here are small (tens of rows), so everything is a plain row-major
//! `Vec<Complex64>` and the eigensolver is a cyclic complex Jacobi sweep, which
//! is accurate to a few ulps relative to the spectral norm.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Result, SenseError};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(SenseError::Dimension(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(SenseError::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| Complex64::new(v, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Sum of the real parts of the diagonal.
    pub fn trace_re(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].re).sum()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a Hermitian matrix, sorted descending.
///
/// Only the upper triangle and the real part of the diagonal are read; the
/// caller is responsible for Hermitian symmetry.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    if a.rows() != a.cols() {
        return Err(SenseError::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(SenseError::NonFinite("matrix passed to eigensolver".into()));
    }
    let n = a.rows();

    // Work on a full Hermitian copy rebuilt from the upper triangle.
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            m[(j, i)] = a[(i, j)].conj();
        }
    }

    let total: f64 = m.frobenius_norm();
    if total == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let floor = f64::EPSILON * f64::EPSILON * total;

    for _ in 0..MAX_SWEEPS {
        let mut rotations = 0usize;
        for p in 0..n {
            for q in (p + 1)..n {
                let g = m[(p, q)].norm();
                let diag = 0.5 * (m[(p, p)].re.abs() + m[(q, q)].re.abs());
                if g > f64::EPSILON * diag && g > floor {
                    rotate(&mut m, p, q);
                    rotations += 1;
                }
            }
        }
        if rotations == 0 {
            break;
        }
    }

    let mut values: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

/// One complex Jacobi rotation annihilating the (p, q) entry.
///
/// With a_pq = |a_pq| e^{i phi}, the rotation J has J_pp = c, J_pq = s e^{i phi},
/// J_qp = -s e^{-i phi}, J_qq = c, and A <- J^H A J.
fn rotate(m: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    if t == 0.0 {
        return;
    }
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    let phase = apq / g;
    let jpq = phase * s;
    let jqp = -phase.conj() * s;
    let n = m.rows();

    // Columns: A <- A J.
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * c + akq * jqp;
        m[(k, q)] = akp * jpq + akq * c;
    }
    // Rows: A <- J^H A.
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = apk * c + aqk * jqp.conj();
        m[(q, k)] = apk * jpq.conj() + aqk * c;
    }
    m[(p, p)] = Complex64::new(app - t * g, 0.0);
    m[(q, q)] = Complex64::new(aqq + t * g, 0.0);
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix_is_sorted() {
        let a = CMatrix::from_real_rows(&[[1.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, 2.0]])
            .unwrap();
        assert_eq!(hermitian_eigenvalues(&a).unwrap(), vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn two_by_two_complex() {
        // [[2, i], [-i, 2]] has eigenvalues 3 and 1.
        let a = CMatrix::from_rows(&[[c(2.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(2.0, 0.0)]])
            .unwrap();
        let ev = hermitian_eigenvalues(&a).unwrap();
        assert!((ev[0] - 3.0).abs() < 1e-14);
        assert!((ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        assert!(hermitian_eigenvalues(&CMatrix::zeros(2, 3)).is_err());
        let mut a = CMatrix::identity(2);
        a[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(
            hermitian_eigenvalues(&a),
            Err(SenseError::NonFinite(_))
        ));
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(hermitian_eigenvalues(&CMatrix::zeros(3, 3)).unwrap(), vec![0.0; 3]);
    }
}
