//! Dense vector and matrix helpers sized for desk-scale problems.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `a + t * b`
pub fn axpy(a: &[f64], t: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * y).collect()
}

/// `(1 - t) * a + t * b`
pub fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (1.0 - t) * x + t * y).collect()
}

pub fn scale(a: &[f64], t: f64) -> Vec<f64> {
    a.iter().map(|x| t * x).collect()
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let nrows = rows.len();
        if nrows == 0 {
            return Err(Error::invalid("matrix must have at least one row"));
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(Error::invalid("matrix must have at least one column"));
        }
        let mut data = Vec::with_capacity(nrows * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("matrix entries must be finite"));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Matrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.row_iter().map(<[f64]>::to_vec).collect()
    }

    /// `A x`
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        self.row_iter().map(|r| dot(r, x)).collect()
    }

    /// `Aᵀ y`
    pub fn tmul_vec(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (r, &w) in self.row_iter().zip(y) {
            if w != 0.0 {
                for (o, a) in out.iter_mut().zip(r) {
                    *o += w * a;
                }
            }
        }
        out
    }

    /// `AᵀA` as a dense `cols × cols` matrix.
    pub fn gram(&self) -> Matrix {
        let n = self.cols;
        let mut data = vec![0.0; n * n];
        for r in self.row_iter() {
            for i in 0..n {
                for j in 0..n {
                    data[i * n + j] += r[i] * r[j];
                }
            }
        }
        Matrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn max_row_norm(&self) -> f64 {
        self.row_iter().map(norm).fold(0.0, f64::max)
    }

    /// Largest singular value by power iteration on `AᵀA`, stopped once the
    /// Rayleigh quotient changes by less than `rel_tol` relative.
    pub fn spectral_norm(&self, rel_tol: f64) -> f64 {
        let n = self.cols;
        // Deterministic start with all components nonzero.
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * i as f64).collect();
        let nv = norm(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        let mut prev = 0.0;
        for _ in 0..100_000 {
            let w = self.tmul_vec(&self.mul_vec(&v));
            let lambda = dot(&v, &w);
            let nw = norm(&w);
            if nw == 0.0 {
                return 0.0;
            }
            v = w.into_iter().map(|x| x / nw).collect();
            if (lambda - prev).abs() <= rel_tol * lambda.abs() {
                return lambda.max(0.0).sqrt();
            }
            prev = lambda;
        }
        prev.max(0.0).sqrt()
    }

    /// Solves `self · x = rhs` for square symmetric positive definite `self`
    /// by Cholesky factorisation.
    pub fn solve_spd(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.rows;
        if self.cols != n || rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rhs.len(),
            });
        }
        let mut l = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.data[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if s <= 0.0 {
                        return Err(Error::invalid("matrix is not positive definite"));
                    }
                    l[i * n + i] = s.sqrt();
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        let mut y = vec![0.0; n];
        for i in 0..n {
            let s: f64 = (0..i).map(|k| l[i * n + k] * y[k]).sum();
            y[i] = (rhs[i] - s) / l[i * n + i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| l[k * n + i] * x[k]).sum();
            x[i] = (y[i] - s) / l[i * n + i];
        }
        Ok(x)
    }

    /// Smallest eigenvalue of a symmetric matrix, via power iteration on the
    /// shifted matrix `σI − A` with `σ` an upper bound on the spectrum.
    pub fn min_eigenvalue_sym(&self, rel_tol: f64) -> f64 {
        let n = self.rows;
        let shift = (0..n)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * i as f64).collect();
        let nv = norm(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        let mut prev = f64::NAN;
        let mut lambda = 0.0;
        for _ in 0..200_000 {
            let av = self.mul_vec(&v);
            let w: Vec<f64> = v.iter().zip(&av).map(|(a, b)| shift * a - b).collect();
            lambda = dot(&v, &w);
            let nw = norm(&w);
            if nw == 0.0 {
                break;
            }
            v = w.into_iter().map(|x| x / nw).collect();
            if (lambda - prev).abs() <= rel_tol * shift.max(1.0) {
                break;
            }
            prev = lambda;
        }
        shift - lambda
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.to_rows()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn spectral_norm_of_diagonal() {
        let m = Matrix::from_rows(vec![vec![3.0, 0.0], vec![0.0, -5.0]]).unwrap();
        assert_relative_eq!(m.spectral_norm(1e-12), 5.0, max_relative = 1e-9);
    }

    #[test]
    fn spectral_norm_of_rank_one() {
        // u vᵀ has norm ‖u‖‖v‖
        let m = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]).unwrap();
        let expected = (14.0f64).sqrt() * (5.0f64).sqrt();
        assert_relative_eq!(m.spectral_norm(1e-12), expected, max_relative = 1e-9);
    }

    #[test]
    fn cholesky_solve() {
        let a = Matrix::from_rows(vec![vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let x = a.solve_spd(&[1.0, 2.0]).unwrap();
        assert_relative_eq!(x[0], 1.0 / 11.0, epsilon = 1e-14);
        assert_relative_eq!(x[1], 7.0 / 11.0, epsilon = 1e-14);
    }

    #[test]
    fn min_eigenvalue() {
        let a = Matrix::from_rows(vec![vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert_relative_eq!(a.min_eigenvalue_sym(1e-14), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(matches!(
            Matrix::from_rows(vec![vec![1.0, 2.0], vec![1.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
