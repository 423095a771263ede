//! Dense LU factorisation with explicit sign bookkeeping, plus small
//! complex solves used by the Riemann–Hilbert style representations.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Zero matrix of size `n × n`.
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    /// Identity matrix of size `n × n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Build from a row-major vector.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "Matrix::from_row_major: wrong length");
        Self { n, data }
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Row-major storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Trace.
    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Matrix product.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// LU factorisation `PA = LU` with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    /// Factorise `a`; fails only on an exactly zero pivot column.
    pub fn factor(mut a: Matrix) -> Result<Self> {
        let n = a.n;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, maxv) = (k..n)
                .map(|i| (i, a[(i, k)].abs()))
                .fold((k, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
            if maxv == 0.0 || !maxv.is_finite() {
                return Err(Error::Singular { what: "lu_factor" });
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / pivot;
                a[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        let v = a[(k, j)];
                        a[(i, j)] -= f * v;
                    }
                }
            }
        }
        Ok(Self { lu: a, perm, swaps })
    }

    /// `(sign, ln|det|)` with the sign from the permutation parity and the
    /// signs of the diagonal of `U`.
    pub fn log_det(&self) -> (f64, f64) {
        let mut sign = if self.swaps % 2 == 0 { 1.0 } else { -1.0 };
        let mut log = 0.0;
        for i in 0..self.lu.n {
            let u = self.lu[(i, i)];
            if u < 0.0 {
                sign = -sign;
            }
            log += u.abs().ln();
        }
        (sign, log)
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }
}

/// Solve a small dense complex system `A x = b` (row-major `A`) by
/// Gaussian elimination with partial pivoting.
pub fn solve_complex(a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = b.len();
    assert_eq!(a.len(), n * n, "solve_complex: dimension mismatch");
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    let scale = m.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i * n + k].norm().total_cmp(&m[j * n + k].norm()))
            .unwrap_or(k);
        if m[p * n + k].norm() <= 1e-300_f64.max(scale * 1e-15) {
            return Err(Error::Singular { what: "solve_complex" });
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        for i in k + 1..n {
            let f = m[i * n + k] / m[k * n + k];
            for j in k..n {
                let v = m[k * n + j];
                m[i * n + j] -= f * v;
            }
            let v = x[k];
            x[i] -= f * v;
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in i + 1..n {
            s -= m[i * n + j] * x[j];
        }
        x[i] = s / m[i * n + i];
    }
    Ok(x)
}

/// 2×2 complex matrix helpers (row-major `[[a, b], [c, d]]`).
pub type Mat2 = [[Complex64; 2]; 2];

/// Product of two 2×2 complex matrices.
pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Inverse of a 2×2 complex matrix.
pub fn mat2_inv(a: &Mat2) -> Mat2 {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]]
}

/// Determinant of a 2×2 complex matrix.
pub fn mat2_det(a: &Mat2) -> Complex64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Entrywise maximum modulus of `a − b`.
pub fn mat2_max_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_det_tracks_sign() {
        let a = Matrix::from_row_major(2, vec![0.0, 2.0, 3.0, 0.0]);
        let (s, l) = Lu::factor(a).unwrap().log_det();
        assert_eq!(s, -1.0);
        assert!((l - 6f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn solve_recovers_solution() {
        let a = Matrix::from_row_major(3, vec![4.0, 1.0, 0.5, 1.0, 3.0, -1.0, 0.2, -0.4, 2.0]);
        let x = [1.0, -2.0, 0.5];
        let b: Vec<f64> = (0..3).map(|i| (0..3).map(|j| a[(i, j)] * x[j]).sum()).collect();
        let got = Lu::factor(a).unwrap().solve(&b);
        for (g, e) in got.iter().zip(x) {
            assert!((g - e).abs() < 1e-14);
        }
    }

    #[test]
    fn complex_solve_round_trip() {
        let c = |re, im| Complex64::new(re, im);
        let a = vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 0.5)];
        let x = vec![c(0.3, -0.2), c(-1.0, 2.0)];
        let b = vec![a[0] * x[0] + a[1] * x[1], a[2] * x[0] + a[3] * x[1]];
        let got = solve_complex(&a, &b).unwrap();
        assert!((got[0] - x[0]).norm() < 1e-14 && (got[1] - x[1]).norm() < 1e-14);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = Matrix::from_row_major(2, vec![1.0, 2.0, 0.0, 0.0]);
        assert!(Lu::factor(a).is_err());
    }
}
