//! Dense symmetric positive definite factorization for the small local
//! interpolation systems.

use crate::error::{Error, Result};

/// Pivots at or below this value abort the factorization; the caller treats
/// the candidate as numerically singular instead of regularizing it.
pub const PIVOT_TOL: f64 = 1e-14;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut m = SquareMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has wrong length");
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }
}

/// Lower-triangular Cholesky factor `L` with `A = L·Lᵀ`.
#[derive(Debug, Clone)]
pub struct SpdFactorization {
    n: usize,
    l: Vec<f64>, // row-major, upper part unused
}

/// Cholesky factorization; fails with [`Error::NotSpd`] when a pivot is at
/// or below [`PIVOT_TOL`].
pub fn factorize_spd(a: &SquareMatrix) -> Result<SpdFactorization> {
    let n = a.n();
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut pivot = a.get(j, j);
        for k in 0..j {
            pivot -= l[j * n + k] * l[j * n + k];
        }
        if pivot <= PIVOT_TOL {
            return Err(Error::NotSpd { index: j, pivot });
        }
        let diag = pivot.sqrt();
        l[j * n + j] = diag;
        for i in (j + 1)..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / diag;
        }
    }
    Ok(SpdFactorization { n, l })
}

impl SpdFactorization {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self, i: usize, j: usize) -> f64 {
        assert!(j <= i, "upper triangle of L is zero");
        self.l[i * self.n + j]
    }

    /// Solves `A·x = rhs` via the two triangular solves.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(rhs.len(), n, "right-hand side length mismatch");
        let l = &self.l;
        // L y = rhs
        let mut x = vec![0.0; n];
        for i in 0..n {
            let mut s = rhs[i];
            for k in 0..i {
                s -= l[i * n + k] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
        // Lᵀ x = y
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s -= l[k * n + i] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
        x
    }

    /// Diagonal of `A⁻¹`: squared column norms of `L⁻¹`.
    pub fn inverse_diagonal(&self) -> Vec<f64> {
        let n = self.n;
        let l = &self.l;
        let mut out = vec![0.0; n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            // forward substitution for column j of L⁻¹
            col[j] = 1.0 / l[j * n + j];
            for i in (j + 1)..n {
                let mut s = 0.0;
                for k in j..i {
                    s += l[i * n + k] * col[k];
                }
                col[i] = -s / l[i * n + i];
            }
            out[j] = col[j..n].iter().map(|v| v * v).sum();
        }
        out
    }
}
