//! Radial basis functions and Gram-matrix assembly.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::util::dist;

/// Supported radial basis function families. Both are strictly positive
/// definite, so local systems need no polynomial augmentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelFamily {
    /// `φ(r) = e^{−εr}(1 + εr)`
    #[serde(rename = "matern2")]
    MaternC2,
    /// `φ(r) = (1 + (εr)²)^{−1/2}`
    #[serde(rename = "imq")]
    Imq,
}

impl KernelFamily {
    pub fn eval(self, shape: f64, r: f64) -> f64 {
        debug_assert!(shape > 0.0);
        assert!(r >= 0.0, "kernel argument must be non-negative");
        let s = shape * r;
        match self {
            KernelFamily::MaternC2 => (-s).exp() * (1.0 + s),
            KernelFamily::Imq => 1.0 / (1.0 + s * s).sqrt(),
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelFamily::MaternC2 => write!(f, "matern2"),
            KernelFamily::Imq => write!(f, "imq"),
        }
    }
}

impl FromStr for KernelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matern2" | "matern_c2" | "maternc2" => Ok(KernelFamily::MaternC2),
            "imq" => Ok(KernelFamily::Imq),
            other => Err(Error::InvalidConfig(format!(
                "unknown kernel '{other}' (expected 'matern2' or 'imq')"
            ))),
        }
    }
}

/// A kernel family paired with a strictly positive shape parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    pub family: KernelFamily,
    pub shape: f64,
}

impl Kernel {
    pub fn new(family: KernelFamily, shape: f64) -> Self {
        assert!(shape > 0.0, "shape parameter must be strictly positive");
        Kernel { family, shape }
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        self.family.eval(self.shape, r)
    }
}

/// Pairwise distance matrix of a flat point buffer.
///
/// Errors with [`Error::DuplicateNodes`] when two points coincide, since the
/// resulting Gram matrix would be singular.
pub fn distance_matrix(points: &[f64], dim: usize) -> Result<SquareMatrix> {
    assert!(dim >= 1 && points.len() % dim == 0);
    let n = points.len() / dim;
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        for k in (i + 1)..n {
            let r = dist(&points[i * dim..(i + 1) * dim], &points[k * dim..(k + 1) * dim]);
            if r == 0.0 {
                return Err(Error::DuplicateNodes {
                    first: i,
                    second: k,
                });
            }
            m.set(i, k, r);
            m.set(k, i, r);
        }
    }
    Ok(m)
}

/// Applies the kernel entrywise to a distance matrix. The diagonal is set to
/// exactly one and the result is bitwise symmetric.
pub fn gram_from_distances(kernel: Kernel, distances: &SquareMatrix) -> SquareMatrix {
    let n = distances.n();
    let mut a = SquareMatrix::zeros(n);
    for i in 0..n {
        a.set(i, i, 1.0);
        for k in (i + 1)..n {
            let v = kernel.eval(distances.get(i, k));
            a.set(i, k, v);
            a.set(k, i, v);
        }
    }
    a
}

/// Local interpolation matrix `A_ik = φ_ε(‖x_i − x_k‖₂)`.
pub fn gram_matrix(kernel: Kernel, points: &[f64], dim: usize) -> Result<SquareMatrix> {
    Ok(gram_from_distances(kernel, &distance_matrix(points, dim)?))
}
