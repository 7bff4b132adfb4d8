//! Bivariate leave-one-out cross-validation over subdomain radius and
//! kernel shape.
//!
//! The full leave-one-out sweep collapses to one linear solve per candidate:
//! with coefficients `c` of the all-points interpolant and the diagonal of
//! the inverse Gram matrix, the residual of the fit that omits node `i`,
//! evaluated at node `i`, equals `c_i / (A⁻¹)_{ii}` (Rippa's identity). The
//! max norm of that vector scores one `(δ, ε)` candidate; scores over the
//! whole candidate grid form the error matrix from which the winning pair
//! is read off.

use crate::error::{Error, Result};
use crate::geometry::{Dataset, RadiusRange, SpatialIndex};
use crate::kernels::{distance_matrix, gram_from_distances, Kernel, KernelFamily};
use crate::linalg::factorize_spd;
use crate::util::linspace;

/// LOOCV scores over the `(radius, shape)` candidate grid of one subdomain.
///
/// `scores` is row-major `P×Q` (radius index major). Entries are `+∞` where
/// the candidate ball held fewer than two nodes or its Gram matrix failed
/// to factorize.
#[derive(Debug, Clone)]
pub struct ErrorMatrix {
    pub radii: Vec<f64>,
    pub shapes: Vec<f64>,
    pub scores: Vec<f64>,
}

impl ErrorMatrix {
    pub fn score(&self, p: usize, q: usize) -> f64 {
        self.scores[p * self.shapes.len() + q]
    }
}

/// The winning candidate of one subdomain search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectedParameters {
    pub delta: f64,
    pub epsilon: f64,
    pub score: f64,
    pub p_index: usize,
    pub q_index: usize,
}

/// Component-wise leave-one-out residuals `c_i / (A⁻¹)_{ii}`.
///
/// The result is signed; callers apply the max norm to magnitudes.
pub fn rippa_errors(coefficients: &[f64], inverse_diagonal: &[f64]) -> Vec<f64> {
    assert_eq!(
        coefficients.len(),
        inverse_diagonal.len(),
        "coefficient and inverse-diagonal lengths differ"
    );
    coefficients
        .iter()
        .zip(inverse_diagonal)
        .map(|(c, d)| c / d)
        .collect()
}

/// Max-norm LOOCV score of one candidate: `+∞` when the Gram matrix is
/// numerically singular, so the search routes around ill-conditioned
/// corners of the candidate grid.
pub fn loocv_score(points: &[f64], dim: usize, values: &[f64], kernel: Kernel) -> Result<f64> {
    let n = points.len() / dim;
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let distances = distance_matrix(points, dim)?;
    Ok(score_from_distances(&distances, values, kernel))
}

fn score_from_distances(
    distances: &crate::linalg::SquareMatrix,
    values: &[f64],
    kernel: Kernel,
) -> f64 {
    let gram = gram_from_distances(kernel, distances);
    let fact = match factorize_spd(&gram) {
        Ok(f) => f,
        Err(_) => return f64::INFINITY,
    };
    let coefficients = fact.solve(values);
    let errors = rippa_errors(&coefficients, &fact.inverse_diagonal());
    errors.iter().fold(0.0f64, |m, e| m.max(e.abs()))
}

/// Evaluates the LOOCV score of every `(radius, shape)` candidate for the
/// subdomain centered at `center`.
///
/// The distance matrix is shared across the shape sweep of each radius.
pub fn build_error_matrix(
    center: &[f64],
    dataset: &Dataset,
    index: &SpatialIndex<'_>,
    range: &RadiusRange,
    shapes: &[f64],
    family: KernelFamily,
) -> ErrorMatrix {
    assert!(!shapes.is_empty());
    let dim = dataset.dim();
    let q = shapes.len();
    let mut scores = vec![f64::INFINITY; range.candidates.len() * q];
    for (p, &radius) in range.candidates.iter().enumerate() {
        let members = index.range_query(center, radius);
        if members.len() < 2 {
            continue;
        }
        let mut points = Vec::with_capacity(members.len() * dim);
        let mut values = Vec::with_capacity(members.len());
        for &i in &members {
            points.extend_from_slice(dataset.node(i));
            values.push(dataset.value(i));
        }
        // members of a valid dataset are distinct
        let distances = distance_matrix(&points, dim).expect("distinct nodes");
        for (j, &shape) in shapes.iter().enumerate() {
            scores[p * q + j] =
                score_from_distances(&distances, &values, Kernel::new(family, shape));
        }
    }
    ErrorMatrix {
        radii: range.candidates.clone(),
        shapes: shapes.to_vec(),
        scores,
    }
}

/// Reads the minimizing `(δ, ε)` pair off the error matrix. Ties break
/// toward the smaller radius index, then the smaller shape index.
pub fn select_parameters(matrix: &ErrorMatrix) -> Result<SelectedParameters> {
    let q = matrix.shapes.len();
    let mut best: Option<(usize, usize, f64)> = None;
    for p in 0..matrix.radii.len() {
        for j in 0..q {
            let s = matrix.scores[p * q + j];
            if s.is_finite() && best.map_or(true, |(_, _, b)| s < b) {
                best = Some((p, j, s));
            }
        }
    }
    let (p, j, score) = best.ok_or(Error::UnfittableSubdomain {
        subdomain: usize::MAX,
    })?;
    Ok(SelectedParameters {
        delta: matrix.radii[p],
        epsilon: matrix.shapes[j],
        score,
        p_index: p,
        q_index: j,
    })
}

/// `count` logarithmically spaced shape parameters spanning `[lo, hi]`.
pub fn shape_grid(count: usize, lo: f64, hi: f64) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo, "shape range must satisfy 0 < lo < hi");
    if count == 1 {
        return vec![lo];
    }
    let mut grid: Vec<f64> = linspace(lo.ln(), hi.ln(), count)
        .into_iter()
        .map(f64::exp)
        .collect();
    grid[0] = lo;
    grid[count - 1] = hi;
    grid
}
