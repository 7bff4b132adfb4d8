//! Partition-of-unity assembly: local RBF interpolants blended by
//! compactly supported Shepard weights.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{radius_range, Dataset, PUCover, SpatialIndex};
use crate::kernels::{gram_matrix, Kernel, KernelFamily};
use crate::linalg::factorize_spd;
use crate::selection::{build_error_matrix, select_parameters};
use crate::util::dist;

/// Wendland C2 bump `ψ(r/δ) = (1 − r/δ)₊⁴ (4r/δ + 1)`: value 1 at the
/// center, identically zero from radius `δ` outward.
pub fn wendland_weight(r: f64, delta: f64) -> f64 {
    debug_assert!(delta > 0.0);
    let t = r / delta;
    if t >= 1.0 {
        return 0.0;
    }
    let u = 1.0 - t;
    let u2 = u * u;
    u2 * u2 * (4.0 * t + 1.0)
}

/// Shepard normalization of the active subdomain bumps at `x`.
///
/// Errors with [`Error::UncoveredPoint`] when every bump vanishes; callers
/// fall back to the nearest subdomain.
pub fn shepard_weights(x: &[f64], active: &[(&[f64], f64)]) -> Result<Vec<f64>> {
    let psi: Vec<f64> = active
        .iter()
        .map(|(center, radius)| wendland_weight(dist(x, center), *radius))
        .collect();
    let total: f64 = psi.iter().sum();
    if total <= 0.0 {
        return Err(Error::UncoveredPoint);
    }
    Ok(psi.into_iter().map(|p| p / total).collect())
}

/// How the subdomain parameters were chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMode {
    /// Per-subdomain `(δ_j, ε_j)` from the bivariate LOOCV search.
    Variable,
    /// One radius and one shape shared by every subdomain.
    Fixed,
}

impl std::fmt::Display for FitMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FitMode::Variable => write!(f, "variable"),
            FitMode::Fixed => write!(f, "fixed"),
        }
    }
}

impl std::str::FromStr for FitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "variable" => Ok(FitMode::Variable),
            "fixed" => Ok(FitMode::Fixed),
            other => Err(Error::InvalidConfig(format!(
                "unknown mode '{other}' (expected 'variable' or 'fixed')"
            ))),
        }
    }
}

/// Partition-of-unity weight construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightScheme {
    /// Wendland C2 bumps scaled to each subdomain radius, Shepard-normalized.
    WendlandC2Shepard,
}

/// Knobs of the per-subdomain parameter search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    /// Upper end of the radius range as a multiple of the lower end.
    pub h: f64,
    /// Number of radius candidates (P).
    pub radius_count: usize,
    /// Minimum nodes demanded of every subdomain.
    pub n_min: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            h: 2.0,
            radius_count: 6,
            n_min: 3,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 1.0) {
            return Err(Error::InvalidConfig(format!("h must exceed 1, got {}", self.h)));
        }
        if self.radius_count < 2 {
            return Err(Error::InvalidConfig(
                "at least two radius candidates required".into(),
            ));
        }
        if self.n_min < 1 {
            return Err(Error::InvalidConfig("n_min must be at least 1".into()));
        }
        Ok(())
    }
}

/// One subdomain: its ball, kernel, member nodes and solved coefficients.
#[derive(Debug, Clone)]
pub struct LocalInterpolant {
    pub center: Vec<f64>,
    pub radius: f64,
    pub kernel: Kernel,
    /// Indices into the training dataset, ascending.
    pub members: Vec<usize>,
    /// Member coordinates, flat.
    pub coords: Vec<f64>,
    pub coefficients: Vec<f64>,
}

impl LocalInterpolant {
    /// `R_j(x) = Σ_k c_k φ(‖x − x_k‖)`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let dim = self.center.len();
        let mut acc = 0.0;
        for (k, c) in self.coefficients.iter().enumerate() {
            acc += c * self.kernel.eval(dist(x, &self.coords[k * dim..(k + 1) * dim]));
        }
        acc
    }
}

/// Record of how a model was produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub mode: FitMode,
    pub shape_grid: Vec<f64>,
    pub search: SearchParams,
    pub fixed_shape: Option<f64>,
    pub warnings: Vec<String>,
}

/// A fitted partition-of-unity interpolant over the unit hypercube.
#[derive(Debug, Clone)]
pub struct PUModel {
    pub dim: usize,
    pub family: KernelFamily,
    pub weight_scheme: WeightScheme,
    pub cover: PUCover,
    pub subdomains: Vec<LocalInterpolant>,
    /// Training node coordinates (unit domain), flat.
    pub nodes: Vec<f64>,
    pub provenance: Provenance,
    max_radius: f64,
}

/// Solves the local interpolation system for one subdomain.
pub fn fit_local(
    dataset: &Dataset,
    members: &[usize],
    kernel: Kernel,
    center: &[f64],
    radius: f64,
) -> Result<LocalInterpolant> {
    if members.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let dim = dataset.dim();
    let mut coords = Vec::with_capacity(members.len() * dim);
    let mut values = Vec::with_capacity(members.len());
    for &i in members {
        coords.extend_from_slice(dataset.node(i));
        values.push(dataset.value(i));
    }
    let gram = gram_matrix(kernel, &coords, dim)?;
    let coefficients = factorize_spd(&gram)?.solve(&values);
    Ok(LocalInterpolant {
        center: center.to_vec(),
        radius,
        kernel,
        members: members.to_vec(),
        coords,
        coefficients,
    })
}

fn assemble(
    dataset: &Dataset,
    family: KernelFamily,
    cover: PUCover,
    subdomains: Vec<LocalInterpolant>,
    provenance: Provenance,
) -> PUModel {
    let max_radius = subdomains.iter().map(|s| s.radius).fold(0.0, f64::max);
    PUModel {
        dim: dataset.dim(),
        family,
        weight_scheme: WeightScheme::WendlandC2Shepard,
        cover,
        subdomains,
        nodes: dataset.coords().to_vec(),
        provenance,
        max_radius,
    }
}

/// Fits the variable-parameter interpolant: for every subdomain the radius
/// and shape are chosen by the bivariate LOOCV search, then the local
/// system is re-gathered and solved fresh with the winning pair.
pub fn fit_pu_variable(
    dataset: &Dataset,
    family: KernelFamily,
    shapes: &[f64],
    params: &SearchParams,
) -> Result<PUModel> {
    params.validate()?;
    if shapes.is_empty() {
        return Err(Error::InvalidConfig("empty shape grid".into()));
    }
    dataset.check_unit_domain()?;
    let cover = PUCover::generate(dataset.len(), dataset.dim());
    let index = SpatialIndex::new(dataset);

    let results: Vec<Result<LocalInterpolant>> = (0..cover.len())
        .into_par_iter()
        .map(|j| {
            let center = cover.center(j);
            let range = radius_range(
                center,
                &index,
                &cover,
                params.h,
                params.radius_count,
                params.n_min,
            )
            .map_err(|e| match e {
                Error::DegenerateCover { required, .. } => Error::DegenerateCover {
                    subdomain: j,
                    required,
                },
                other => other,
            })?;
            let matrix = build_error_matrix(center, dataset, &index, &range, shapes, family);
            let selected = select_parameters(&matrix)
                .map_err(|_| Error::UnfittableSubdomain { subdomain: j })?;
            let members = index.range_query(center, selected.delta);
            fit_local(
                dataset,
                &members,
                Kernel::new(family, selected.epsilon),
                center,
                selected.delta,
            )
        })
        .collect();

    let mut subdomains = Vec::with_capacity(results.len());
    for r in results {
        subdomains.push(r?);
    }

    let provenance = Provenance {
        mode: FitMode::Variable,
        shape_grid: shapes.to_vec(),
        search: *params,
        fixed_shape: None,
        warnings: Vec::new(),
    };
    Ok(assemble(dataset, family, cover, subdomains, provenance))
}

/// Fits the fixed-parameter baseline: every subdomain uses the cover's
/// baseline radius (scaled up if needed to keep the cube covered) and the
/// single given shape.
pub fn fit_pu_fixed(dataset: &Dataset, family: KernelFamily, shape: f64) -> Result<PUModel> {
    if !(shape > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "shape parameter must be positive, got {shape}"
        )));
    }
    dataset.check_unit_domain()?;
    let cover = PUCover::generate(dataset.len(), dataset.dim());
    let index = SpatialIndex::new(dataset);
    let n_min = SearchParams::default().n_min;

    // coverage guard only activates above four dimensions
    let kappa = (cover.coverage_radius() / cover.baseline_radius()).max(1.0);
    let delta = cover.baseline_radius() * kappa;
    let kernel = Kernel::new(family, shape);

    let results: Vec<Result<(LocalInterpolant, Option<String>)>> = (0..cover.len())
        .into_par_iter()
        .map(|j| {
            let center = cover.center(j);
            let mut members = index.range_query(center, delta);
            let mut warning = None;
            if members.is_empty() {
                members = index.nearest_k(center, n_min.min(dataset.len()));
                warning = Some(format!(
                    "subdomain {j} is empty at radius {delta:.6}; fitted with its {} nearest nodes",
                    members.len()
                ));
            }
            fit_local(dataset, &members, kernel, center, delta).map(|s| (s, warning))
        })
        .collect();

    let mut subdomains = Vec::with_capacity(results.len());
    let mut warnings = Vec::new();
    for r in results {
        let (sub, warning) = r?;
        if let Some(w) = warning {
            log::warn!("{w}");
            warnings.push(w);
        }
        subdomains.push(sub);
    }

    let provenance = Provenance {
        mode: FitMode::Fixed,
        shape_grid: vec![shape],
        search: SearchParams::default(),
        fixed_shape: Some(shape),
        warnings,
    };
    Ok(assemble(dataset, family, cover, subdomains, provenance))
}

impl PUModel {
    /// Subdomains whose Wendland bump is positive at `x`, with the
    /// unnormalized bump values.
    fn active_bumps(&self, x: &[f64]) -> Vec<(usize, f64)> {
        let mut active = Vec::new();
        self.cover.visit_centers_near(x, self.max_radius, |j| {
            let sub = &self.subdomains[j];
            let psi = wendland_weight(dist(x, &sub.center), sub.radius);
            if psi > 0.0 {
                active.push((j, psi));
            }
        });
        active
    }

    /// Active subdomain indices with their Shepard weights at `x`; empty
    /// only if `x` is uncovered.
    pub fn active_weights(&self, x: &[f64]) -> Vec<(usize, f64)> {
        let mut active = self.active_bumps(x);
        let total: f64 = active.iter().map(|(_, p)| p).sum();
        if total > 0.0 {
            for (_, p) in &mut active {
                *p /= total;
            }
        }
        active
    }

    fn eval_unchecked(&self, x: &[f64]) -> f64 {
        let active = self.active_bumps(x);
        let total: f64 = active.iter().map(|(_, p)| p).sum();
        if total <= 0.0 {
            // unreachable while radii respect the coverage floor
            let nearest = (0..self.subdomains.len())
                .min_by(|&a, &b| {
                    dist(x, &self.subdomains[a].center)
                        .partial_cmp(&dist(x, &self.subdomains[b].center))
                        .unwrap()
                })
                .expect("model has at least one subdomain");
            log::warn!("point {x:?} uncovered; using nearest subdomain {nearest}");
            return self.subdomains[nearest].eval(x);
        }
        let mut acc = 0.0;
        for (j, psi) in active {
            acc += psi * self.subdomains[j].eval(x);
        }
        acc / total
    }

    /// Evaluates the interpolant at one point of the unit hypercube.
    pub fn evaluate_one(&self, x: &[f64]) -> Result<f64> {
        assert_eq!(x.len(), self.dim);
        if x.iter().any(|&c| !(0.0..=1.0).contains(&c)) {
            return Err(Error::OutOfDomain { index: 0 });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluates the interpolant at a flat buffer of points.
    pub fn evaluate(&self, points: &[f64]) -> Result<Vec<f64>> {
        assert_eq!(points.len() % self.dim, 0);
        for (i, p) in points.chunks(self.dim).enumerate() {
            if p.iter().any(|&c| !(0.0..=1.0).contains(&c)) {
                return Err(Error::OutOfDomain { index: i });
            }
        }
        Ok(points
            .par_chunks(self.dim)
            .map(|p| self.eval_unchecked(p))
            .collect())
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len() / self.dim
    }

    pub(crate) fn from_parts(
        dim: usize,
        family: KernelFamily,
        weight_scheme: WeightScheme,
        cover: PUCover,
        subdomains: Vec<LocalInterpolant>,
        nodes: Vec<f64>,
        provenance: Provenance,
    ) -> Self {
        let max_radius = subdomains.iter().map(|s| s.radius).fold(0.0, f64::max);
        PUModel {
            dim,
            family,
            weight_scheme,
            cover,
            subdomains,
            nodes,
            provenance,
            max_radius,
        }
    }
}
