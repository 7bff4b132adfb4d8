//! Density-adaptive radius search ranges for the subdomain parameter search.

use crate::error::{Error, Result};
use crate::geometry::{PUCover, SpatialIndex};
use crate::util::linspace;

/// Growth factor of the geometric search for the smallest admissible radius.
const RADIUS_GROWTH: f64 = 1.2;

/// Candidate radii for one subdomain: `candidates[0] = delta_min`,
/// `candidates[P-1] = h * delta_min`, linearly spaced.
#[derive(Debug, Clone)]
pub struct RadiusRange {
    pub delta_min: f64,
    pub delta_max: f64,
    pub h: f64,
    pub candidates: Vec<f64>,
}

/// Volume of the `dim`-dimensional unit ball (recurrence, no gamma needed).
fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(dim - 2) * 2.0 * std::f64::consts::PI / dim as f64,
    }
}

/// Hypervolume of the ball of the given radius in `dim` dimensions.
pub fn ball_volume(radius: f64, dim: usize) -> f64 {
    assert!(radius >= 0.0, "radius must be non-negative");
    unit_ball_volume(dim) * radius.powi(dim as i32)
}

/// Minimum node count demanded of every subdomain: the uniform-density
/// expected count of the baseline ball, floored at `n_min` and capped at the
/// dataset size.
pub fn required_count(n_points: usize, cover: &PUCover, n_min: usize) -> usize {
    let expected = (n_points as f64 * ball_volume(cover.baseline_radius(), cover.dim())).ceil();
    (expected as usize).max(n_min).min(n_points)
}

/// Builds the search range for one subdomain center.
///
/// Starting from the coverage floor, the radius grows geometrically until
/// enough nodes fall inside; the candidates then span `[δ_min, h·δ_min]`.
pub fn radius_range(
    center: &[f64],
    index: &SpatialIndex<'_>,
    cover: &PUCover,
    h: f64,
    p: usize,
    n_min: usize,
) -> Result<RadiusRange> {
    assert!(h > 1.0, "h must exceed 1");
    assert!(p >= 2, "at least two radius candidates required");
    let dim = cover.dim();
    let required = required_count(index.len(), cover, n_min);
    let floor = cover.baseline_radius().max(cover.coverage_radius());
    let diameter = (dim as f64).sqrt();

    let mut delta = floor;
    let delta_min = loop {
        if index.range_count(center, delta) >= required {
            break delta;
        }
        delta *= RADIUS_GROWTH;
        if delta > diameter * (1.0 + 1e-12) {
            return Err(Error::DegenerateCover {
                subdomain: usize::MAX,
                required,
            });
        }
    };

    Ok(RadiusRange {
        delta_min,
        delta_max: h * delta_min,
        h,
        candidates: linspace(delta_min, h * delta_min, p),
    })
}
