//! Partition-of-unity cover: subdomain centers on a uniform grid.

use crate::util::for_each_multi_index;

/// Subdomain centers laid out at the cell midpoints of a uniform grid over
/// the unit hypercube.
///
/// The per-axis count is sized so a baseline-radius ball holds a small local
/// system on average; `baseline_radius` equals the grid spacing `1/d^{1/M}`.
#[derive(Debug, Clone)]
pub struct PUCover {
    dim: usize,
    cells_per_axis: usize,
    spacing: f64,
    baseline_radius: f64,
    centers: Vec<f64>,
}

impl PUCover {
    /// Cover sized for a dataset of `n_points` nodes in `dim` dimensions:
    /// `⌈(N/4)^{1/M}⌉` centers per axis.
    pub fn generate(n_points: usize, dim: usize) -> Self {
        assert!(n_points >= 1 && dim >= 1);
        let raw = (n_points as f64 / 4.0).powf(1.0 / dim as f64);
        let cells_per_axis = ((raw - 1e-12).ceil() as usize).max(1);
        Self::with_cells_per_axis(dim, cells_per_axis)
    }

    /// Cover with an explicit per-axis center count.
    pub fn with_cells_per_axis(dim: usize, cells_per_axis: usize) -> Self {
        assert!(dim >= 1 && cells_per_axis >= 1);
        let spacing = 1.0 / cells_per_axis as f64;
        let d = cells_per_axis.pow(dim as u32);
        let mut centers = Vec::with_capacity(d * dim);
        for_each_multi_index(&vec![0; dim], &vec![cells_per_axis - 1; dim], |ix| {
            for &i in ix {
                centers.push((i as f64 + 0.5) * spacing);
            }
        });
        PUCover {
            dim,
            cells_per_axis,
            spacing,
            baseline_radius: spacing,
            centers,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of subdomains `d = n_c^M`.
    pub fn len(&self) -> usize {
        self.centers.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells_per_axis
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Fixed-configuration subdomain radius `1/d^{1/M}`.
    pub fn baseline_radius(&self) -> f64 {
        self.baseline_radius
    }

    pub fn center(&self, j: usize) -> &[f64] {
        &self.centers[j * self.dim..(j + 1) * self.dim]
    }

    /// Every point of the unit cube lies within this distance of a center.
    pub fn coverage_radius(&self) -> f64 {
        self.spacing * (self.dim as f64).sqrt() / 2.0
    }

    /// Visits the indices of all centers within `radius` of `x` per axis
    /// (a superset window; callers apply the exact distance test).
    pub fn visit_centers_near(&self, x: &[f64], radius: f64, mut f: impl FnMut(usize)) {
        debug_assert_eq!(x.len(), self.dim);
        let nc = self.cells_per_axis as isize;
        let mut lo = vec![0usize; self.dim];
        let mut hi = vec![0usize; self.dim];
        for k in 0..self.dim {
            // center_i = (i + 0.5) * spacing; widen one cell for float slop
            let a = ((x[k] - radius) / self.spacing - 0.5).floor() as isize - 1;
            let b = ((x[k] + radius) / self.spacing - 0.5).ceil() as isize + 1;
            if b < 0 || a >= nc {
                return;
            }
            lo[k] = a.max(0) as usize;
            hi[k] = b.min(nc - 1) as usize;
        }
        for_each_multi_index(&lo, &hi, |ix| {
            let mut flat = 0;
            for &i in ix {
                flat = flat * self.cells_per_axis + i;
            }
            f(flat);
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::dist;

    #[test]
    fn sizes_for_289_points() {
        let cover = PUCover::generate(289, 2);
        assert_eq!(cover.cells_per_axis(), 9);
        assert_eq!(cover.len(), 81);
        assert_eq!(cover.spacing(), 1.0 / 9.0);
        assert_eq!(cover.baseline_radius(), 1.0 / 9.0);
    }

    #[test]
    fn four_points_single_cell() {
        let cover = PUCover::generate(4, 2);
        assert_eq!(cover.len(), 1);
        assert_eq!(cover.baseline_radius(), 1.0);
        assert_eq!(cover.center(0), &[0.5, 0.5]);
    }

    #[test]
    fn sizes_for_1089_points() {
        let cover = PUCover::generate(1089, 2);
        assert_eq!(cover.cells_per_axis(), 17);
        assert_eq!(cover.len(), 289);
        assert_eq!(cover.baseline_radius(), 1.0 / 17.0);
    }

    #[test]
    fn coverage_over_random_points() {
        use rand::{Rng, SeedableRng};
        let cover = PUCover::generate(289, 2);
        let bound = cover.coverage_radius() + 1e-12;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let p = [rng.gen::<f64>(), rng.gen::<f64>()];
            let nearest = (0..cover.len())
                .map(|j| dist(cover.center(j), &p))
                .fold(f64::INFINITY, f64::min);
            assert!(nearest <= bound, "uncovered point {p:?}: nearest {nearest}");
        }
    }

    #[test]
    fn center_window_matches_exhaustive() {
        use rand::{Rng, SeedableRng};
        let cover = PUCover::generate(600, 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p = [rng.gen::<f64>(), rng.gen::<f64>()];
            let radius = rng.gen::<f64>() * 0.3;
            let mut window = Vec::new();
            cover.visit_centers_near(&p, radius, |j| window.push(j));
            for j in 0..cover.len() {
                if dist(cover.center(j), &p) <= radius {
                    assert!(window.contains(&j));
                }
            }
        }
    }
}
