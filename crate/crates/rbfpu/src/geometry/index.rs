//! Uniform cell-grid index for exact Euclidean ball queries.

use crate::geometry::Dataset;
use crate::util::{dist2, for_each_multi_index};

/// Spatial acceleration structure over the nodes of a [`Dataset`].
///
/// Immutable after construction; queries are exact (inclusive boundary) and
/// return indices sorted ascending.
pub struct SpatialIndex<'a> {
    dataset: &'a Dataset,
    lo: Vec<f64>,
    cell_size: Vec<f64>,
    cells_per_axis: usize,
    cells: Vec<Vec<u32>>,
}

impl<'a> SpatialIndex<'a> {
    pub fn new(dataset: &'a Dataset) -> Self {
        let dim = dataset.dim();
        let n = dataset.len();
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for i in 0..n {
            for (k, &c) in dataset.node(i).iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        // roughly one node per cell on average
        let cells_per_axis = ((n as f64).powf(1.0 / dim as f64).floor() as usize).max(1);
        let cell_size: Vec<f64> = (0..dim)
            .map(|k| {
                let extent = hi[k] - lo[k];
                if extent > 0.0 {
                    extent / cells_per_axis as f64
                } else {
                    1.0
                }
            })
            .collect();
        let mut cells = vec![Vec::new(); cells_per_axis.pow(dim as u32)];
        let index = SpatialIndexLayout {
            lo: &lo,
            cell_size: &cell_size,
            cells_per_axis,
        };
        for i in 0..n {
            let flat = index.flat_cell(dataset.node(i));
            cells[flat].push(i as u32);
        }
        SpatialIndex {
            dataset,
            lo,
            cell_size,
            cells_per_axis,
            cells,
        }
    }

    pub fn len(&self) -> usize {
        self.dataset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dataset.is_empty()
    }

    fn layout(&self) -> SpatialIndexLayout<'_> {
        SpatialIndexLayout {
            lo: &self.lo,
            cell_size: &self.cell_size,
            cells_per_axis: self.cells_per_axis,
        }
    }

    fn visit_ball(&self, center: &[f64], radius: f64, mut f: impl FnMut(usize)) {
        assert_eq!(center.len(), self.dataset.dim());
        assert!(radius >= 0.0, "radius must be non-negative");
        let layout = self.layout();
        let dim = center.len();
        let mut cell_lo = vec![0usize; dim];
        let mut cell_hi = vec![0usize; dim];
        for k in 0..dim {
            cell_lo[k] = layout.axis_cell(k, center[k] - radius);
            cell_hi[k] = layout.axis_cell(k, center[k] + radius);
        }
        let r2 = radius * radius;
        for_each_multi_index(&cell_lo, &cell_hi, |ix| {
            let flat = layout.flatten(ix);
            for &i in &self.cells[flat] {
                let i = i as usize;
                if dist2(self.dataset.node(i), center) <= r2 {
                    f(i);
                }
            }
        });
    }

    /// Indices `i` with `‖x_i − center‖₂ ≤ radius`, sorted ascending.
    pub fn range_query(&self, center: &[f64], radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit_ball(center, radius, |i| out.push(i));
        out.sort_unstable();
        out
    }

    /// Number of nodes within `radius` of `center` (inclusive).
    pub fn range_count(&self, center: &[f64], radius: f64) -> usize {
        let mut count = 0;
        self.visit_ball(center, radius, |_| count += 1);
        count
    }

    /// Indices of the `k` nodes closest to `center` (all nodes if `k ≥ N`),
    /// ties broken by smaller index.
    pub fn nearest_k(&self, center: &[f64], k: usize) -> Vec<usize> {
        let n = self.dataset.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            dist2(self.dataset.node(a), center)
                .partial_cmp(&dist2(self.dataset.node(b), center))
                .unwrap()
                .then(a.cmp(&b))
        });
        order.truncate(k);
        order.sort_unstable();
        order
    }
}

struct SpatialIndexLayout<'s> {
    lo: &'s [f64],
    cell_size: &'s [f64],
    cells_per_axis: usize,
}

impl SpatialIndexLayout<'_> {
    fn axis_cell(&self, axis: usize, coord: f64) -> usize {
        let raw = ((coord - self.lo[axis]) / self.cell_size[axis]).floor();
        if raw.is_nan() || raw < 0.0 {
            0
        } else {
            (raw as usize).min(self.cells_per_axis - 1)
        }
    }

    fn flat_cell(&self, point: &[f64]) -> usize {
        let mut flat = 0;
        for (k, &c) in point.iter().enumerate() {
            flat = flat * self.cells_per_axis + self.axis_cell(k, c);
        }
        flat
    }

    fn flatten(&self, ix: &[usize]) -> usize {
        let mut flat = 0;
        for &i in ix {
            flat = flat * self.cells_per_axis + i;
        }
        flat
    }
}
