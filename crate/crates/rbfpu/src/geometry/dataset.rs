//! Scattered data container.
//!
//! Point lists throughout the crate are flat `&[f64]` buffers of length
//! `n * dim` with the coordinates of each point stored consecutively.

use crate::error::{Error, Result};

/// A set of distinct nodes with one scalar value per node.
///
/// Coordinates may be in any range at construction; fitting requires them
/// inside the unit hypercube (see [`Dataset::check_unit_domain`] and
/// [`crate::io::rescale_to_unit`]).
#[derive(Debug, Clone)]
pub struct Dataset {
    dim: usize,
    coords: Vec<f64>,
    values: Vec<f64>,
}

impl Dataset {
    /// Builds a dataset from flat coordinates and values, validating that
    /// nodes are finite, pairwise distinct, and that lengths agree.
    pub fn new(dim: usize, coords: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("dimension must be at least 1".into()));
        }
        if values.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        if coords.len() != values.len() * dim {
            return Err(Error::LengthMismatch {
                left: coords.len(),
                right: values.len() * dim,
            });
        }
        for (i, c) in coords.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::NonFinite {
                    what: "coordinate",
                    index: i / dim,
                });
            }
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    what: "value",
                    index: i,
                });
            }
        }
        let ds = Dataset { dim, coords, values };
        if let Some((first, second)) = ds.find_duplicate() {
            return Err(Error::DuplicateNodes { first, second });
        }
        Ok(ds)
    }

    fn find_duplicate(&self) -> Option<(usize, usize)> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.node(a)
                .iter()
                .zip(self.node(b))
                .map(|(x, y)| x.partial_cmp(y).unwrap())
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        for w in order.windows(2) {
            if self.node(w[0]) == self.node(w[1]) {
                let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
                return Some((a, b));
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Errors with the offending node index if any coordinate is outside
    /// `[0, 1]`.
    pub fn check_unit_domain(&self) -> Result<()> {
        for i in 0..self.len() {
            if self.node(i).iter().any(|&c| !(0.0..=1.0).contains(&c)) {
                return Err(Error::OutOfDomain { index: i });
            }
        }
        Ok(())
    }
}
