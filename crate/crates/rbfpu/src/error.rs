//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {dim} exceeds the supported prime table (max {max})")]
    UnsupportedDimension { dim: usize, max: usize },

    #[error("nodes {first} and {second} coincide")]
    DuplicateNodes { first: usize, second: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("matrix not positive definite: pivot {pivot:e} at index {index} is at or below tolerance")]
    NotSpd { index: usize, pivot: f64 },

    #[error("need at least {needed} data points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("subdomain {subdomain}: no radius up to the domain diameter gathers {required} nodes")]
    DegenerateCover { subdomain: usize, required: usize },

    #[error("subdomain {subdomain} has no finite cross-validation score")]
    UnfittableSubdomain { subdomain: usize },

    #[error("point {index} lies outside the unit hypercube")]
    OutOfDomain { index: usize },

    #[error("point is outside every subdomain")]
    UncoveredPoint,

    #[error("non-finite {what} at record {index}")]
    NonFinite { what: &'static str, index: usize },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("axis {axis} of the bounding box has zero extent")]
    DegenerateDomain { axis: usize },

    #[error("holdout size {k} must satisfy 0 < k < {n}")]
    InvalidSplit { k: usize, n: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("model schema version {found} is not supported (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
