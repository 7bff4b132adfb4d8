//! Partition-of-unity interpolation of scattered data with radial basis
//! functions, where each subdomain picks its own radius and kernel shape
//! by a closed-form leave-one-out cross-validation search.
//!
//! The domain is covered by overlapping balls around the centers of a
//! uniform grid. On each ball a small RBF system is solved; the local fits
//! are blended into a global interpolant by compactly supported Shepard
//! weights. Instead of one radius and one shape for all subdomains, every
//! subdomain scores a grid of `(radius, shape)` candidates with Rippa's
//! leave-one-out identity and keeps the pair with the smallest estimated
//! error, growing the radius search window wherever the data thins out.
//!
//! Point buffers are flat `&[f64]` slices of length `n * dim`, one point's
//! coordinates stored consecutively.
//!
//! ```
//! use rbfpu::{Dataset, KernelFamily, SearchParams};
//!
//! // sample a smooth function on a Halton point set
//! let coords = rbfpu::halton_sequence(289, 2, 0)?;
//! let values: Vec<f64> = coords.chunks(2).map(rbfpu::product_function).collect();
//! let data = Dataset::new(2, coords, values)?;
//!
//! let shapes = rbfpu::shape_grid(30, 1e-3, 10.0);
//! let model = rbfpu::fit_pu_variable(&data, KernelFamily::Imq, &shapes, &SearchParams::default())?;
//! let at_center = model.evaluate_one(&[0.5, 0.5])?;
//! assert!((at_center - 1.0).abs() < 1e-3);
//! # Ok::<(), rbfpu::Error>(())
//! ```

pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod kernels;
pub mod linalg;
pub mod model_file;
pub mod pu;
pub mod selection;

mod util;

pub use error::{Error, Result};
pub use geometry::{
    ball_volume, halton_sequence, radius_range, required_count, Dataset, PUCover, RadiusRange,
    SpatialIndex,
};
pub use harness::{
    eval_grid, mae, product_function, rmse, run_benchmark, run_holdout, write_bench_csv,
    BenchMetrics, BenchRow, ExperimentConfig, HoldoutReport,
};
pub use io::{
    load_delimited, load_points, rescale_to_unit, validation_split, write_delimited,
    write_results, DomainTransform, ResultRow, SplitSpec,
};
pub use kernels::{gram_matrix, Kernel, KernelFamily};
pub use linalg::{factorize_spd, SpdFactorization, SquareMatrix};
pub use model_file::{load_model, save_model, SCHEMA_VERSION};
pub use pu::{
    fit_local, fit_pu_fixed, fit_pu_variable, shepard_weights, wendland_weight, FitMode,
    LocalInterpolant, PUModel, SearchParams, WeightScheme,
};
pub use selection::{
    build_error_matrix, loocv_score, rippa_errors, select_parameters, shape_grid, ErrorMatrix,
    SelectedParameters,
};
