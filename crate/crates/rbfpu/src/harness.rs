//! Benchmark functions, error metrics, evaluation grids, and experiment
//! orchestration.

use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::geometry::{halton_sequence, Dataset};
use crate::io::{self, format_scientific, SplitSpec};
use crate::kernels::KernelFamily;
use crate::pu::{fit_pu_fixed, fit_pu_variable, FitMode, PUModel, SearchParams};
use crate::selection::shape_grid;
use crate::util::linspace;

/// The product test function `16·x₁x₂(1−x₁)(1−x₂)`: zero on the boundary
/// of the unit square, peak value 1 at the center.
pub fn product_function(x: &[f64]) -> f64 {
    assert!(x.len() >= 2);
    16.0 * x[0] * x[1] * (1.0 - x[0]) * (1.0 - x[1])
}

/// Tensor grid of `g^M` equispaced points spanning the unit cube, endpoints
/// included, returned flat.
pub fn eval_grid(g: usize, dim: usize) -> Vec<f64> {
    assert!(g >= 2 && dim >= 1);
    let axis = linspace(0.0, 1.0, g);
    let mut out = Vec::with_capacity(g.pow(dim as u32) * dim);
    crate::util::for_each_multi_index(&vec![0; dim], &vec![g - 1; dim], |ix| {
        for &i in ix {
            out.push(axis[i]);
        }
    });
    out
}

fn check_metric_inputs(pred: &[f64], truth: &[f64]) -> Result<()> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: pred.len(),
            right: truth.len(),
        });
    }
    if pred.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    Ok(())
}

/// Maximum absolute error.
pub fn mae(pred: &[f64], truth: &[f64]) -> Result<f64> {
    check_metric_inputs(pred, truth)?;
    Ok(pred
        .iter()
        .zip(truth)
        .map(|(p, t)| (p - t).abs())
        .fold(0.0, f64::max))
}

/// Root mean square error.
pub fn rmse(pred: &[f64], truth: &[f64]) -> Result<f64> {
    check_metric_inputs(pred, truth)?;
    let sum: f64 = pred.iter().zip(truth).map(|(p, t)| (p - t) * (p - t)).sum();
    Ok((sum / pred.len() as f64).sqrt())
}

/// Full experiment configuration; the defaults mirror the benchmark setup
/// (IMQ, 30 log-spaced shapes in (0.001, 10), h=2, P=6, fixed ε=0.6, 40×40
/// evaluation grid).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kernel: KernelFamily,
    pub mode: FitMode,
    pub sizes: Vec<usize>,
    pub shape_count: usize,
    pub shape_min: f64,
    pub shape_max: f64,
    pub h: f64,
    pub radius_count: usize,
    pub n_min: usize,
    pub fixed_shape: f64,
    pub grid: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kernel: KernelFamily::Imq,
            mode: FitMode::Variable,
            sizes: vec![289, 1089, 4225],
            shape_count: 30,
            shape_min: 1e-3,
            shape_max: 10.0,
            h: 2.0,
            radius_count: 6,
            n_min: 3,
            fixed_shape: 0.6,
            grid: 40,
            seed: 42,
        }
    }
}

impl ExperimentConfig {
    /// Reads a config from a TOML file; absent keys keep their defaults.
    pub fn from_toml_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let config: ExperimentConfig = toml::from_str(&text)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::InvalidConfig("no benchmark sizes given".into()));
        }
        if self.shape_count < 1 {
            return Err(Error::InvalidConfig("shape_count must be at least 1".into()));
        }
        if !(self.shape_min > 0.0 && self.shape_max > self.shape_min) {
            return Err(Error::InvalidConfig(format!(
                "shape range must satisfy 0 < min < max, got ({}, {})",
                self.shape_min, self.shape_max
            )));
        }
        if self.grid < 2 {
            return Err(Error::InvalidConfig("grid must be at least 2".into()));
        }
        if self.mode == FitMode::Fixed && !(self.fixed_shape > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "fixed mode needs a positive shape, got {}",
                self.fixed_shape
            )));
        }
        self.search_params().validate()
    }

    pub fn shapes(&self) -> Vec<f64> {
        shape_grid(self.shape_count, self.shape_min, self.shape_max)
    }

    pub fn search_params(&self) -> SearchParams {
        SearchParams {
            h: self.h,
            radius_count: self.radius_count,
            n_min: self.n_min,
        }
    }
}

/// Accuracy and timing of both fit modes at one data size.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchMetrics {
    pub rmse_var: f64,
    pub mae_var: f64,
    pub rmse_fixed: f64,
    pub mae_fixed: f64,
    pub seconds_var: f64,
    pub seconds_fixed: f64,
}

/// One benchmark table row; a failed fit is recorded without aborting the
/// remaining rows.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub n: usize,
    pub outcome: std::result::Result<BenchMetrics, String>,
}

fn halton_product_dataset(n: usize) -> Result<Dataset> {
    let coords = halton_sequence(n, 2, 0)?;
    let values: Vec<f64> = coords.chunks(2).map(product_function).collect();
    Dataset::new(2, coords, values)
}

fn bench_one(config: &ExperimentConfig, n: usize) -> Result<BenchMetrics> {
    let dataset = halton_product_dataset(n)?;
    let grid = eval_grid(config.grid, 2);
    let truth: Vec<f64> = grid.chunks(2).map(product_function).collect();
    let shapes = config.shapes();
    let params = config.search_params();

    let start = Instant::now();
    let variable = fit_pu_variable(&dataset, config.kernel, &shapes, &params)?;
    let pred_var = variable.evaluate(&grid)?;
    let seconds_var = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let fixed = fit_pu_fixed(&dataset, config.kernel, config.fixed_shape)?;
    let pred_fixed = fixed.evaluate(&grid)?;
    let seconds_fixed = start.elapsed().as_secs_f64();

    Ok(BenchMetrics {
        rmse_var: rmse(&pred_var, &truth)?,
        mae_var: mae(&pred_var, &truth)?,
        rmse_fixed: rmse(&pred_fixed, &truth)?,
        mae_fixed: mae(&pred_fixed, &truth)?,
        seconds_var,
        seconds_fixed,
    })
}

/// Runs the accuracy experiment over every configured size: Halton nodes,
/// product-function values, both fit modes, metrics on the evaluation grid.
///
/// Per-size fit errors are recorded in the row and do not abort later rows.
pub fn run_benchmark(config: &ExperimentConfig) -> Result<Vec<BenchRow>> {
    config.validate()?;
    Ok(config
        .sizes
        .iter()
        .map(|&n| BenchRow {
            n,
            outcome: bench_one(config, n).map_err(|e| e.to_string()),
        })
        .collect())
}

/// Writes the benchmark table as CSV. Timing columns are deliberately
/// omitted so identical configurations produce byte-identical files.
pub fn write_bench_csv(path: impl AsRef<Path>, rows: &[BenchRow]) -> Result<()> {
    let path = path.as_ref();
    let mut text = String::from("N,rmse_var,mae_var,rmse_fixed,mae_fixed,status\n");
    for row in rows {
        match &row.outcome {
            Ok(m) => text.push_str(&format!(
                "{},{},{},{},{},ok\n",
                row.n,
                format_scientific(m.rmse_var),
                format_scientific(m.mae_var),
                format_scientific(m.rmse_fixed),
                format_scientific(m.mae_fixed),
            )),
            Err(msg) => text.push_str(&format!(
                "{},,,,,error: {}\n",
                row.n,
                msg.replace(',', ";")
            )),
        }
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Result of a holdout experiment, in the original value units.
#[derive(Debug, Clone, PartialEq)]
pub struct HoldoutReport {
    pub rmse: f64,
    pub mae: f64,
    pub n_train: usize,
    pub n_holdout: usize,
    pub seconds: f64,
}

/// Fits the requested model on a random training split of a data file and
/// scores it on the held-out points: load → rescale → split → fit →
/// evaluate. Values are never rescaled, so the metrics keep their units.
pub fn run_holdout(
    data_path: impl AsRef<Path>,
    dim: usize,
    split: SplitSpec,
    config: &ExperimentConfig,
) -> Result<HoldoutReport> {
    let start = Instant::now();
    let raw = io::load_delimited(data_path, dim)?;
    let (scaled, _transform) = io::rescale_to_unit(&raw)?;
    let (train, holdout) = io::validation_split(&scaled, split)?;
    let model = fit_with_mode(&train, config)?;
    let pred = model.evaluate(holdout.coords())?;
    Ok(HoldoutReport {
        rmse: rmse(&pred, holdout.values())?,
        mae: mae(&pred, holdout.values())?,
        n_train: train.len(),
        n_holdout: holdout.len(),
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Fits a dataset in the configured mode.
pub fn fit_with_mode(dataset: &Dataset, config: &ExperimentConfig) -> Result<PUModel> {
    match config.mode {
        FitMode::Variable => fit_pu_variable(
            dataset,
            config.kernel,
            &config.shapes(),
            &config.search_params(),
        ),
        FitMode::Fixed => fit_pu_fixed(dataset, config.kernel, config.fixed_shape),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_function_values() {
        assert_eq!(product_function(&[0.5, 0.5]), 1.0);
        assert_eq!(product_function(&[0.3, 0.0]), 0.0);
        assert_eq!(product_function(&[0.0, 0.7]), 0.0);
        assert_relative_eq!(product_function(&[0.25, 0.5]), 0.75, max_relative = 1e-15);
    }

    #[test]
    fn grids() {
        assert_eq!(eval_grid(2, 1), vec![0.0, 1.0]);
        let g = eval_grid(3, 2);
        assert_eq!(g.len(), 18);
        assert!(g.chunks(2).any(|p| p == [0.5, 0.5]));
        assert_eq!(eval_grid(40, 2).len(), 1600 * 2);
    }

    #[test]
    fn metric_values() {
        let t = [0.0, 0.0];
        assert_eq!(mae(&t, &t).unwrap(), 0.0);
        assert_eq!(rmse(&t, &t).unwrap(), 0.0);

        let pred = [3.0, 4.0];
        assert_eq!(mae(&pred, &t).unwrap(), 4.0);
        assert_relative_eq!(rmse(&pred, &t).unwrap(), (12.5f64).sqrt(), max_relative = 1e-15);

        // constant error: both metrics coincide
        let c = [2.5; 7];
        let z = [0.0; 7];
        assert_relative_eq!(rmse(&c, &z).unwrap(), 2.5, max_relative = 1e-15);
        assert_eq!(mae(&c, &z).unwrap(), 2.5);
    }

    #[test]
    fn metric_errors() {
        assert!(matches!(
            mae(&[1.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(rmse(&[], &[]), Err(Error::InsufficientData { .. })));
    }

    #[test]
    fn rmse_bounded_by_mae() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let n = 1 + rng.gen_range(0..40);
            let pred: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 10.0 - 5.0).collect();
            let truth: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 10.0 - 5.0).collect();
            assert!(rmse(&pred, &truth).unwrap() <= mae(&pred, &truth).unwrap() + 1e-15);
        }
    }

    #[test]
    fn config_validation() {
        let mut config = ExperimentConfig::default();
        config.h = 0.5;
        assert!(config.validate().is_err());

        let mut config = ExperimentConfig::default();
        config.shape_min = 0.0;
        assert!(config.validate().is_err());

        assert!(ExperimentConfig::default().validate().is_ok());
    }

    #[test]
    fn config_from_toml() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bench.toml");
        fs::write(
            &path,
            "kernel = \"matern2\"\nsizes = [289]\nshape_count = 10\n",
        )
        .unwrap();
        let config = ExperimentConfig::from_toml_file(&path).unwrap();
        assert_eq!(config.kernel, KernelFamily::MaternC2);
        assert_eq!(config.sizes, vec![289]);
        assert_eq!(config.shape_count, 10);
        // untouched keys keep defaults
        assert_eq!(config.grid, 40);
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bench.toml");
        fs::write(&path, "sizes = [289]\nbogus = 1\n").unwrap();
        assert!(matches!(
            ExperimentConfig::from_toml_file(&path),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn benchmark_row_error_marker() {
        // a shape grid of hopelessly flat kernels: every factorization
        // fails, the row carries the error, the run itself succeeds
        let config = ExperimentConfig {
            sizes: vec![64],
            shape_count: 2,
            shape_min: 1e-12,
            shape_max: 2e-12,
            ..ExperimentConfig::default()
        };
        let rows = run_benchmark(&config).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].outcome.is_err());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_bench_csv(&path, &rows).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.lines().nth(1).unwrap().contains("error:"));
    }
}
