//! Scattered-data file ingestion, domain rescaling, validation splits, and
//! results output.
//!
//! Data files are plain text: one record per line, `M` coordinates followed
//! by one value, separated by whitespace or commas. Lines starting with `#`
//! and blank lines are ignored.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Dataset;

/// Identifier of the split shuffle, recorded in provenance output so a
/// split can be reproduced outside this crate.
pub const SPLIT_RNG_ID: &str = "chacha8(seed_from_u64)+fisher-yates";

/// Affine map taking the data bounding box onto the unit hypercube,
/// `u = (x − offset) · scale` per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainTransform {
    pub offset: Vec<f64>,
    pub scale: Vec<f64>,
}

impl DomainTransform {
    pub fn identity(dim: usize) -> Self {
        DomainTransform {
            offset: vec![0.0; dim],
            scale: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn forward(&self, x: &[f64], out: &mut [f64]) {
        for k in 0..self.offset.len() {
            out[k] = (x[k] - self.offset[k]) * self.scale[k];
        }
    }

    pub fn inverse(&self, u: &[f64], out: &mut [f64]) {
        for k in 0..self.offset.len() {
            out[k] = u[k] / self.scale[k] + self.offset[k];
        }
    }

    pub fn forward_all(&self, coords: &[f64]) -> Vec<f64> {
        let dim = self.dim();
        let mut out = vec![0.0; coords.len()];
        for (src, dst) in coords.chunks(dim).zip(out.chunks_mut(dim)) {
            self.forward(src, dst);
        }
        out
    }
}

/// Maps the dataset's bounding box affinely onto `[0,1]^M`. Values are left
/// untouched, so downstream error metrics stay in the original units.
pub fn rescale_to_unit(raw: &Dataset) -> Result<(Dataset, DomainTransform)> {
    let dim = raw.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for i in 0..raw.len() {
        for (k, &c) in raw.node(i).iter().enumerate() {
            lo[k] = lo[k].min(c);
            hi[k] = hi[k].max(c);
        }
    }
    let mut scale = vec![0.0; dim];
    for k in 0..dim {
        let extent = hi[k] - lo[k];
        if extent <= 0.0 {
            return Err(Error::DegenerateDomain { axis: k });
        }
        scale[k] = 1.0 / extent;
    }
    let transform = DomainTransform { offset: lo, scale };
    let coords = transform.forward_all(raw.coords());
    let scaled = Dataset::new(dim, coords, raw.values().to_vec())?;
    Ok((scaled, transform))
}

fn parse_line(
    path: &Path,
    line_no: usize,
    line: &str,
    expected_fields: usize,
) -> Result<Option<Vec<f64>>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let fields: Vec<&str> = trimmed
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|f| !f.is_empty())
        .collect();
    if fields.len() != expected_fields {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            msg: format!("expected {expected_fields} fields, found {}", fields.len()),
        });
    }
    let mut record = Vec::with_capacity(expected_fields);
    for f in fields {
        let v: f64 = f.parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            msg: format!("cannot parse '{f}' as a number"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: line_no,
                msg: format!("non-finite field '{f}'"),
            });
        }
        record.push(v);
    }
    Ok(Some(record))
}

/// Loads a delimited data file with `dim` coordinates and one value per
/// record. Coordinates are returned unscaled.
pub fn load_delimited(path: impl AsRef<Path>, dim: usize) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut coords = Vec::new();
    let mut values = Vec::new();
    let mut line_of_record = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(record) = parse_line(path, i + 1, line, dim + 1)? {
            coords.extend_from_slice(&record[..dim]);
            values.push(record[dim]);
            line_of_record.push(i + 1);
        }
    }
    Dataset::new(dim, coords, values).map_err(|e| match e {
        Error::DuplicateNodes { first, second } => Error::Parse {
            path: path.to_path_buf(),
            line: line_of_record[second],
            msg: format!(
                "duplicate node (same coordinates as line {})",
                line_of_record[first]
            ),
        },
        other => other,
    })
}

/// Writes a dataset in the same delimited format, 17 significant digits.
pub fn write_delimited(path: impl AsRef<Path>, dataset: &Dataset) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for i in 0..dataset.len() {
        for c in dataset.node(i) {
            out.push_str(&format!("{c:.16e} "));
        }
        out.push_str(&format!("{:.16e}\n", dataset.value(i)));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Loads a points-only file (`dim` coordinates per record, no value),
/// returned as a flat buffer.
pub fn load_points(path: impl AsRef<Path>, dim: usize) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut coords = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(record) = parse_line(path, i + 1, line, dim)? {
            coords.extend_from_slice(&record);
        }
    }
    Ok(coords)
}

/// Seeded holdout specification; the split is a function of
/// `(seed, N, k)` only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub holdout: usize,
    pub seed: u64,
}

/// Splits a dataset into disjoint train and holdout parts by a seeded
/// shuffle ([`SPLIT_RNG_ID`]). Both parts keep the original node order.
pub fn validation_split(dataset: &Dataset, spec: SplitSpec) -> Result<(Dataset, Dataset)> {
    let n = dataset.len();
    if spec.holdout == 0 || spec.holdout >= n {
        return Err(Error::InvalidSplit {
            k: spec.holdout,
            n,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    order.shuffle(&mut rng);
    let mut is_holdout = vec![false; n];
    for &i in &order[..spec.holdout] {
        is_holdout[i] = true;
    }
    let subset = |want_holdout: bool| -> Dataset {
        let mut coords = Vec::new();
        let mut values = Vec::new();
        for i in 0..n {
            if is_holdout[i] == want_holdout {
                coords.extend_from_slice(dataset.node(i));
                values.push(dataset.value(i));
            }
        }
        Dataset::new(dataset.dim(), coords, values).expect("subset of a valid dataset")
    };
    Ok((subset(false), subset(true)))
}

/// Scientific notation with 6 significant digits.
pub fn format_scientific(x: f64) -> String {
    format!("{x:.5e}")
}

/// One output row of a results summary.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub label: String,
    pub rmse: f64,
    pub mae: f64,
    pub seconds: f64,
}

/// Writes a `label,rmse,mae,seconds` CSV, numbers in scientific notation
/// with 6 significant digits.
pub fn write_results(path: impl AsRef<Path>, rows: &[ResultRow]) -> Result<()> {
    let path = path.as_ref();
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut text = String::from("label,rmse,mae,seconds\n");
    for row in rows {
        debug_assert!(!row.label.contains(','), "labels must not contain commas");
        text.push_str(&format!(
            "{},{},{},{}\n",
            row.label,
            format_scientific(row.rmse),
            format_scientific(row.mae),
            format_scientific(row.seconds)
        ));
    }
    file.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn load_two_records() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("data.txt");
        fs::write(&path, "0 0 1\n1 1 2\n").unwrap();
        let ds = load_delimited(&path, 2).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.node(0), &[0.0, 0.0]);
        assert_eq!(ds.values(), &[1.0, 2.0]);
    }

    #[test]
    fn comments_commas_and_blanks() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("data.txt");
        fs::write(&path, "# heights\n\n0.5, 0.25, 3.5\n1,0,  4\n").unwrap();
        let ds = load_delimited(&path, 2).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.value(1), 4.0);
    }

    #[test]
    fn short_line_names_line_number() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("data.txt");
        fs::write(&path, "0 0 1\n1 1\n").unwrap();
        match load_delimited(&path, 2) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn duplicate_names_both_lines() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("data.txt");
        fs::write(&path, "# c\n0 0 1\n1 1 2\n0 0 3\n").unwrap();
        match load_delimited(&path, 2) {
            Err(Error::Parse { line, msg, .. }) => {
                assert_eq!(line, 4);
                assert!(msg.contains("line 2"), "msg: {msg}");
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn rejects_non_finite_fields() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("data.txt");
        fs::write(&path, "0 0 nan\n").unwrap();
        assert!(matches!(load_delimited(&path, 2), Err(Error::Parse { .. })));
    }

    #[test]
    fn dataset_roundtrip_lossless() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("data.txt");
        let coords = crate::geometry::halton_sequence(50, 2, 0).unwrap();
        let values: Vec<f64> = (0..50).map(|i| (i as f64).sin() * 1e3).collect();
        let ds = Dataset::new(2, coords, values).unwrap();
        write_delimited(&path, &ds).unwrap();
        let back = load_delimited(&path, 2).unwrap();
        assert_eq!(back.coords(), ds.coords());
        assert_eq!(back.values(), ds.values());
    }

    #[test]
    fn rescale_simple() {
        let ds = Dataset::new(2, vec![0.0, 0.0, 2.0, 4.0], vec![1.0, 2.0]).unwrap();
        let (scaled, t) = rescale_to_unit(&ds).unwrap();
        assert_eq!(t.scale, vec![0.5, 0.25]);
        assert_eq!(scaled.node(0), &[0.0, 0.0]);
        assert_eq!(scaled.node(1), &[1.0, 1.0]);
        assert_eq!(scaled.values(), ds.values());
    }

    #[test]
    fn rescale_identity_when_already_unit() {
        let ds = Dataset::new(
            2,
            vec![0.0, 0.0, 1.0, 1.0, 0.3, 0.8],
            vec![1.0, 2.0, 3.0],
        )
        .unwrap();
        let (_, t) = rescale_to_unit(&ds).unwrap();
        assert_eq!(t, DomainTransform::identity(2));
    }

    #[test]
    fn rescale_roundtrip() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let coords: Vec<f64> = (0..200).map(|_| rng.gen::<f64>() * 900.0 - 450.0).collect();
        let ds = Dataset::new(2, coords.clone(), vec![0.0; 100]).unwrap();
        let (scaled, t) = rescale_to_unit(&ds).unwrap();
        let mut back = vec![0.0; 2];
        for i in 0..100 {
            t.inverse(scaled.node(i), &mut back);
            for k in 0..2 {
                assert!((back[k] - ds.node(i)[k]).abs() <= 1e-12 * ds.node(i)[k].abs().max(1.0));
            }
        }
    }

    #[test]
    fn rescale_degenerate_axis() {
        let ds = Dataset::new(2, vec![0.0, 3.0, 1.0, 3.0], vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            rescale_to_unit(&ds),
            Err(Error::DegenerateDomain { axis: 1 })
        ));
    }

    fn toy_dataset(n: usize) -> Dataset {
        let coords: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let values: Vec<f64> = (0..n).map(|i| i as f64).collect();
        Dataset::new(1, coords, values).unwrap()
    }

    #[test]
    fn split_deterministic() {
        let ds = toy_dataset(10);
        let spec = SplitSpec { holdout: 3, seed: 99 };
        let (train1, hold1) = validation_split(&ds, spec).unwrap();
        let (train2, hold2) = validation_split(&ds, spec).unwrap();
        assert_eq!(hold1.values(), hold2.values());
        assert_eq!(train1.values(), train2.values());
        assert_eq!(hold1.len(), 3);
        assert_eq!(train1.len(), 7);
    }

    #[test]
    fn split_partitions_input() {
        let ds = toy_dataset(50);
        let (train, hold) = validation_split(&ds, SplitSpec { holdout: 13, seed: 1 }).unwrap();
        let mut all: Vec<f64> = train.values().iter().chain(hold.values()).copied().collect();
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expect: Vec<f64> = (0..50).map(|i| i as f64).collect();
        assert_eq!(all, expect);
    }

    #[test]
    fn split_extreme_k() {
        let ds = toy_dataset(10);
        let (train, hold) = validation_split(&ds, SplitSpec { holdout: 9, seed: 5 }).unwrap();
        assert_eq!(train.len(), 1);
        assert_eq!(hold.len(), 9);
        assert!(matches!(
            validation_split(&ds, SplitSpec { holdout: 10, seed: 5 }),
            Err(Error::InvalidSplit { k: 10, n: 10 })
        ));
        assert!(matches!(
            validation_split(&ds, SplitSpec { holdout: 0, seed: 5 }),
            Err(Error::InvalidSplit { k: 0, n: 10 })
        ));
    }

    #[test]
    fn results_csv_roundtrip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("results.csv");
        let rows = vec![ResultRow {
            label: "N=289".into(),
            rmse: 1.03e-5,
            mae: 2.36e-4,
            seconds: 0.8,
        }];
        write_results(&path, &rows).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "label,rmse,mae,seconds");
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields[0], "N=289");
        assert_eq!(fields[1].parse::<f64>().unwrap(), 1.03e-5);
        assert_eq!(fields[2].parse::<f64>().unwrap(), 2.36e-4);
        assert_eq!(fields[3].parse::<f64>().unwrap(), 0.8);
    }

    #[test]
    fn results_csv_empty() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("results.csv");
        write_results(&path, &[]).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "label,rmse,mae,seconds\n");
    }
}
