//! Versioned on-disk model format (JSON).
//!
//! The file stores everything needed to evaluate a fitted model on data in
//! its original coordinates: the domain transform, the cover geometry, the
//! training nodes, and per-subdomain center/radius/shape/member
//! indices/coefficients. Numbers round-trip bit-exactly through the JSON
//! encoder.

use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::DomainTransform;
use crate::kernels::{Kernel, KernelFamily};
use crate::pu::{LocalInterpolant, PUModel, Provenance, WeightScheme};
use crate::PUCover;

/// Current model schema version; files with any other version are rejected.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct VersionProbe {
    schema_version: u32,
}

#[derive(Serialize, Deserialize)]
struct SubdomainRecord {
    center: Vec<f64>,
    radius: f64,
    shape: f64,
    members: Vec<usize>,
    coefficients: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct CoverRecord {
    cells_per_axis: usize,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    schema_version: u32,
    dim: usize,
    kernel: KernelFamily,
    weight_scheme: WeightScheme,
    transform: DomainTransform,
    cover: CoverRecord,
    nodes: Vec<f64>,
    subdomains: Vec<SubdomainRecord>,
    provenance: Provenance,
}

/// Serializes a fitted model together with the transform that maps original
/// coordinates onto the unit domain.
pub fn save_model(
    path: impl AsRef<Path>,
    model: &PUModel,
    transform: &DomainTransform,
) -> Result<()> {
    let path = path.as_ref();
    let file = ModelFile {
        schema_version: SCHEMA_VERSION,
        dim: model.dim,
        kernel: model.family,
        weight_scheme: model.weight_scheme,
        transform: transform.clone(),
        cover: CoverRecord {
            cells_per_axis: model.cover.cells_per_axis(),
        },
        nodes: model.nodes.clone(),
        subdomains: model
            .subdomains
            .iter()
            .map(|s| SubdomainRecord {
                center: s.center.clone(),
                radius: s.radius,
                shape: s.kernel.shape,
                members: s.members.clone(),
                coefficients: s.coefficients.clone(),
            })
            .collect(),
        provenance: model.provenance.clone(),
    };
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::InvalidConfig(format!("model serialization failed: {e}")))?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Loads a model file, checking the schema version before anything else.
pub fn load_model(path: impl AsRef<Path>) -> Result<(PUModel, DomainTransform)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |e: serde_json::Error| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        msg: e.to_string(),
    };
    let probe: VersionProbe = serde_json::from_str(&text).map_err(parse_err)?;
    if probe.schema_version != SCHEMA_VERSION {
        return Err(Error::SchemaVersion {
            found: probe.schema_version,
            expected: SCHEMA_VERSION,
        });
    }
    let file: ModelFile = serde_json::from_str(&text).map_err(parse_err)?;

    let n_nodes = file.nodes.len() / file.dim;
    let cover = PUCover::with_cells_per_axis(file.dim, file.cover.cells_per_axis);
    if file.subdomains.len() != cover.len() {
        return Err(Error::InvalidConfig(format!(
            "model has {} subdomains but the cover defines {}",
            file.subdomains.len(),
            cover.len()
        )));
    }
    let mut subdomains = Vec::with_capacity(file.subdomains.len());
    for (j, rec) in file.subdomains.into_iter().enumerate() {
        if rec.members.len() != rec.coefficients.len() {
            return Err(Error::LengthMismatch {
                left: rec.members.len(),
                right: rec.coefficients.len(),
            });
        }
        let mut coords = Vec::with_capacity(rec.members.len() * file.dim);
        for &i in &rec.members {
            if i >= n_nodes {
                return Err(Error::InvalidConfig(format!(
                    "subdomain {j} references node {i} of {n_nodes}"
                )));
            }
            coords.extend_from_slice(&file.nodes[i * file.dim..(i + 1) * file.dim]);
        }
        subdomains.push(LocalInterpolant {
            center: rec.center,
            radius: rec.radius,
            kernel: Kernel::new(file.kernel, rec.shape),
            members: rec.members,
            coords,
            coefficients: rec.coefficients,
        });
    }
    let model = PUModel::from_parts(
        file.dim,
        file.kernel,
        file.weight_scheme,
        cover,
        subdomains,
        file.nodes,
        file.provenance,
    );
    Ok((model, file.transform))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{halton_sequence, Dataset};
    use crate::harness::product_function;
    use crate::pu::{fit_pu_fixed, fit_pu_variable, SearchParams};
    use crate::selection::shape_grid;
    use tempfile::tempdir;

    fn fitted_model() -> PUModel {
        let coords = halton_sequence(120, 2, 0).unwrap();
        let values: Vec<f64> = coords.chunks(2).map(product_function).collect();
        let ds = Dataset::new(2, coords, values).unwrap();
        let shapes = shape_grid(8, 0.01, 10.0);
        fit_pu_variable(&ds, KernelFamily::Imq, &shapes, &SearchParams::default()).unwrap()
    }

    #[test]
    fn roundtrip_evaluations_bitwise_equal() {
        use rand::{Rng, SeedableRng};
        let dir = tempdir().unwrap();
        let path = dir.path().join("model.json");
        let model = fitted_model();
        save_model(&path, &model, &DomainTransform::identity(2)).unwrap();
        let (loaded, transform) = load_model(&path).unwrap();
        assert_eq!(transform, DomainTransform::identity(2));

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let points: Vec<f64> = (0..200).map(|_| rng.gen::<f64>()).collect();
        let a = model.evaluate(&points).unwrap();
        let b = loaded.evaluate(&points).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn version_mismatch_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("model.json");
        let model = fitted_model();
        save_model(&path, &model, &DomainTransform::identity(2)).unwrap();
        let bumped = fs::read_to_string(&path)
            .unwrap()
            .replace("\"schema_version\": 1", "\"schema_version\": 99");
        fs::write(&path, bumped).unwrap();
        assert!(matches!(
            load_model(&path),
            Err(Error::SchemaVersion {
                found: 99,
                expected: SCHEMA_VERSION
            })
        ));
    }

    #[test]
    fn fixed_mode_roundtrip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("model.json");
        let ds = Dataset::new(
            2,
            vec![0.1, 0.1, 0.9, 0.2, 0.5, 0.8, 0.2, 0.6],
            vec![1.0, 2.0, 3.0, 4.0],
        )
        .unwrap();
        let model = fit_pu_fixed(&ds, KernelFamily::MaternC2, 2.5).unwrap();
        save_model(&path, &model, &DomainTransform::identity(2)).unwrap();
        let (loaded, _) = load_model(&path).unwrap();
        assert_eq!(loaded.provenance.fixed_shape, Some(2.5));
        let x = [0.4, 0.4];
        assert_eq!(
            model.evaluate_one(&x).unwrap(),
            loaded.evaluate_one(&x).unwrap()
        );
    }
}
