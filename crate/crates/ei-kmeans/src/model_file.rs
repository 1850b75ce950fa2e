//! Versioned on-disk persistence for fitted partition models.
//!
//! The format is human-readable JSON; floats are written with the shortest
//! representation that round-trips exactly, so a reloaded model reproduces
//! bit-identical drift reports.

use std::fs;
use std::path::Path;

use ei_kmeans_core::{CentroidSet, PartitionModel, SampleMatrix};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("model file parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported model format_version {found} (this build reads version {supported})")]
    UnsupportedVersion { found: u32, supported: u32 },
    #[error("inconsistent model file: {0}")]
    Inconsistent(#[from] ei_kmeans_core::Error),
}

pub type Result<T> = std::result::Result<T, ModelFileError>;

/// Serialized form of a fitted model plus fit provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub k: usize,
    pub dim: usize,
    pub beta: usize,
    pub theta: f64,
    pub fallback: bool,
    pub centroids: Vec<Vec<f64>>,
    pub coefficients: Vec<f64>,
    pub train_counts: Vec<u64>,
    pub fit_seed: u64,
    pub created_at: String,
}

impl ModelFile {
    pub fn from_model(model: &PartitionModel, fit_seed: u64) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            k: model.k(),
            dim: model.d(),
            beta: model.beta,
            theta: model.theta,
            fallback: model.fallback,
            centroids: (0..model.k()).map(|k| model.centroids.centroid(k).to_vec()).collect(),
            coefficients: model.coefficients.clone(),
            train_counts: model.train_counts.clone(),
            fit_seed,
            created_at: chrono::Utc::now().to_rfc3339(),
        }
    }

    pub fn into_model(self) -> Result<PartitionModel> {
        if self.format_version != FORMAT_VERSION {
            return Err(ModelFileError::UnsupportedVersion {
                found: self.format_version,
                supported: FORMAT_VERSION,
            });
        }
        let points = SampleMatrix::from_rows(&self.centroids)?;
        if points.n() != self.k || points.d() != self.dim {
            return Err(ModelFileError::Inconsistent(
                ei_kmeans_core::Error::LengthMismatch {
                    expected: self.k,
                    found: points.n(),
                },
            ));
        }
        Ok(PartitionModel::new(
            CentroidSet::new(points),
            self.coefficients,
            self.train_counts,
            self.beta,
            self.theta,
            self.fallback,
        )?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text + "\n").map_err(|e| ModelFileError::Io {
            path: path.display().to_string(),
            source: e,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| ModelFileError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ei_kmeans_core::partition::{default_theta_grid, fit_partition};
    use ei_kmeans_core::Detector;

    fn fitted_model() -> PartitionModel {
        let mut state = 17u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let data = SampleMatrix::from_flat((0..1200).map(|_| next()).collect(), 600, 2).unwrap();
        fit_partition(&data, 50, &default_theta_grid(), 100, 1e-6, 0).unwrap()
    }

    #[test]
    fn round_trip_reproduces_detection_bit_exactly() {
        let model = fitted_model();
        let file = ModelFile::from_model(&model, 0);
        let json = serde_json::to_string(&file).unwrap();
        let reloaded: ModelFile = serde_json::from_str(&json).unwrap();
        let restored = reloaded.into_model().unwrap();
        assert_eq!(model, restored);

        let test = SampleMatrix::from_rows(&[vec![0.3, 0.7], vec![0.9, 0.1], vec![0.5, 0.5]])
            .unwrap();
        let a = Detector::from_model(model).detect(&test, 0.05).unwrap();
        let b = Detector::from_model(restored).detect(&test, 0.05).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_version_rejected() {
        let mut file = ModelFile::from_model(&fitted_model(), 0);
        file.format_version = 99;
        let err = file.into_model().unwrap_err();
        assert!(matches!(err, ModelFileError::UnsupportedVersion { found: 99, .. }));
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let file = ModelFile::from_model(&fitted_model(), 42);
        file.save(&path).unwrap();
        let loaded = ModelFile::load(&path).unwrap();
        assert_eq!(loaded.fit_seed, 42);
        assert_eq!(loaded.into_model().unwrap(), fitted_model());
    }
}
