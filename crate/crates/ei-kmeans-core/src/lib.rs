//! Equal-intensity k-means (EI-kMeans) space partitioning and drift detection.
//!
//! The crate builds a cluster-based histogram over a training sample set:
//! greedy equal-intensity centroid initialization, Lloyd's k-means, and an
//! intensity-based amplify-shrink pass that rebalances bin counts until every
//! bin holds at least `beta` training samples. Drift in a test window is then
//! decided with Pearson's chi-square two-sample test on the 2xK contingency
//! table of train vs test bin counts.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature enables `std::error::Error` integration.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod chi2;
pub mod detector;
mod error;
pub mod greedy;
pub mod kmeans;
pub mod neighbors;
pub mod partition;
pub mod sample;

pub use detector::{Detector, DriftReport, ValidityWarning};
pub use error::Error;
pub use partition::PartitionModel;
pub use sample::{CentroidSet, LabelVector, SampleMatrix};

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
