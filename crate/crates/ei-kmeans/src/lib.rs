//! Synthetic data generators, Monte-Carlo benchmark harness, CSV and model
//! file IO, and the `eikmeans` command-line interface.
//!
//! The algorithms themselves (partitioning, chi-square testing, drift
//! detection) live in the `ei-kmeans-core` crate.

pub mod bench;
pub mod cli;
pub mod csvio;
pub mod datagen;
pub mod model_file;
pub mod seeds;
