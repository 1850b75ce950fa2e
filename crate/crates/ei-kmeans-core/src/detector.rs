//! End-to-end drift detection against a fitted partition model, plus a
//! batch-stream driver.

use alloc::vec::Vec;

use crate::chi2::{chi2_test, contingency_expected, ContingencyTable};
use crate::kmeans::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::partition::fit_partition;
use crate::{Error, PartitionModel, Result, SampleMatrix};

/// Chi-square validity thresholds from the Box sample-size conditions.
const MIN_OBSERVED: f64 = 50.0;
const MIN_EXPECTED: f64 = 5.0;

/// Validity flags attached to a report when the chi-square approximation
/// operates outside the Box sample-size conditions. Warnings never change
/// the drift decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidityWarning {
    /// Some observed cell holds 50 or fewer samples.
    LowObserved,
    /// Some expected frequency is below 5.
    LowExpected,
}

/// Result of testing one window against the training histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftReport {
    pub drift: bool,
    pub p_value: f64,
    pub statistic: f64,
    pub df: usize,
    pub train_counts: Vec<u64>,
    pub test_counts: Vec<u64>,
    pub warnings: Vec<ValidityWarning>,
}

/// An immutable fitted detector: the EI-kMeans histogram plus the cached
/// training bin counts. Any number of concurrent callers may run
/// [`Detector::detect`] against it.
#[derive(Debug, Clone, PartialEq)]
pub struct Detector {
    model: PartitionModel,
}

impl Detector {
    /// Fits the histogram on `train` and caches its bin counts.
    pub fn fit(train: &SampleMatrix, beta: usize, theta_grid: &[f64], seed: u64) -> Result<Self> {
        let model = fit_partition(train, beta, theta_grid, DEFAULT_MAX_ITER, DEFAULT_TOL, seed)?;
        Ok(Self { model })
    }

    /// Like [`Detector::fit`], but when `max_samples` is below the training
    /// size the partition search runs on a seeded random subsample and the
    /// bin counts are then recounted over the full training set. Searching on
    /// a subset bounds the fit cost and curbs overfitting of the partition
    /// shape; the density estimate still uses every sample.
    pub fn fit_capped(
        train: &SampleMatrix,
        beta: usize,
        theta_grid: &[f64],
        seed: u64,
        max_samples: Option<usize>,
    ) -> Result<Self> {
        let cap = match max_samples {
            None => return Self::fit(train, beta, theta_grid, seed),
            Some(0) => return Err(Error::InvalidParameter("max_samples must be at least 1")),
            Some(cap) if cap >= train.n() => return Self::fit(train, beta, theta_grid, seed),
            Some(cap) => cap,
        };
        use rand::SeedableRng;
        // Distinct stream from the fit fallback RNG, which is seeded directly.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5ab5_a3c1_9e37_79b9);
        let mut picks = rand::seq::index::sample(&mut rng, train.n(), cap).into_vec();
        picks.sort_unstable();
        let subset = train.select_rows(&picks)?;
        let mut model =
            fit_partition(&subset, beta, theta_grid, DEFAULT_MAX_ITER, DEFAULT_TOL, seed)?;
        model.train_counts = model.assign(train)?.bin_counts();
        Ok(Self { model })
    }

    /// Wraps an existing model (e.g. one loaded from disk).
    pub fn from_model(model: PartitionModel) -> Self {
        Self { model }
    }

    pub fn model(&self) -> &PartitionModel {
        &self.model
    }

    /// Tests a window for drift at significance level `alpha`.
    pub fn detect(&self, test: &SampleMatrix, alpha: f64) -> Result<DriftReport> {
        if self.model.k() < 2 {
            return Err(Error::DegenerateModel);
        }
        if test.d() != self.model.d() {
            return Err(Error::DimensionMismatch {
                expected: self.model.d(),
                found: test.d(),
            });
        }
        let labels = self.model.assign(test)?;
        let test_counts = labels.bin_counts();
        let table = ContingencyTable::new(self.model.train_counts.clone(), test_counts.clone())?;
        let outcome = chi2_test(&table, alpha)?;

        let mut warnings = Vec::new();
        if table.observed().iter().any(|&o| o <= MIN_OBSERVED) {
            warnings.push(ValidityWarning::LowObserved);
        }
        if contingency_expected(&table).iter().any(|&e| e < MIN_EXPECTED) {
            warnings.push(ValidityWarning::LowExpected);
        }

        Ok(DriftReport {
            drift: outcome.reject,
            p_value: outcome.p_value,
            statistic: outcome.statistic,
            df: outcome.df,
            train_counts: self.model.train_counts.clone(),
            test_counts,
            warnings,
        })
    }
}

/// Refit parameters for [`run_stream`] when a drift alarm should promote the
/// offending window to the new training set.
#[derive(Debug, Clone)]
pub struct RefitConfig {
    pub beta: usize,
    pub theta_grid: Vec<f64>,
    pub seed: u64,
}

/// Applies [`Detector::detect`] to non-overlapping windows in order. With a
/// `refit` config, a window that triggers drift becomes the new training set
/// before the next window is processed; without one the detector is frozen.
pub fn run_stream(
    detector: Detector,
    windows: &[SampleMatrix],
    alpha: f64,
    refit: Option<&RefitConfig>,
) -> Result<Vec<DriftReport>> {
    let mut detector = detector;
    let mut reports = Vec::with_capacity(windows.len());
    for window in windows {
        let report = detector.detect(window, alpha)?;
        let drifted = report.drift;
        reports.push(report);
        if drifted {
            if let Some(cfg) = refit {
                detector = Detector::fit(window, cfg.beta, &cfg.theta_grid, cfg.seed)?;
            }
        }
    }
    Ok(reports)
}
