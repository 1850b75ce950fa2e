//! Monte-Carlo harness estimating Type-I / Type-II error rates and the
//! partition-intensity diagnostic.

use std::time::{Duration, Instant};

use ei_kmeans_core::greedy::greedy_centroids;
use ei_kmeans_core::kmeans::{lloyd_kmeans, DEFAULT_MAX_ITER, DEFAULT_TOL};
use ei_kmeans_core::partition::{
    amplified_assign, amplify_coefficients, default_theta_grid, intensity_stddev,
    intensity_vector, DEFAULT_BETA,
};
use ei_kmeans_core::greedy::partition_sizes;
use ei_kmeans_core::{CentroidSet, Detector, SampleMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::datagen::{gen_dataset, gen_experiment1_sets, DiagnosticVariant, Family, GeneratorSpec};
use crate::seeds;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid trial config: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    DataGen(#[from] crate::datagen::DataGenError),
    #[error(transparent)]
    Core(#[from] ei_kmeans_core::Error),
}

pub type Result<T> = std::result::Result<T, BenchError>;

/// One benchmark configuration: a drift family plus the test protocol.
#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub family: Family,
    /// Drift margin for the drifted test sets.
    pub delta: f64,
    pub n_train: usize,
    pub n_test: usize,
    pub n_stationary_sets: usize,
    pub n_drift_sets: usize,
    pub repetitions: usize,
    pub alpha: f64,
    pub beta: usize,
    pub theta_grid: Vec<f64>,
    /// Partition-search subsample cap (bin counts still use the full
    /// training set); `None` fits on everything.
    pub fit_cap: Option<usize>,
    pub base_seed: u64,
}

impl TrialConfig {
    /// Reference protocol: n_train 2000, n_test 200, 250 + 250 test sets,
    /// 10 repetitions, alpha 0.05, beta 50, the family's default margin, and
    /// a partition-search cap of 2000 samples (no-op at the reference size;
    /// larger training sets refine the counts, not the partition shape).
    pub fn reference(family: Family, base_seed: u64) -> Self {
        let delta = family.default_delta();
        Self {
            family,
            delta,
            n_train: 2000,
            n_test: 200,
            n_stationary_sets: 250,
            n_drift_sets: 250,
            repetitions: 10,
            alpha: 0.05,
            beta: DEFAULT_BETA,
            theta_grid: default_theta_grid(),
            fit_cap: Some(2000),
            base_seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_train == 0 || self.n_test == 0 || self.repetitions == 0 {
            return Err(BenchError::InvalidConfig("counts must be at least 1"));
        }
        if self.n_stationary_sets == 0 && self.n_drift_sets == 0 {
            return Err(BenchError::InvalidConfig("need at least one test set"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(BenchError::InvalidConfig("alpha must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Error rates of a single repetition, in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepetitionResult {
    pub type1: f64,
    pub type2: f64,
}

/// Aggregated benchmark result.
#[derive(Debug, Clone)]
pub struct TrialResult {
    /// Mean false-alarm rate over repetitions, percent.
    pub type1_mean: f64,
    pub type1_std: f64,
    /// Mean missed-detection rate over repetitions, percent.
    pub type2_mean: f64,
    pub type2_std: f64,
    pub per_repetition: Vec<RepetitionResult>,
    pub wall_time: Duration,
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Runs the full protocol: per repetition, fit a detector on a fresh training
/// set, then test freshly generated stationary and drifted windows. Each
/// dataset's seed comes from a deterministic counter stream off `base_seed`,
/// so repetitions are independent and individually re-runnable.
pub fn run_trial(cfg: &TrialConfig) -> Result<TrialResult> {
    cfg.validate()?;
    let start = Instant::now();
    let sets_per_rep = (1 + cfg.n_stationary_sets + cfg.n_drift_sets) as u64;

    let mut per_repetition = Vec::with_capacity(cfg.repetitions);
    for rep in 0..cfg.repetitions {
        let mut counter = rep as u64 * sets_per_rep;
        let mut next_seed = || {
            let s = seeds::derive(cfg.base_seed, counter);
            counter += 1;
            s
        };

        let train = gen_dataset(&GeneratorSpec::new(cfg.family.clone(), cfg.n_train, next_seed()))?;
        let detector =
            Detector::fit_capped(&train, cfg.beta, &cfg.theta_grid, cfg.base_seed, cfg.fit_cap)?;

        let mut false_alarms = 0usize;
        for _ in 0..cfg.n_stationary_sets {
            let test =
                gen_dataset(&GeneratorSpec::new(cfg.family.clone(), cfg.n_test, next_seed()))?;
            if detector.detect(&test, cfg.alpha)?.drift {
                false_alarms += 1;
            }
        }
        let mut misses = 0usize;
        for _ in 0..cfg.n_drift_sets {
            let spec = GeneratorSpec::new(cfg.family.clone(), cfg.n_test, next_seed())
                .drifted(true)
                .with_delta(cfg.delta);
            if !detector.detect(&gen_dataset(&spec)?, cfg.alpha)?.drift {
                misses += 1;
            }
        }

        let type1 = if cfg.n_stationary_sets > 0 {
            100.0 * false_alarms as f64 / cfg.n_stationary_sets as f64
        } else {
            0.0
        };
        let type2 = if cfg.n_drift_sets > 0 {
            100.0 * misses as f64 / cfg.n_drift_sets as f64
        } else {
            0.0
        };
        per_repetition.push(RepetitionResult { type1, type2 });
    }

    let (type1_mean, type1_std) = mean_std(per_repetition.iter().map(|r| r.type1));
    let (type2_mean, type2_std) = mean_std(per_repetition.iter().map(|r| r.type2));
    Ok(TrialResult {
        type1_mean,
        type1_std,
        type2_mean,
        type2_std,
        per_repetition,
        wall_time: start.elapsed(),
    })
}

/// Re-runs the trial at each training size; the test protocol and seed stream
/// stay matched across sizes.
pub fn run_training_size_sweep(
    cfg: &TrialConfig,
    sizes: &[usize],
) -> Result<Vec<(usize, TrialResult)>> {
    if sizes.is_empty() {
        return Err(BenchError::InvalidConfig("sizes must be nonempty"));
    }
    sizes
        .iter()
        .map(|&n_train| {
            let mut cfg = cfg.clone();
            cfg.n_train = n_train;
            Ok((n_train, run_trial(&cfg)?))
        })
        .collect()
}

/// Intensity standard deviation of the EI-kMeans partitioning versus plain
/// random-init k-means at a forced cluster count `k`, averaged over the given
/// seeds. Lower is more even.
pub fn run_partition_diagnostic(
    variant: DiagnosticVariant,
    k: usize,
    seed_list: &[u64],
) -> Result<(f64, f64)> {
    if seed_list.is_empty() {
        return Err(BenchError::InvalidConfig("need at least one seed"));
    }
    let mut ei_total = 0.0;
    let mut plain_total = 0.0;
    for &seed in seed_list {
        let data = gen_experiment1_sets(variant, seed)?;
        let n = data.n();

        let counts = ei_counts_forced_k(&data, k)?;
        ei_total += intensity_stddev(&counts, n as u64);

        // Plain k-means from k random rows.
        let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(seed, 1));
        let picks = rand::seq::index::sample(&mut rng, n, k).into_vec();
        let init = CentroidSet::new(data.select_rows(&picks)?);
        let (_, labels) = lloyd_kmeans(&data, &init, DEFAULT_MAX_ITER, DEFAULT_TOL)?;
        plain_total += intensity_stddev(&labels.bin_counts(), n as u64);
    }
    let len = seed_list.len() as f64;
    Ok((ei_total / len, plain_total / len))
}

/// EI-kMeans bin counts at a forced `k`: greedy init, Lloyd iterations, then
/// the amplify-shrink sweep. Uses the first theta meeting the minimum-count
/// constraint, else the theta with the best (largest) minimum count.
fn ei_counts_forced_k(data: &SampleMatrix, k: usize) -> Result<Vec<u64>> {
    let init = greedy_centroids(data, k)?;
    let (centroids, labels) = lloyd_kmeans(data, &init, DEFAULT_MAX_ITER, DEFAULT_TOL)?;
    let expected = partition_sizes(data.n(), k)?;
    let intensity = intensity_vector(&labels.bin_counts(), &expected)?;

    let mut best: Option<Vec<u64>> = None;
    for &theta in &default_theta_grid() {
        let coef = amplify_coefficients(&intensity, theta);
        let counts = amplified_assign(data, &centroids, &coef)?.bin_counts();
        let min = *counts.iter().min().unwrap();
        if min as usize >= DEFAULT_BETA {
            return Ok(counts);
        }
        if best.as_ref().map_or(true, |b| min > *b.iter().min().unwrap()) {
            best = Some(counts);
        }
    }
    Ok(best.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg(family: Family) -> TrialConfig {
        let mut cfg = TrialConfig::reference(family, 11);
        cfg.n_train = 600;
        cfg.n_stationary_sets = 30;
        cfg.n_drift_sets = 30;
        cfg.repetitions = 2;
        cfg
    }

    #[test]
    fn trial_is_reproducible() {
        let cfg = small_cfg(Family::OneGMean);
        let a = run_trial(&cfg).unwrap();
        let b = run_trial(&cfg).unwrap();
        assert_eq!(a.per_repetition, b.per_repetition);
    }

    #[test]
    fn zero_delta_drift_sets_miss_at_one_minus_alpha() {
        // Degenerate config: the "drifted" sets are stationary, so the miss
        // rate sits near 100 - 100 * alpha.
        let mut cfg = small_cfg(Family::UMean);
        cfg.delta = 0.0;
        cfg.n_drift_sets = 100;
        cfg.repetitions = 3;
        let result = run_trial(&cfg).unwrap();
        assert!(
            (result.type2_mean - 95.0).abs() < 6.0,
            "type2 = {}",
            result.type2_mean
        );
    }

    #[test]
    fn smaller_alpha_trades_type1_for_type2() {
        let mut strict = small_cfg(Family::OneGMean);
        strict.alpha = 0.01;
        let loose_result = run_trial(&small_cfg(Family::OneGMean)).unwrap();
        let strict_result = run_trial(&strict).unwrap();
        assert!(strict_result.type1_mean <= loose_result.type1_mean);
        assert!(strict_result.type2_mean >= loose_result.type2_mean);
    }

    #[test]
    fn sweep_single_size_matches_trial() {
        let cfg = small_cfg(Family::UMean);
        let sweep = run_training_size_sweep(&cfg, &[cfg.n_train]).unwrap();
        let direct = run_trial(&cfg).unwrap();
        assert_eq!(sweep[0].1.per_repetition, direct.per_repetition);
    }

    #[test]
    fn diagnostic_single_cluster_values_close() {
        let seeds: Vec<u64> = (0..5).collect();
        let (ei, plain) = run_partition_diagnostic(DiagnosticVariant::OneG, 9, &seeds).unwrap();
        assert!(ei < 0.1 && plain < 0.1, "ei = {ei}, plain = {plain}");
    }

    #[test]
    fn diagnostic_k1_is_zero() {
        let (ei, plain) = run_partition_diagnostic(DiagnosticVariant::ThreeG135, 1, &[0]).unwrap();
        assert_eq!(ei, 0.0);
        assert_eq!(plain, 0.0);
    }
}
