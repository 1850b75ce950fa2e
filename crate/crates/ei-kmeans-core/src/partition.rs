//! Equal-intensity k-means space partitioning (the amplify-shrink fit).
//!
//! The fit starts from `K = n / beta` clusters, initializes them with the
//! greedy equal-intensity procedure, runs Lloyd's k-means, and then sweeps an
//! ascending grid of amplification strengths `theta`. Each cluster distance
//! is scaled by `exp(theta * (r - 1))` where `r` is the cluster's observed /
//! expected count ratio, so over-full clusters shrink and under-full clusters
//! grow. The first `theta` whose reassignment leaves at least `beta` samples
//! in every bin wins; otherwise `K` is reduced and the search repeats. If
//! nothing works down to `K = 2`, a random-init k-means with unit
//! coefficients is returned as a fallback.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::greedy::{greedy_centroids, partition_sizes};
use crate::kmeans::lloyd_kmeans;
use crate::neighbors::euclidean;
use crate::{CentroidSet, Error, LabelVector, Result, SampleMatrix};

/// Default minimum number of training samples per bin.
pub const DEFAULT_BETA: usize = 50;

/// Default amplification grid `{0, 0.05, ..., 1.5}`.
pub fn default_theta_grid() -> Vec<f64> {
    (0..=30).map(|i| i as f64 * 0.05).collect()
}

/// A fitted EI-kMeans histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionModel {
    /// Bin centroids.
    pub centroids: CentroidSet,
    /// Per-bin distance amplification coefficients (all 1 when `theta == 0`).
    pub coefficients: Vec<f64>,
    /// Training-sample count per bin; sums to the training set size.
    pub train_counts: Vec<u64>,
    /// Minimum-count constraint the fit targeted.
    pub beta: usize,
    /// Chosen amplification strength (0 on the fallback path).
    pub theta: f64,
    /// True when no `(K, theta)` satisfied the constraint and the model is a
    /// random-init k-means with unit coefficients.
    pub fallback: bool,
}

impl PartitionModel {
    pub fn new(
        centroids: CentroidSet,
        coefficients: Vec<f64>,
        train_counts: Vec<u64>,
        beta: usize,
        theta: f64,
        fallback: bool,
    ) -> Result<Self> {
        let k = centroids.k();
        if coefficients.len() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                found: coefficients.len(),
            });
        }
        if train_counts.len() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                found: train_counts.len(),
            });
        }
        if coefficients.iter().any(|&c| !(c > 0.0) || !c.is_finite()) {
            return Err(Error::InvalidParameter("coefficients must be positive"));
        }
        if !(theta >= 0.0) {
            return Err(Error::InvalidParameter("theta must be nonnegative"));
        }
        Ok(Self {
            centroids,
            coefficients,
            train_counts,
            beta,
            theta,
            fallback,
        })
    }

    pub fn k(&self) -> usize {
        self.centroids.k()
    }

    pub fn d(&self) -> usize {
        self.centroids.d()
    }

    /// Bin labels for `data` under this model's amplified assignment.
    pub fn assign(&self, data: &SampleMatrix) -> Result<LabelVector> {
        amplified_assign(data, &self.centroids, &self.coefficients)
    }
}

/// Entrywise observed / expected count ratio; 1 means the cluster holds
/// exactly its equal share.
pub fn intensity_vector(counts: &[u64], expected: &[usize]) -> Result<Vec<f64>> {
    if counts.len() != expected.len() {
        return Err(Error::LengthMismatch {
            expected: expected.len(),
            found: counts.len(),
        });
    }
    expected
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            if e == 0 {
                Err(Error::NonPositiveExpected(i))
            } else {
                Ok(counts[i] as f64 / e as f64)
            }
        })
        .collect()
}

/// Amplify coefficients `exp(theta * (r - 1))` for each intensity ratio `r`.
pub fn amplify_coefficients(intensity: &[f64], theta: f64) -> Vec<f64> {
    intensity
        .iter()
        .map(|&r| libm::exp(theta * (r - 1.0)))
        .collect()
}

/// Assignment under amplified distances: sample `i` gets the bin minimizing
/// `coefficients[k] * dist(i, centroid k)`, ties toward the lowest index.
pub fn amplified_assign(
    data: &SampleMatrix,
    centroids: &CentroidSet,
    coefficients: &[f64],
) -> Result<LabelVector> {
    if coefficients.len() != centroids.k() {
        return Err(Error::LengthMismatch {
            expected: centroids.k(),
            found: coefficients.len(),
        });
    }
    if data.d() != centroids.d() {
        return Err(Error::DimensionMismatch {
            expected: centroids.d(),
            found: data.d(),
        });
    }
    if coefficients.iter().any(|&c| !(c > 0.0)) {
        return Err(Error::InvalidParameter("coefficients must be positive"));
    }
    let mut labels = Vec::with_capacity(data.n());
    for i in 0..data.n() {
        let row = data.row(i);
        let mut best = 0;
        let mut best_dist = coefficients[0] * euclidean(row, centroids.centroid(0));
        for k in 1..centroids.k() {
            let dist = coefficients[k] * euclidean(row, centroids.centroid(k));
            if dist < best_dist {
                best = k;
                best_dist = dist;
            }
        }
        labels.push(best);
    }
    LabelVector::new(labels, centroids.k())
}

/// Population standard deviation of the per-bin sample intensity ratios
/// `counts[k] / n`.
pub fn intensity_stddev(counts: &[u64], n: u64) -> f64 {
    if counts.is_empty() || n == 0 {
        return 0.0;
    }
    let k = counts.len() as f64;
    let ratios: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let mean = ratios.iter().sum::<f64>() / k;
    let var = ratios.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / k;
    libm::sqrt(var)
}

fn validate_theta_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("theta grid must be nonempty"));
    }
    if grid[0] != 0.0 {
        return Err(Error::InvalidParameter("theta grid must start at 0"));
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) || !w[1].is_finite() {
            return Err(Error::InvalidParameter("theta grid must be ascending and finite"));
        }
    }
    Ok(())
}

fn single_bin_model(data: &SampleMatrix, beta: usize) -> Result<PartitionModel> {
    let centroid = SampleMatrix::from_flat(data.mean_row(), 1, data.d())?;
    PartitionModel::new(
        CentroidSet::new(centroid),
        alloc::vec![1.0],
        alloc::vec![data.n() as u64],
        beta,
        0.0,
        false,
    )
}

/// Fits the EI-kMeans histogram on `data`.
///
/// `rng_seed` only matters on the fallback path (random k-means init); the
/// whole fit is deterministic given the seed.
pub fn fit_partition(
    data: &SampleMatrix,
    beta: usize,
    theta_grid: &[f64],
    max_iter: usize,
    tol: f64,
    rng_seed: u64,
) -> Result<PartitionModel> {
    if beta == 0 {
        return Err(Error::InvalidParameter("beta must be at least 1"));
    }
    validate_theta_grid(theta_grid)?;

    let n = data.n();
    let k_init = (n / beta).max(1);
    if k_init == 1 {
        // Degenerate case: too few samples for two constrained bins. The
        // detector refuses single-bin models, but the fit itself succeeds.
        return single_bin_model(data, beta);
    }

    let mut k = k_init;
    while k > 1 {
        let init = greedy_centroids(data, k)?;
        let (centroids, labels) = lloyd_kmeans(data, &init, max_iter, tol)?;
        let counts = labels.bin_counts();
        let expected = partition_sizes(n, k)?;
        let intensity = intensity_vector(&counts, &expected)?;

        for &theta in theta_grid {
            let coefficients = amplify_coefficients(&intensity, theta);
            let labels = amplified_assign(data, &centroids, &coefficients)?;
            let counts = labels.bin_counts();
            if counts.iter().all(|&c| c as usize >= beta) {
                return PartitionModel::new(centroids, coefficients, counts, beta, theta, false);
            }
        }
        k -= 1;
    }

    // No (K, theta) satisfied the constraint: random-init k-means with the
    // initial K and unit coefficients.
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let picks = rand::seq::index::sample(&mut rng, n, k_init).into_vec();
    let init = CentroidSet::new(data.select_rows(&picks)?);
    let (centroids, labels) = lloyd_kmeans(data, &init, max_iter, tol)?;
    let counts = labels.bin_counts();
    PartitionModel::new(
        centroids,
        alloc::vec![1.0; k_init],
        counts,
        beta,
        0.0,
        true,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kmeans::{DEFAULT_MAX_ITER, DEFAULT_TOL};
    use alloc::vec;

    #[test]
    fn intensity_all_ones_when_balanced() {
        let v = intensity_vector(&[20, 20, 20], &[20, 20, 20]).unwrap();
        assert_eq!(v, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn intensity_direct_division() {
        let v = intensity_vector(&[100, 50, 50], &[66, 67, 67]).unwrap();
        assert!((v[0] - 100.0 / 66.0).abs() < 1e-12);
        assert!((v[1] - 50.0 / 67.0).abs() < 1e-12);
        assert!((v[2] - 50.0 / 67.0).abs() < 1e-12);
    }

    #[test]
    fn intensity_empty_cluster_is_zero() {
        assert_eq!(intensity_vector(&[0, 200], &[100, 100]).unwrap(), vec![0.0, 2.0]);
    }

    #[test]
    fn intensity_rejects_zero_expected() {
        assert!(intensity_vector(&[1], &[0]).is_err());
    }

    #[test]
    fn coefficients_theta_zero_all_ones() {
        assert_eq!(amplify_coefficients(&[0.3, 1.0, 2.5], 0.0), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn coefficients_unit_intensity_stays_one() {
        for theta in [0.1, 0.7, 1.5] {
            assert_eq!(amplify_coefficients(&[1.0], theta), vec![1.0]);
        }
    }

    #[test]
    fn coefficients_formula_evaluation() {
        let v = amplify_coefficients(&[2.0, 0.5], 1.0);
        assert!((v[0] - libm::exp(1.0)).abs() < 1e-12);
        assert!((v[1] - libm::exp(-0.5)).abs() < 1e-12);
    }

    fn line(values: &[f64]) -> SampleMatrix {
        SampleMatrix::from_rows(&values.iter().map(|&v| vec![v]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn amplified_assign_scalar_example() {
        let x = line(&[4.0]);
        let c = CentroidSet::new(line(&[0.0, 10.0]));
        let plain = amplified_assign(&x, &c, &[1.0, 1.0]).unwrap();
        assert_eq!(plain.as_slice(), &[0]);
        let skewed = amplified_assign(&x, &c, &[3.0, 1.0]).unwrap();
        assert_eq!(skewed.as_slice(), &[1]);
    }

    #[test]
    fn amplified_assign_scale_invariant() {
        let data = line(&[0.0, 2.0, 4.0, 9.0, 11.0]);
        let c = CentroidSet::new(line(&[1.0, 10.0]));
        let a = amplified_assign(&data, &c, &[1.0, 2.0]).unwrap();
        let b = amplified_assign(&data, &c, &[2.0, 4.0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn amplified_assign_length_mismatch() {
        let data = line(&[0.0]);
        let c = CentroidSet::new(line(&[0.0, 1.0]));
        assert!(amplified_assign(&data, &c, &[1.0]).is_err());
    }

    #[test]
    fn stddev_equal_counts_is_zero() {
        assert_eq!(intensity_stddev(&[10, 10, 10], 30), 0.0);
        assert_eq!(intensity_stddev(&[5], 5), 0.0);
    }

    #[test]
    fn stddev_experiment_split() {
        // Ratios {150, 450, 750} / 1350 = {0.1111, 0.3333, 0.5556}.
        let s = intensity_stddev(&[150, 450, 750], 1350);
        assert!((s - 0.18144368).abs() < 1e-6, "s = {s}");
    }

    #[test]
    fn single_bin_when_n_below_two_beta() {
        let data = line(&(0..60).map(|i| i as f64).collect::<Vec<_>>());
        let model =
            fit_partition(&data, 50, &default_theta_grid(), DEFAULT_MAX_ITER, DEFAULT_TOL, 0)
                .unwrap();
        assert_eq!(model.k(), 1);
        assert_eq!(model.train_counts, vec![60]);
        assert_eq!(model.coefficients, vec![1.0]);
        assert!(!model.fallback);
    }

    #[test]
    fn uniform_fit_satisfies_constraint() {
        let mut state = 99u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let data = SampleMatrix::from_flat((0..4000).map(|_| next()).collect(), 2000, 2).unwrap();
        let model =
            fit_partition(&data, 50, &default_theta_grid(), DEFAULT_MAX_ITER, DEFAULT_TOL, 7)
                .unwrap();
        assert!(!model.fallback);
        assert!(model.k() <= 40);
        assert!(model.train_counts.iter().all(|&c| c >= 50));
        assert_eq!(model.train_counts.iter().sum::<u64>(), 2000);
    }

    #[test]
    fn returned_theta_is_smallest_satisfying() {
        // Re-sweep the grid for the returned K and confirm no smaller theta
        // meets the constraint.
        let mut state = 5u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let data = SampleMatrix::from_flat((0..1600).map(|_| next()).collect(), 800, 2).unwrap();
        let grid = default_theta_grid();
        let model = fit_partition(&data, 50, &grid, DEFAULT_MAX_ITER, DEFAULT_TOL, 7).unwrap();
        assert!(!model.fallback);

        let init = greedy_centroids(&data, model.k()).unwrap();
        let (centroids, labels) = lloyd_kmeans(&data, &init, DEFAULT_MAX_ITER, DEFAULT_TOL).unwrap();
        assert_eq!(centroids, model.centroids);
        let expected = partition_sizes(800, model.k()).unwrap();
        let intensity = intensity_vector(&labels.bin_counts(), &expected).unwrap();
        for &theta in grid.iter().take_while(|&&t| t < model.theta) {
            let coef = amplify_coefficients(&intensity, theta);
            let counts = amplified_assign(&data, &centroids, &coef).unwrap().bin_counts();
            assert!(counts.iter().any(|&c| (c as usize) < 50));
        }
    }

    #[test]
    fn fit_is_deterministic() {
        let mut state = 123u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let data = SampleMatrix::from_flat((0..1000).map(|_| next()).collect(), 500, 2).unwrap();
        let grid = default_theta_grid();
        let a = fit_partition(&data, 50, &grid, DEFAULT_MAX_ITER, DEFAULT_TOL, 42).unwrap();
        let b = fit_partition(&data, 50, &grid, DEFAULT_MAX_ITER, DEFAULT_TOL, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_theta_grid() {
        let data = line(&[0.0, 1.0, 2.0]);
        assert!(fit_partition(&data, 1, &[], 10, 1e-6, 0).is_err());
        assert!(fit_partition(&data, 1, &[0.5, 1.0], 10, 1e-6, 0).is_err());
        assert!(fit_partition(&data, 1, &[0.0, 0.0], 10, 1e-6, 0).is_err());
    }
}
