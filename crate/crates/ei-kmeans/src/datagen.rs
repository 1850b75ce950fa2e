//! Seeded synthetic data generators for the drift benchmark: the six
//! two-dimensional drift families, the three cluster-ratio diagnostic sets,
//! and high-dimensional padding.

use ei_kmeans_core::SampleMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataGenError {
    #[error("covariance matrix is not symmetric positive definite")]
    NotSpd,
    #[error("unknown family name: {0}")]
    UnknownFamily(String),
    #[error("mixture weights must be positive and sum to 1")]
    BadWeights,
    #[error("delta must be nonnegative, got {0}")]
    NegativeDelta(f64),
    #[error("total_dims must be at least 2, got {0}")]
    TooFewDims(usize),
    #[error("sample matrix: {0}")]
    Matrix(#[from] ei_kmeans_core::Error),
}

pub type Result<T> = std::result::Result<T, DataGenError>;

/// Synthetic distribution families. The two-dimensional parameterizations
/// with drift margin `delta`:
///
/// * `UMean`: uniform on `[delta, 1 + delta]^2` (mean shifted by `delta`)
/// * `OneGMean`: `N([delta, 0], I)`
/// * `OneGVar`: `N([delta, 0], (1 + delta) I)`
/// * `OneGCov`: `N([delta, 0], [[1, delta], [delta, 1]])`
/// * `TwoGMean`: equal mix of `N([0, 0], I)` and `N([delta, 0], I)`
/// * `FourGMean`: equal mix of unit Gaussians at `[0,0]`, `[5,0]`, `[0,5]`,
///   `[5 - delta, 5]`
/// * `CustomMixture`: unit Gaussians at the given means, weighted
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    UMean,
    OneGMean,
    OneGVar,
    OneGCov,
    TwoGMean,
    FourGMean,
    CustomMixture { means: Vec<Vec<f64>> },
}

impl Family {
    /// Drift margin used in the reference benchmark for each named family.
    pub fn default_delta(&self) -> f64 {
        match self {
            Family::UMean => 0.06,
            Family::OneGMean => 0.3,
            Family::OneGVar => 0.2,
            Family::OneGCov => 0.2,
            Family::TwoGMean => 0.4,
            Family::FourGMean => 0.8,
            Family::CustomMixture { .. } => 0.0,
        }
    }

    /// Parses the benchmark dataset names (`2d-1G-mean` etc.).
    pub fn parse(name: &str) -> Result<Self> {
        match name.trim_start_matches("2d-") {
            "U-mean" => Ok(Family::UMean),
            "1G-mean" => Ok(Family::OneGMean),
            "1G-var" => Ok(Family::OneGVar),
            "1G-cov" => Ok(Family::OneGCov),
            "2G-mean" => Ok(Family::TwoGMean),
            "4G-mean" => Ok(Family::FourGMean),
            other => Err(DataGenError::UnknownFamily(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::UMean => "2d-U-mean",
            Family::OneGMean => "2d-1G-mean",
            Family::OneGVar => "2d-1G-var",
            Family::OneGCov => "2d-1G-cov",
            Family::TwoGMean => "2d-2G-mean",
            Family::FourGMean => "2d-4G-mean",
            Family::CustomMixture { .. } => "custom-mixture",
        }
    }
}

/// A fully specified generator invocation.
#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    pub family: Family,
    /// Drift margin; ignored (treated as 0) when `drifted` is false.
    pub delta: f64,
    pub drifted: bool,
    pub n: usize,
    /// Independent `N(0, 1)` columns appended after the base features.
    pub extra_dims: usize,
    /// Component weights for `CustomMixture`; `None` means equal weights.
    pub weights: Option<Vec<f64>>,
    /// Keeps the mean at the origin on the variance/covariance drift rows,
    /// which otherwise shift the mean by `delta` as well.
    pub suppress_mean_shift: bool,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        let delta = family.default_delta();
        Self {
            family,
            delta,
            drifted: false,
            n,
            extra_dims: 0,
            weights: None,
            suppress_mean_shift: false,
            seed,
        }
    }

    pub fn drifted(mut self, drifted: bool) -> Self {
        self.drifted = drifted;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_extra_dims(mut self, extra_dims: usize) -> Self {
        self.extra_dims = extra_dims;
        self
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
fn cholesky(cov: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let d = cov.len();
    for row in cov {
        if row.len() != d {
            return Err(DataGenError::NotSpd);
        }
    }
    for i in 0..d {
        for j in 0..d {
            if (cov[i][j] - cov[j][i]).abs() > 1e-12 {
                return Err(DataGenError::NotSpd);
            }
        }
    }
    let mut l = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..=i {
            let mut sum = cov[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(DataGenError::NotSpd);
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Ok(l)
}

fn gaussian_rows(
    rng: &mut ChaCha8Rng,
    n: usize,
    mean: &[f64],
    chol: &[Vec<f64>],
) -> Vec<Vec<f64>> {
    let d = mean.len();
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let z: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let mut row = Vec::with_capacity(d);
        for i in 0..d {
            let mut v = mean[i];
            for k in 0..=i {
                v += chol[i][k] * z[k];
            }
            row.push(v);
        }
        rows.push(row);
    }
    rows
}

/// `n` i.i.d. draws from `N(mean, cov)`; deterministic given `seed`.
pub fn gen_gaussian(n: usize, mean: &[f64], cov: &[Vec<f64>], seed: u64) -> Result<SampleMatrix> {
    let chol = cholesky(cov)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(SampleMatrix::from_rows(&gaussian_rows(&mut rng, n, mean, &chol))?)
}

fn identity(d: usize) -> Vec<Vec<f64>> {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Component sizes for an exact (non-multinomial) integer split of `n` by
/// `weights`, remainders spread over the earliest components.
fn exact_split(n: usize, weights: &[f64]) -> Result<Vec<usize>> {
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|&w| w <= 0.0) || (sum - 1.0).abs() > 1e-9 {
        return Err(DataGenError::BadWeights);
    }
    let mut sizes: Vec<usize> = weights.iter().map(|w| (w * n as f64).floor() as usize).collect();
    let mut assigned: usize = sizes.iter().sum();
    let mut i = 0;
    let len = sizes.len();
    while assigned < n {
        sizes[i % len] += 1;
        assigned += 1;
        i += 1;
    }
    Ok(sizes)
}

/// Generates the dataset described by `spec`. Mixture components are drawn
/// in fixed order with exact integer sizes, then the rows are shuffled by the
/// seeded RNG so row order carries no signal.
pub fn gen_dataset(spec: &GeneratorSpec) -> Result<SampleMatrix> {
    if spec.delta < 0.0 {
        return Err(DataGenError::NegativeDelta(spec.delta));
    }
    let delta = if spec.drifted { spec.delta } else { 0.0 };
    let mean_delta = if spec.suppress_mean_shift { 0.0 } else { delta };
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;

    let mut rows: Vec<Vec<f64>> = match &spec.family {
        Family::UMean => (0..n)
            .map(|_| {
                let x1: f64 = rng.random::<f64>() + delta;
                let x2: f64 = rng.random::<f64>() + delta;
                vec![x1, x2]
            })
            .collect(),
        Family::OneGMean => {
            gaussian_rows(&mut rng, n, &[delta, 0.0], &cholesky(&identity(2))?)
        }
        Family::OneGVar => {
            let cov = vec![vec![1.0 + delta, 0.0], vec![0.0, 1.0 + delta]];
            gaussian_rows(&mut rng, n, &[mean_delta, 0.0], &cholesky(&cov)?)
        }
        Family::OneGCov => {
            let cov = vec![vec![1.0, delta], vec![delta, 1.0]];
            gaussian_rows(&mut rng, n, &[mean_delta, 0.0], &cholesky(&cov)?)
        }
        Family::TwoGMean => {
            let sizes = exact_split(n, &[0.5, 0.5])?;
            let chol = cholesky(&identity(2))?;
            let mut rows = gaussian_rows(&mut rng, sizes[0], &[0.0, 0.0], &chol);
            rows.extend(gaussian_rows(&mut rng, sizes[1], &[delta, 0.0], &chol));
            rows
        }
        Family::FourGMean => {
            let sizes = exact_split(n, &[0.25; 4])?;
            let chol = cholesky(&identity(2))?;
            let means = [
                [0.0, 0.0],
                [5.0, 0.0],
                [0.0, 5.0],
                [5.0 - delta, 5.0],
            ];
            let mut rows = Vec::with_capacity(n);
            for (mean, &size) in means.iter().zip(&sizes) {
                rows.extend(gaussian_rows(&mut rng, size, mean, &chol));
            }
            rows
        }
        Family::CustomMixture { means } => {
            if means.is_empty() {
                return Err(DataGenError::BadWeights);
            }
            let d = means[0].len();
            let equal = vec![1.0 / means.len() as f64; means.len()];
            let weights = spec.weights.as_deref().unwrap_or(&equal);
            if weights.len() != means.len() {
                return Err(DataGenError::BadWeights);
            }
            let sizes = exact_split(n, weights)?;
            let chol = cholesky(&identity(d))?;
            let mut rows = Vec::with_capacity(n);
            for (mean, &size) in means.iter().zip(&sizes) {
                rows.extend(gaussian_rows(&mut rng, size, mean, &chol));
            }
            rows
        }
    };

    for row in &mut rows {
        for _ in 0..spec.extra_dims {
            row.push(rng.sample(StandardNormal));
        }
    }
    rows.shuffle(&mut rng);
    Ok(SampleMatrix::from_rows(&rows)?)
}

/// Cluster-ratio diagnostic variants: one Gaussian, or three Gaussians at
/// `[-5,0]`, `[0,0]`, `[5,0]` with 1:1:1 or 1:3:5 sample ratios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticVariant {
    OneG,
    ThreeG111,
    ThreeG135,
}

impl DiagnosticVariant {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "1G" => Ok(Self::OneG),
            "3G-111" => Ok(Self::ThreeG111),
            "3G-135" => Ok(Self::ThreeG135),
            other => Err(DataGenError::UnknownFamily(other.to_string())),
        }
    }
}

/// The 1350-sample partition-diagnostic sets.
pub fn gen_experiment1_sets(variant: DiagnosticVariant, seed: u64) -> Result<SampleMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chol = cholesky(&identity(2))?;
    let rows = match variant {
        DiagnosticVariant::OneG => gaussian_rows(&mut rng, 1350, &[0.0, 0.0], &chol),
        DiagnosticVariant::ThreeG111 | DiagnosticVariant::ThreeG135 => {
            let sizes = if variant == DiagnosticVariant::ThreeG111 {
                [450, 450, 450]
            } else {
                [150, 450, 750]
            };
            let means = [[-5.0, 0.0], [0.0, 0.0], [5.0, 0.0]];
            let mut rows = Vec::with_capacity(1350);
            for (mean, &size) in means.iter().zip(&sizes) {
                rows.extend(gaussian_rows(&mut rng, size, mean, &chol));
            }
            rows
        }
    };
    Ok(SampleMatrix::from_rows(&rows)?)
}

/// Base families usable for high-dimensional padding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HighDimBase {
    OneGMean,
    FourGMean,
}

/// High-dimensional variant: the first two columns follow the base family
/// (drift margin 0.5 for `OneGMean`, 1.0 for `FourGMean`); the remaining
/// columns are independent `N(0, 1)` padding.
pub fn gen_highdim(
    base: HighDimBase,
    total_dims: usize,
    drifted: bool,
    n: usize,
    seed: u64,
) -> Result<SampleMatrix> {
    if total_dims < 2 {
        return Err(DataGenError::TooFewDims(total_dims));
    }
    let (family, delta) = match base {
        HighDimBase::OneGMean => (Family::OneGMean, 0.5),
        HighDimBase::FourGMean => (Family::FourGMean, 1.0),
    };
    let mut spec = GeneratorSpec::new(family, n, seed)
        .drifted(drifted)
        .with_delta(delta);
    spec.extra_dims = total_dims - 2;
    gen_dataset(&spec)
}
