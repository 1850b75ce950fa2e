//! Row-major sample storage shared by every stage of the pipeline.

use alloc::vec::Vec;

use crate::{Error, Result};

/// An `n x d` matrix of observations: `n` samples with `d` features each.
///
/// Every entry is finite; `n >= 1` and `d >= 1` hold by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    data: Vec<f64>,
    n: usize,
    d: usize,
}

impl SampleMatrix {
    /// Builds a matrix from a flat row-major buffer.
    pub fn from_flat(data: Vec<f64>, n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != n * d {
            return Err(Error::LengthMismatch {
                expected: n * d,
                found: data.len(),
            });
        }
        for (i, v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    row: i / d,
                    col: i % d,
                });
            }
        }
        Ok(Self { data, n, d })
    }

    /// Builds a matrix from equally sized rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let d = rows[0].len();
        for r in rows {
            if r.len() != d {
                return Err(Error::LengthMismatch {
                    expected: d,
                    found: r.len(),
                });
            }
        }
        let mut data = Vec::with_capacity(n * d);
        for r in rows {
            data.extend_from_slice(r);
        }
        Self::from_flat(data, n, d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Column-wise mean of all rows.
    pub fn mean_row(&self) -> Vec<f64> {
        let mut mean = alloc::vec![0.0; self.d];
        for i in 0..self.n {
            for (m, v) in mean.iter_mut().zip(self.row(i)) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= self.n as f64;
        }
        mean
    }

    /// New matrix holding the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(indices.len() * self.d);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self::from_flat(data, indices.len(), self.d)
    }
}

/// A set of `k` cluster centroids in `d` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidSet {
    points: SampleMatrix,
}

impl CentroidSet {
    pub fn new(points: SampleMatrix) -> Self {
        Self { points }
    }

    pub fn k(&self) -> usize {
        self.points.n()
    }

    pub fn d(&self) -> usize {
        self.points.d()
    }

    pub fn centroid(&self, k: usize) -> &[f64] {
        self.points.row(k)
    }

    pub fn as_matrix(&self) -> &SampleMatrix {
        &self.points
    }
}

/// Per-sample bin assignments against a `k`-bin partition.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelVector {
    labels: Vec<usize>,
    k: usize,
}

impl LabelVector {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::InvalidClusterCount { k: bad, n: k });
        }
        Ok(Self { labels, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }

    /// Samples per bin; sums to `len()`.
    pub fn bin_counts(&self) -> Vec<u64> {
        let mut counts = alloc::vec![0u64; self.k];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }
}
