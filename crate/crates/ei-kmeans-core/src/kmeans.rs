//! Lloyd's k-means iterations from a given initialization.

use alloc::vec::Vec;

use crate::neighbors::euclidean;
use crate::{CentroidSet, Error, LabelVector, Result, SampleMatrix};

pub const DEFAULT_MAX_ITER: usize = 100;
pub const DEFAULT_TOL: f64 = 1e-6;

/// Nearest-centroid assignment; ties go to the lowest centroid index.
pub fn assign_nearest(data: &SampleMatrix, centroids: &CentroidSet) -> Result<LabelVector> {
    if data.d() != centroids.d() {
        return Err(Error::DimensionMismatch {
            expected: centroids.d(),
            found: data.d(),
        });
    }
    let mut labels = Vec::with_capacity(data.n());
    for i in 0..data.n() {
        let row = data.row(i);
        let mut best = 0;
        let mut best_dist = euclidean(row, centroids.centroid(0));
        for k in 1..centroids.k() {
            let dist = euclidean(row, centroids.centroid(k));
            if dist < best_dist {
                best = k;
                best_dist = dist;
            }
        }
        labels.push(best);
    }
    LabelVector::new(labels, centroids.k())
}

/// Standard Lloyd iterations: assign to the nearest centroid, recompute
/// centroids as group means, stop when no centroid moves more than `tol`
/// or after `max_iter` rounds. An empty cluster is reseeded to the sample
/// farthest from its currently assigned centroid.
///
/// The returned labels are the nearest-centroid assignment against the
/// returned (final) centroids.
pub fn lloyd_kmeans(
    data: &SampleMatrix,
    init: &CentroidSet,
    max_iter: usize,
    tol: f64,
) -> Result<(CentroidSet, LabelVector)> {
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be at least 1"));
    }
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter("tol must be nonnegative"));
    }
    let k = init.k();
    if k > data.n() {
        return Err(Error::InvalidClusterCount { k, n: data.n() });
    }
    let d = data.d();
    let mut centroids = init.clone();

    for _ in 0..max_iter {
        let labels = assign_nearest(data, &centroids)?;

        let mut sums = alloc::vec![0.0; k * d];
        let mut counts = alloc::vec![0usize; k];
        for (i, &l) in labels.as_slice().iter().enumerate() {
            counts[l] += 1;
            for (s, v) in sums[l * d..(l + 1) * d].iter_mut().zip(data.row(i)) {
                *s += v;
            }
        }

        // Reseed empty clusters to the samples farthest from their assigned
        // centroids, one distinct sample per empty cluster.
        if counts.iter().any(|&c| c == 0) {
            let mut by_dist: Vec<(f64, usize)> = labels
                .as_slice()
                .iter()
                .enumerate()
                .map(|(i, &l)| (euclidean(data.row(i), centroids.centroid(l)), i))
                .collect();
            by_dist.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
            let mut next = by_dist.into_iter();
            for c in 0..k {
                if counts[c] == 0 {
                    let (_, i) = next
                        .next()
                        .ok_or(Error::InvalidClusterCount { k, n: data.n() })?;
                    sums[c * d..(c + 1) * d].copy_from_slice(data.row(i));
                    counts[c] = 1;
                }
            }
        }

        let mut moved = 0.0f64;
        let mut new_points = Vec::with_capacity(k * d);
        for c in 0..k {
            let mut mean = alloc::vec![0.0; d];
            for (m, s) in mean.iter_mut().zip(&sums[c * d..(c + 1) * d]) {
                *m = s / counts[c] as f64;
            }
            moved = moved.max(euclidean(&mean, centroids.centroid(c)));
            new_points.extend_from_slice(&mean);
        }
        centroids = CentroidSet::new(SampleMatrix::from_flat(new_points, k, d)?);

        if moved <= tol {
            break;
        }
    }

    let labels = assign_nearest(data, &centroids)?;
    Ok((centroids, labels))
}
