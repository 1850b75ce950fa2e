//! Euclidean distances and exact nearest-neighbor primitives.
//!
//! Correctness is defined by the brute-force scan; distance ties are always
//! broken toward the lower sample index so every caller is deterministic.

use alloc::vec::Vec;

use crate::{Error, Result, SampleMatrix};

/// Euclidean distance between two equally long feature vectors.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let diff = x - y;
        acc += diff * diff;
    }
    libm::sqrt(acc)
}

/// Paired distance matrix between the rows of `a` and the rows of `b`,
/// returned row-major with shape `a.n() x b.n()`.
pub fn pairwise_distance(a: &SampleMatrix, b: &SampleMatrix) -> Result<Vec<f64>> {
    if a.d() != b.d() {
        return Err(Error::DimensionMismatch {
            expected: a.d(),
            found: b.d(),
        });
    }
    let mut out = Vec::with_capacity(a.n() * b.n());
    for i in 0..a.n() {
        let ri = a.row(i);
        for j in 0..b.n() {
            out.push(euclidean(ri, b.row(j)));
        }
    }
    Ok(out)
}

/// Distance from each sample to its nearest *other* sample.
pub fn nn_distances(data: &SampleMatrix) -> Result<Vec<f64>> {
    if data.n() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            found: data.n(),
        });
    }
    let n = data.n();
    let mut out = alloc::vec![f64::INFINITY; n];
    for i in 0..n {
        let ri = data.row(i);
        for j in (i + 1)..n {
            let dist = euclidean(ri, data.row(j));
            if dist < out[i] {
                out[i] = dist;
            }
            if dist < out[j] {
                out[j] = dist;
            }
        }
    }
    Ok(out)
}

/// Indices of the `k` samples nearest to `anchor_index`, the anchor itself
/// first (it is its own zero-distance neighbor), the rest ordered by
/// distance with ties broken by lower index.
pub fn knn_indices(anchor_index: usize, data: &SampleMatrix, k: usize) -> Result<Vec<usize>> {
    let n = data.n();
    if k == 0 || k > n {
        return Err(Error::InvalidClusterCount { k, n });
    }
    if anchor_index >= n {
        return Err(Error::InvalidParameter("anchor index out of bounds"));
    }
    let anchor = data.row(anchor_index);
    let mut order: Vec<(f64, usize)> = (0..n)
        .filter(|&i| i != anchor_index)
        .map(|i| (euclidean(anchor, data.row(i)), i))
        .collect();
    order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

    let mut out = Vec::with_capacity(k);
    out.push(anchor_index);
    out.extend(order.into_iter().take(k - 1).map(|(_, i)| i));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn line(values: &[f64]) -> SampleMatrix {
        SampleMatrix::from_rows(&values.iter().map(|&v| vec![v]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn pairwise_3_4_5_triangle() {
        let a = SampleMatrix::from_rows(&[vec![0.0, 0.0]]).unwrap();
        let b = SampleMatrix::from_rows(&[vec![3.0, 4.0]]).unwrap();
        assert_eq!(pairwise_distance(&a, &b).unwrap(), vec![5.0]);
    }

    #[test]
    fn pairwise_identity_is_zero() {
        let a = SampleMatrix::from_rows(&[vec![1.0, 2.0, 3.0]]).unwrap();
        assert_eq!(pairwise_distance(&a, &a).unwrap(), vec![0.0]);
    }

    #[test]
    fn pairwise_dimension_mismatch() {
        let a = SampleMatrix::from_rows(&[vec![0.0, 0.0]]).unwrap();
        let b = SampleMatrix::from_rows(&[vec![0.0]]).unwrap();
        assert!(pairwise_distance(&a, &b).is_err());
    }

    #[test]
    fn pairwise_matches_scalar_oracle() {
        // Brute-force double loop over a fixed pseudo-random 5x3 vs 4x3 pair.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let a = SampleMatrix::from_flat((0..15).map(|_| next()).collect(), 5, 3).unwrap();
        let b = SampleMatrix::from_flat((0..12).map(|_| next()).collect(), 4, 3).unwrap();
        let got = pairwise_distance(&a, &b).unwrap();
        for i in 0..5 {
            for j in 0..4 {
                let mut acc = 0.0;
                for c in 0..3 {
                    let diff = a.row(i)[c] - b.row(j)[c];
                    acc += diff * diff;
                }
                assert!((got[i * 4 + j] - libm::sqrt(acc)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn nn_distances_on_a_line() {
        assert_eq!(nn_distances(&line(&[0.0, 1.0, 3.0])).unwrap(), vec![1.0, 1.0, 2.0]);
    }

    #[test]
    fn nn_distances_duplicates_give_zero() {
        assert_eq!(nn_distances(&line(&[0.0, 0.0, 5.0])).unwrap(), vec![0.0, 0.0, 5.0]);
    }

    #[test]
    fn nn_distances_needs_two_samples() {
        assert!(nn_distances(&line(&[0.0])).is_err());
    }

    #[test]
    fn nn_distances_matches_brute_force() {
        let mut state = 42u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let data = SampleMatrix::from_flat((0..400).map(|_| next()).collect(), 200, 2).unwrap();
        let got = nn_distances(&data).unwrap();
        for i in 0..200 {
            let mut best = f64::INFINITY;
            for j in 0..200 {
                if i != j {
                    best = best.min(euclidean(data.row(i), data.row(j)));
                }
            }
            assert_eq!(got[i], best);
        }
    }

    #[test]
    fn knn_anchor_first() {
        let data = line(&[0.0, 1.0, 3.0]);
        assert_eq!(knn_indices(0, &data, 2).unwrap(), vec![0, 1]);
        assert_eq!(knn_indices(2, &data, 3).unwrap(), vec![2, 1, 0]);
    }

    #[test]
    fn knn_k_too_large() {
        let data = line(&[0.0, 1.0]);
        assert!(knn_indices(0, &data, 3).is_err());
    }

    #[test]
    fn knn_matches_full_sort_oracle() {
        let mut state = 7u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let data = SampleMatrix::from_flat((0..300).map(|_| next()).collect(), 100, 3).unwrap();
        let anchor = 17;
        let got = knn_indices(anchor, &data, 10).unwrap();
        let mut oracle: Vec<(f64, usize)> = (0..100)
            .map(|i| (euclidean(data.row(anchor), data.row(i)), i))
            .collect();
        oracle.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        // The anchor sorts first in the oracle too (distance 0, and ties on
        // index only matter against exact duplicates, absent here).
        let expect: Vec<usize> = oracle.into_iter().take(10).map(|(_, i)| i).collect();
        assert_eq!(got, expect);
    }
}
