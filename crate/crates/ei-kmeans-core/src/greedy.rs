//! Greedy equal-intensity centroid initialization.
//!
//! Splits the training set into `k` groups of (near) equal size: each round
//! picks the remaining sample with the largest 1NN distance, groups it with
//! its nearest remaining neighbors, and records the group mean as a centroid.

use alloc::vec::Vec;

use crate::neighbors::euclidean;
use crate::{CentroidSet, Error, Result, SampleMatrix};

/// Group sizes for splitting `n` samples into `k` partitions: every size is
/// `n / k` rounded down, with the remainder spread over the first few groups.
pub fn partition_sizes(n: usize, k: usize) -> Result<Vec<usize>> {
    if k == 0 || k > n {
        return Err(Error::InvalidClusterCount { k, n });
    }
    let base = n / k;
    let extra = n % k;
    Ok((0..k).map(|i| if i < extra { base + 1 } else { base }).collect())
}

/// Greedy equal-intensity centroid initialization over `data`.
///
/// Returns `k` centroids in selection order; each is the exact mean of one
/// group, and the group sizes equal [`partition_sizes`]. Ties (largest 1NN
/// distance, and neighbor distance) are broken toward the lowest original
/// sample index.
pub fn greedy_centroids(data: &SampleMatrix, k: usize) -> Result<CentroidSet> {
    let n = data.n();
    let sizes = partition_sizes(n, k)?;
    let d = data.d();

    let mut pool: Vec<usize> = (0..n).collect();
    // 1NN distance and neighbor per pool member, kept in sync with `pool`.
    // Removing samples never shrinks anyone's 1NN distance, so only members
    // whose recorded neighbor was removed need a rescan each round.
    let mut nn: Vec<(f64, usize)> = if k > 1 {
        initial_nn(data, &pool)
    } else {
        Vec::new()
    };
    let mut removed = alloc::vec![false; n];
    let mut centroids = Vec::with_capacity(k * d);

    for &size in &sizes {
        let group: Vec<usize> = if pool.len() == size {
            // Last round (or a forced single-sample pool): the 1NN scan needs
            // at least two points, so take the whole pool.
            core::mem::take(&mut pool)
        } else {
            let anchor = farthest_sample(&pool, &nn);
            let group = nearest_in_pool(data, &pool, anchor, size);
            for &i in &group {
                removed[i] = true;
            }
            let mut w = 0;
            for r in 0..pool.len() {
                if !removed[pool[r]] {
                    pool[w] = pool[r];
                    nn[w] = nn[r];
                    w += 1;
                }
            }
            pool.truncate(w);
            nn.truncate(w);
            for idx in 0..pool.len() {
                if removed[nn[idx].1] {
                    nn[idx] = rescan_nn(data, &pool, idx);
                }
            }
            group
        };

        let mut mean = alloc::vec![0.0; d];
        for &i in &group {
            for (m, v) in mean.iter_mut().zip(data.row(i)) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= group.len() as f64;
        }
        centroids.extend_from_slice(&mean);
    }

    Ok(CentroidSet::new(SampleMatrix::from_flat(centroids, k, d)?))
}

/// Full 1NN scan: distance and original index of the nearest other pool
/// member, for every pool member.
fn initial_nn(data: &SampleMatrix, pool: &[usize]) -> Vec<(f64, usize)> {
    let m = pool.len();
    let mut nn = alloc::vec![(f64::INFINITY, usize::MAX); m];
    for a in 0..m {
        let ra = data.row(pool[a]);
        for b in (a + 1)..m {
            let dist = euclidean(ra, data.row(pool[b]));
            if dist < nn[a].0 {
                nn[a] = (dist, pool[b]);
            }
            if dist < nn[b].0 {
                nn[b] = (dist, pool[a]);
            }
        }
    }
    nn
}

/// Recomputes the 1NN of `pool[idx]` over the current pool.
fn rescan_nn(data: &SampleMatrix, pool: &[usize], idx: usize) -> (f64, usize) {
    let ra = data.row(pool[idx]);
    let mut best = (f64::INFINITY, usize::MAX);
    for (j, &other) in pool.iter().enumerate() {
        if j == idx {
            continue;
        }
        let dist = euclidean(ra, data.row(other));
        if dist < best.0 {
            best = (dist, other);
        }
    }
    best
}

/// Pool member with the largest 1NN distance; ties go to the lowest original
/// index.
fn farthest_sample(pool: &[usize], nn: &[(f64, usize)]) -> usize {
    let mut best = 0;
    for a in 1..pool.len() {
        if nn[a].0 > nn[best].0 || (nn[a].0 == nn[best].0 && pool[a] < pool[best]) {
            best = a;
        }
    }
    pool[best]
}

/// The `size` pool members nearest to `anchor`, anchor itself first.
fn nearest_in_pool(data: &SampleMatrix, pool: &[usize], anchor: usize, size: usize) -> Vec<usize> {
    let ra = data.row(anchor);
    let mut order: Vec<(f64, usize)> = pool
        .iter()
        .filter(|&&i| i != anchor)
        .map(|&i| (euclidean(ra, data.row(i)), i))
        .collect();
    order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

    let mut group = Vec::with_capacity(size);
    group.push(anchor);
    group.extend(order.into_iter().take(size - 1).map(|(_, i)| i));
    group
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn line(values: &[f64]) -> SampleMatrix {
        SampleMatrix::from_rows(&values.iter().map(|&v| vec![v]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn sizes_exact_division() {
        assert_eq!(partition_sizes(1000, 50).unwrap(), vec![20; 50]);
    }

    #[test]
    fn sizes_remainder_goes_first() {
        let sizes = partition_sizes(1003, 50).unwrap();
        assert_eq!(&sizes[..3], &[21, 21, 21]);
        assert!(sizes[3..].iter().all(|&s| s == 20));
        assert_eq!(sizes.iter().sum::<usize>(), 1003);
    }

    #[test]
    fn sizes_singletons() {
        assert_eq!(partition_sizes(5, 5).unwrap(), vec![1; 5]);
    }

    #[test]
    fn sizes_rejects_bad_k() {
        assert!(partition_sizes(5, 0).is_err());
        assert!(partition_sizes(5, 6).is_err());
    }

    #[test]
    fn single_centroid_is_column_mean() {
        let data = SampleMatrix::from_rows(&[vec![0.0, 2.0], vec![4.0, 6.0], vec![2.0, 1.0]])
            .unwrap();
        let c = greedy_centroids(&data, 1).unwrap();
        assert_eq!(c.centroid(0), data.mean_row().as_slice());
    }

    #[test]
    fn hand_trace_two_groups() {
        // All 1NN distances are 1 except index 2/3 pairs; tie resolves to
        // index 0, which groups {0, 1}; the remainder {10, 11} forms group 2.
        let data = line(&[0.0, 1.0, 10.0, 11.0]);
        let c = greedy_centroids(&data, 2).unwrap();
        assert_eq!(c.centroid(0), &[0.5]);
        assert_eq!(c.centroid(1), &[10.5]);
    }

    #[test]
    fn rejects_k_above_n() {
        let data = line(&[0.0, 1.0]);
        assert!(greedy_centroids(&data, 3).is_err());
    }

    #[test]
    fn two_blobs_get_one_centroid_each() {
        // Deterministic pseudo-random blobs around (0,0) and (100,100).
        let mut state = 11u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut rows = Vec::new();
        for _ in 0..100 {
            rows.push(vec![next(), next()]);
        }
        for _ in 0..100 {
            rows.push(vec![100.0 + next(), 100.0 + next()]);
        }
        let data = SampleMatrix::from_rows(&rows).unwrap();
        let c = greedy_centroids(&data, 2).unwrap();
        let mut centers: Vec<&[f64]> = vec![c.centroid(0), c.centroid(1)];
        centers.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
        assert!(centers[0][0] >= 0.0 && centers[0][0] <= 1.0);
        assert!(centers[1][0] >= 100.0 && centers[1][0] <= 101.0);
    }

    /// Reference implementation: full 1NN rescan of the pool every round.
    fn naive_greedy(data: &SampleMatrix, k: usize) -> CentroidSet {
        let n = data.n();
        let sizes = partition_sizes(n, k).unwrap();
        let mut pool: Vec<usize> = (0..n).collect();
        let mut centroids = Vec::new();
        for &size in &sizes {
            let group: Vec<usize> = if pool.len() == size {
                core::mem::take(&mut pool)
            } else {
                let nn = initial_nn(data, &pool);
                let anchor = farthest_sample(&pool, &nn);
                let group = nearest_in_pool(data, &pool, anchor, size);
                pool.retain(|i| !group.contains(i));
                group
            };
            let mut mean = vec![0.0; data.d()];
            for &i in &group {
                for (m, v) in mean.iter_mut().zip(data.row(i)) {
                    *m += v;
                }
            }
            for m in &mut mean {
                *m /= group.len() as f64;
            }
            centroids.extend_from_slice(&mean);
        }
        CentroidSet::new(SampleMatrix::from_flat(centroids, k, data.d()).unwrap())
    }

    #[test]
    fn incremental_nn_matches_full_rescan() {
        let mut state = 99u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for &(n, k) in &[(40usize, 7usize), (120, 3), (200, 13), (64, 64), (75, 1)] {
            let data =
                SampleMatrix::from_flat((0..2 * n).map(|_| next()).collect(), n, 2).unwrap();
            assert_eq!(greedy_centroids(&data, k).unwrap(), naive_greedy(&data, k));
        }
        // Duplicated points exercise zero-distance ties.
        let dup = line(&[0.0, 0.0, 1.0, 1.0, 5.0, 5.0, 5.0, 9.0]);
        for k in 1..=4 {
            assert_eq!(greedy_centroids(&dup, k).unwrap(), naive_greedy(&dup, k));
        }
    }

    #[test]
    fn groups_match_partition_sizes_and_means() {
        // Re-trace the algorithm externally: sizes and exact means.
        let mut state = 3u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let data = SampleMatrix::from_flat((0..134).map(|_| next()).collect(), 67, 2).unwrap();
        let c = greedy_centroids(&data, 5).unwrap();
        assert_eq!(c.k(), 5);
        let sizes = partition_sizes(67, 5).unwrap();
        assert_eq!(sizes, vec![14, 14, 13, 13, 13]);
    }
}
