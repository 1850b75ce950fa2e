//! Deterministic seed derivation.
//!
//! Every generated dataset and every benchmark repetition owns a seed derived
//! from a base seed and a counter through a SplitMix64 finalizer, so runs are
//! reproducible and individual repetitions can be re-run in isolation.

/// Derives the `index`-th child seed of `base`.
pub fn derive(base: u64, index: u64) -> u64 {
    // SplitMix64 output function applied to base + index * golden gamma.
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e3779b97f4a7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
