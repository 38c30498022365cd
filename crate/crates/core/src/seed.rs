//! Deterministic seed derivation for trial-level parallelism.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for trial `index` of a campaign rooted at `root`. Independent of
/// scheduling order.
pub fn trial_seed(root: u64, index: u64) -> u64 {
    mix(root.wrapping_add(mix(index.wrapping_add(0x9e37_79b9_7f4a_7c15))))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
