//! Seed derivation shared by every randomized routine.
//!
//! All randomness flows from a `u64` seed through [`child_seed`] into a
//! ChaCha8 stream. The child seed of `(seed, index)` is the SplitMix64
//! finalizer applied to `seed ^ splitmix64(index + 1)`, so results are
//! reproducible across machines and independent of thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type ProjectRng = ChaCha8Rng;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn child_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(1)))
}

pub fn rng_from_seed(seed: u64) -> ProjectRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn child_rng(seed: u64, index: u64) -> ProjectRng {
    rng_from_seed(child_seed(seed, index))
}
