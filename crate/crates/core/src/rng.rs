//! Seed handling.
//!
//! All randomness comes from ChaCha8 streams. A `(seed, stream)` pair names
//! an independent generator, so replications, restarts and sub-tasks can be
//! derived from one master seed without sharing state. Normal variates use
//! the ziggurat sampler of `rand_distr::StandardNormal`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Deterministic 64-bit sub-seed for a labelled task (splitmix64 finaliser).
pub fn sub_seed(seed: u64, label: u64, index: u64) -> u64 {
    let mut z = seed
        ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xBF58_476D_1CE4_E5B9).rotate_left(17);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
