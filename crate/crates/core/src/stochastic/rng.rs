//! Per-path random streams derived from a single master seed.
//!
//! Path `p` uses ChaCha8 keyed by the master seed with stream id `p`, so a
//! path's random numbers never depend on which thread simulates it or on how
//! many other paths are simulated.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn path_rng(master_seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(path);
    rng
}

/// Independent sub-seed for a named purpose (e.g. the second Wiener driver).
pub fn derive_seed(master_seed: u64, purpose: u64) -> u64 {
    // SplitMix64 finalizer: cheap, bijective and well mixed.
    let mut z = master_seed ^ purpose.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
