//! Seed derivation and stream discipline.
//!
//! Reproducibility contract: every run is driven by ChaCha8 seeded with
//! `derive_run_seed(master_seed, run_id)`. Within a run, stream 0 feeds the
//! process itself (edge selection), stream 1 feeds checkpoint sampling, and
//! stream 2 feeds tracked-set selection, so observation never perturbs the
//! edge sequence.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Weyl increment used by SplitMix64.
pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 output mix.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-run seed: `splitmix64(master_seed ^ (run_id + 1) * GOLDEN_GAMMA)`.
pub fn derive_run_seed(master_seed: u64, run_id: u64) -> u64 {
    splitmix64(master_seed ^ run_id.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))
}

pub const STREAM_PROCESS: u64 = 0;
pub const STREAM_OBSERVER: u64 = 1;
pub const STREAM_TRACKING: u64 = 2;

/// ChaCha8 generator on the given stream of a run seed.
pub fn stream_rng(run_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    rng.set_stream(stream);
    rng
}
