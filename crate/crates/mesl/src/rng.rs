//! Deterministic per-trial random streams.
//!
//! ChaCha8 is a counter-based generator with 2⁶⁴ independent streams per
//! seed. Each Monte Carlo trial draws from stream `trial_index` of the base
//! seed, so ensemble results do not depend on execution order or thread
//! count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG for one trajectory: stream `stream` of `base_seed`.
pub fn trial_rng(base_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(stream);
    rng
}
