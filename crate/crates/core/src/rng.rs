//! The one random generator type used across the crate.
//!
//! Every stochastic operation takes a `&mut SeededRng` (or a seed it turns into
//! one), so any experiment can be replayed from its recorded seed. Monte-Carlo
//! trial `t` of a run with base seed `s` always uses seed `s + t`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for trial `index` of a run with `base` seed.
pub fn trial_rng(base: u64, index: u64) -> SeededRng {
    seeded(base.wrapping_add(index))
}

/// An independent stream derived from the same seed, used where one trial
/// needs two uncorrelated sources (e.g. training data vs. evaluation samples).
pub fn substream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = seeded(seed);
    rng.set_stream(stream);
    rng
}
