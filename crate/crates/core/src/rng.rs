//! Seeding conventions.
//!
//! All randomized routines take a 64-bit seed and build a ChaCha8 counter
//! generator from it. Independent streams (one per chain or replicate) are
//! derived by setting the generator's stream field, so replicates can fan
//! out across workers without sharing state and results are reproducible
//! for any worker count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Base generator for a given seed (stream 0).
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream-split convention: stream id = `(kind << 32) | index`.
///
/// `kind` namespaces usage site (0 = generator retries, 1 = chains,
/// 2 = replicated experiments, 3 = samplers), `index` enumerates
/// chains/replicates within it.
pub fn rng_stream(seed: u64, kind: u32, index: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((kind as u64) << 32) | index as u64);
    rng
}
