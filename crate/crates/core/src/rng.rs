//! Reproducible random streams.
//!
//! Every stochastic quantity in the crate is drawn from a ChaCha stream
//! addressed by `(seed, stream id)`. Distinct stream ids give independent
//! substreams of the same seed, so per-node and per-trial draws never depend
//! on iteration order or thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent substream `stream` of the generator seeded with `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Substream addressed by a pair of keys, e.g. (purpose, index).
pub fn stream2(seed: u64, a: u64, b: u64) -> ChaCha8Rng {
    stream(seed, mix(a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b))
}

/// SplitMix64 finalizer. Used to turn node inputs into pseudo-random words
/// inside deterministic rules.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a sequence of words into one mixed word.
pub fn mix_all(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x2545_F491_4F6C_DD1D, |acc, &w| mix(acc ^ mix(w)))
}
