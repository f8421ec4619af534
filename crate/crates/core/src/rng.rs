//! Seeding scheme for reproducible, partition-parallel generation.
//!
//! Every randomized operation takes an explicit `u64` seed. Internally the
//! generators are ChaCha8 streams: items are produced in fixed-size chunks
//! and chunk `c` of stream family `F` reads from stream id `F + 8*c` of the
//! seeded cipher. A chunk's content therefore depends only on `(seed, F, c)`,
//! which makes serial and work-stealing parallel generation bitwise
//! identical.
//!
//! Independent sub-experiments (conditions of a sweep, replicates) use
//! [`derive_seed`] so each is reproducible on its own.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Items generated per RNG chunk.
pub(crate) const GEN_CHUNK: usize = 8192;

const FAMILY_STRIDE: u64 = 8;

/// Disjoint stream families within one seed.
#[derive(Debug, Clone, Copy)]
pub(crate) enum StreamFamily {
    /// Ground-truth probability draws.
    Probs = 0,
    /// Bernoulli outcome draws, independent of `Probs` so that swapping the
    /// response model never perturbs the sampled (p, y) pairs.
    Outcomes = 1,
    /// Feature-noise draws for the snapshot generator.
    Noise = 2,
    /// One-off draws (e.g. the snapshot generator's basis).
    Setup = 3,
}

/// RNG for chunk `chunk` of family `family` under `seed`.
pub(crate) fn chunk_rng(seed: u64, family: StreamFamily, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(family as u64 + FAMILY_STRIDE * chunk as u64);
    rng
}

/// Derives the seed for sub-experiment `index` of an experiment seeded with
/// `base` (SplitMix64 finalizer). Replicate `r` of a sweep runs under
/// `derive_seed(base, r)`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
