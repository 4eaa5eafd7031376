//! Reproducible random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for stream `stream` under `seed`; the stream depends only on
/// the pair, never on scheduling order.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream id for trajectory `index` of position instance `instance`.
pub fn trajectory_stream(instance: u64, index: u64) -> u64 {
    (instance << 32) | (index & 0xffff_ffff)
}
