//! Counter-style random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 generator keyed by a
//! user seed and selected by a stream id, so a task's output depends only on
//! `(seed, stream)` and never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn stream(seed: u64, id: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}
