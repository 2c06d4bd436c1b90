//! Seeded random streams.
//!
//! All sampling draws from ChaCha8. A run is identified by a `u64` seed; a
//! run split across `K` workers gives worker `w` the stream `w` of the same
//! key, so results depend on `(seed, K)` and nothing else.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream `stream` of the generator keyed by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Splits `total` work items over `workers` contiguous chunks; the first
/// `total % workers` chunks get one extra item.
pub fn split_work(total: u64, workers: usize) -> Vec<u64> {
    let workers = workers.max(1) as u64;
    (0..workers)
        .map(|w| total / workers + u64::from(w < total % workers))
        .collect()
}
