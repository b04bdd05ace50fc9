//! Seeded random streams.
//!
//! Every random consumer derives its generator from a `(seed, stream)` pair so
//! that work split across threads gives the same result as a serial run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Number of samples handled by one independent stream in sampled executors.
pub const SAMPLES_PER_STREAM: u64 = 1 << 14;

/// Splits `n` samples into `(stream_index, count)` chunks.
pub fn chunks(n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut done = 0;
    let mut idx = 0;
    while done < n {
        let c = SAMPLES_PER_STREAM.min(n - done);
        out.push((idx, c));
        done += c;
        idx += 1;
    }
    out
}
