//! Deterministic random streams.
//!
//! Every Monte Carlo trial draws from its own ChaCha stream, keyed by the
//! master seed and a stream id, so results never depend on execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream ids at or above this offset are reserved for threshold training.
pub const TRAINING_STREAM_OFFSET: u64 = 1 << 62;

pub type TrialRng = ChaCha8Rng;

/// Child generator for evaluation trial `trial`.
pub fn trial_rng(master_seed: u64, trial: u64) -> TrialRng {
    stream_rng(master_seed, trial)
}

/// Child generator for training draw `draw`; disjoint from every evaluation stream.
pub fn training_rng(master_seed: u64, draw: u64) -> TrialRng {
    stream_rng(master_seed, TRAINING_STREAM_OFFSET + draw)
}

fn stream_rng(master_seed: u64, stream: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}
