//! Seed derivation for reproducible, independent random streams.
//!
//! Every run owns one 64-bit seed. Streams inside a run are split off with
//! [`mix`] so that environment activations, environment rewards and policy
//! randomness never share draws: adding randomness to a policy cannot shift
//! the environment's sequence.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used everywhere in the crate.
pub type StreamRng = ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Combines a parent seed with a stream index: `splitmix64(parent ^ splitmix64(index))`.
pub fn mix(parent: u64, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(index))
}

/// Seed of the `i`-th replicated run under `master`.
pub fn run_seed(master: u64, i: u64) -> u64 {
    mix(master, i)
}

/// Seeds of runs `0..count` under `master`.
pub fn run_seeds(master: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| run_seed(master, i)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Activation = 1,
    Reward = 2,
    Policy = 3,
    Instance = 4,
}

pub fn stream(seed: u64, which: Stream) -> StreamRng {
    StreamRng::seed_from_u64(mix(seed, which as u64))
}
