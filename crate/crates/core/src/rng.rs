//! Namespaced random streams.
//!
//! Every stochastic component draws from its own ChaCha stream whose seed is
//! derived from `(base seed, task id, purpose, index)`. Streams never share
//! state, so adding a method or a task leaves every other stream untouched.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// What a random stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    /// Network weight initialization.
    Init,
    /// Environment reset/dynamics for a training episode.
    TrainEnv,
    /// Environment reset/dynamics for an evaluation episode.
    EvalEnv,
    /// Exploration noise of a behaviour policy.
    Exploration,
    /// Replay-buffer minibatch sampling.
    Replay,
    /// Choice of the donor task for the multi-task baseline.
    DonorChoice,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Init => 0x11,
            Purpose::TrainEnv => 0x22,
            Purpose::EvalEnv => 0x33,
            Purpose::Exploration => 0x44,
            Purpose::Replay => 0x55,
            Purpose::DonorChoice => 0x66,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes the namespace components into a single 64-bit seed.
pub fn derive_seed(base: u64, task: u64, purpose: Purpose, index: u64) -> u64 {
    let mut h = splitmix64(base);
    h = splitmix64(h ^ task.wrapping_mul(0xD6E8_FEB8_6659_FD93));
    h = splitmix64(h ^ purpose.tag());
    splitmix64(h ^ index.wrapping_mul(0xA076_1D64_78BD_642F))
}

pub fn stream(base: u64, task: u64, purpose: Purpose, index: u64) -> SimRng {
    SimRng::seed_from_u64(derive_seed(base, task, purpose, index))
}
