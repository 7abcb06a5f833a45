//! Deep deterministic policy gradient: the per-task inner learner.

mod agent;
mod config;
mod learner;
mod replay;

pub use agent::{DdpgAgent, LossGradients};
pub use config::DdpgConfig;
pub use learner::{discounted_return, evaluate_policy, EpisodeStats, EvalReport, Learner};
pub use replay::{Batch, Partition, ReplayBuffer, Transition};
