//! The allocation MDP on top of the cell simulator.
//!
//! Observation: normalized (Q_a, Q_m, Q_x) of active UEs followed by the
//! previous per-UE RB requests and power levels. Action: a raw vector in
//! [-1, 1]^{2N} decoded into RB counts and per-UE power. Reward: a sigmoid of
//! the normalized minimum rate minus sigmoids of the power and RB penalties.

mod action;
mod env;
mod reward;
mod state;
mod task;

pub use action::{compute_penalties, decode_action, Penalties};
pub use env::{CellEnv, StepOutcome, DECISION_INTERVAL_S};
pub use reward::{compute_reward, reward_from_terms, sigmoid};
pub use state::{encode_state, qos_stats, MdpState, QosStats};
pub use task::TaskSpec;

pub use crate::sim::AllocationAction;
