//! Desk-scale O-RAN downlink resource-block and power allocation.
//!
//! The crate is layered bottom-up:
//!
//! - [`sim`]: one DU/RU cell with mobile UEs, traffic states, Rayleigh fading
//!   and background inter-cell interference; computes per-UE Shannon rates.
//! - [`mdp`]: observation encoding, continuous-action decoding into a
//!   feasible allocation, and the sigmoid-composed max-min reward.
//! - [`nn`]: dense tanh networks with reverse-mode gradients and Adam.
//! - [`ddpg`]: the actor-critic inner learner with replay and target networks.
//! - [`meta`]: first-order meta-training across tasks, adaptation to a new
//!   task, and the scratch / transfer / multi-task baselines.
//! - [`harness`]: configuration profiles, experiment driver, CSV metrics and
//!   summary statistics.

pub mod ddpg;
pub mod error;
pub mod harness;
pub mod mdp;
pub mod meta;
pub mod nn;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
