use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Agent hyperparameters shared by every learner in an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DdpgConfig {
    /// Hidden layer widths used for both actor and critic.
    pub hidden_sizes: Vec<usize>,
    pub gamma: f64,
    pub tau: f64,
    pub actor_lr: f64,
    pub critic_lr: f64,
    pub batch_size: usize,
    pub buffer_capacity: usize,
    /// Initial std of the Gaussian exploration noise.
    pub noise_std: f64,
    /// Multiplicative decay applied after each training episode.
    pub noise_decay: f64,
    pub noise_floor: f64,
    /// Steps per episode.
    pub horizon: usize,
    /// Greedy evaluation episodes per recorded shot.
    pub eval_episodes: usize,
}

impl Default for DdpgConfig {
    fn default() -> Self {
        Self {
            hidden_sizes: vec![300, 400, 400],
            gamma: 0.99,
            tau: 0.005,
            actor_lr: 1e-4,
            critic_lr: 1e-4,
            batch_size: 128,
            buffer_capacity: 100_000,
            noise_std: 0.2,
            noise_decay: 0.999,
            noise_floor: 0.02,
            horizon: 200,
            eval_episodes: 1,
        }
    }
}

impl DdpgConfig {
    pub fn validate_at(&self, prefix: &str) -> Result<()> {
        let err = |field: &str, reason: &str| Err(Error::config(format!("{prefix}.{field}"), reason));
        if self.hidden_sizes.contains(&0) {
            return err("hidden_sizes", "layer widths must be positive");
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return err("gamma", "must lie in [0, 1)");
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return err("tau", "must lie in [0, 1]");
        }
        if !(self.actor_lr >= 0.0 && self.actor_lr.is_finite()) {
            return err("actor_lr", "must be a nonnegative number");
        }
        if !(self.critic_lr >= 0.0 && self.critic_lr.is_finite()) {
            return err("critic_lr", "must be a nonnegative number");
        }
        if self.batch_size == 0 {
            return err("batch_size", "must be positive");
        }
        if self.buffer_capacity < 2 * self.batch_size {
            return err("buffer_capacity", "must hold at least two batches");
        }
        if !(self.noise_std >= 0.0 && self.noise_floor >= 0.0) {
            return err("noise_std", "noise levels must be nonnegative");
        }
        if !(0.0..=1.0).contains(&self.noise_decay) {
            return err("noise_decay", "must lie in [0, 1]");
        }
        if self.eval_episodes == 0 {
            return err("eval_episodes", "must be at least 1");
        }
        Ok(())
    }
}
