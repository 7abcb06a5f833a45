use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outer-loop schedule of meta-training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetaSchedule {
    /// T: number of meta-updates.
    pub outer_iterations: usize,
    /// T_e: episodes each task agent runs per outer iteration.
    pub episodes_per_iteration: usize,
    /// N_g: number of meta-training tasks.
    pub num_tasks: usize,
    /// Adam learning rate of the meta-update.
    pub meta_lr: f64,
}

impl Default for MetaSchedule {
    fn default() -> Self {
        Self {
            outer_iterations: 100,
            episodes_per_iteration: 10,
            num_tasks: 6,
            meta_lr: 1e-4,
        }
    }
}

impl MetaSchedule {
    /// T_new = round(0.1 T) adaptation episodes on a new task.
    pub fn adaptation_budget(&self) -> usize {
        (0.1 * self.outer_iterations as f64).round() as usize
    }

    pub fn validate_at(&self, prefix: &str) -> Result<()> {
        if self.episodes_per_iteration == 0 {
            return Err(Error::config(format!("{prefix}.episodes_per_iteration"), "must be at least 1"));
        }
        if self.num_tasks == 0 {
            return Err(Error::config(format!("{prefix}.num_tasks"), "must be at least 1"));
        }
        if !(self.meta_lr >= 0.0 && self.meta_lr.is_finite()) {
            return Err(Error::config(format!("{prefix}.meta_lr"), "must be a nonnegative number"));
        }
        Ok(())
    }
}
