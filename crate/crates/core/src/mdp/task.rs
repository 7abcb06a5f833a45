use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::CellConfig;

/// One learning task: a cell plus the demand band that shapes its reward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub task_id: u64,
    /// c_m: rate at which the normalized QoS is 0.
    pub demand_min_bps: f64,
    /// c_x: rate at which the normalized QoS is 1; also the state normalizer.
    pub demand_max_bps: f64,
    pub cell: CellConfig,
}

impl TaskSpec {
    pub fn new(task_id: u64, demand_min_bps: f64, demand_max_bps: f64, cell: CellConfig) -> Result<Self> {
        let task = Self {
            task_id,
            demand_min_bps,
            demand_max_bps,
            cell,
        };
        task.validate()?;
        Ok(task)
    }

    pub fn validate(&self) -> Result<()> {
        self.cell.validate()?;
        if !(self.demand_min_bps.is_finite() && self.demand_max_bps.is_finite()) {
            return Err(Error::config("task.demand", "demands must be finite"));
        }
        if self.demand_min_bps < 0.0 {
            return Err(Error::config("task.demand_min_bps", "must be nonnegative"));
        }
        if self.demand_min_bps >= self.demand_max_bps {
            return Err(Error::config("task.demand_min_bps", "must be below demand_max_bps"));
        }
        Ok(())
    }

    pub fn obs_dim(&self) -> usize {
        3 + 2 * self.cell.num_ues
    }

    pub fn action_dim(&self) -> usize {
        2 * self.cell.num_ues
    }
}
