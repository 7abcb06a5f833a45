use rand::SeedableRng;

use super::action::decode_action;
use super::reward::compute_reward;
use super::state::{encode_state, qos_stats, MdpState, QosStats};
use super::task::TaskSpec;
use crate::error::Result;
use crate::rng::SimRng;
use crate::sim::{
    compute_rates, reset_with, sample_channel, step_mobility, step_traffic, AllocationAction, EnvSnapshot,
    RateReport,
};

/// Seconds of simulated time per decision step.
pub const DECISION_INTERVAL_S: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub observation: Vec<f64>,
    pub reward: f64,
    pub qos: QosStats,
    pub alloc: AllocationAction,
    pub report: RateReport,
}

/// Step-wise environment for one task.
///
/// Each `step` runs mobility, traffic, a fresh channel draw, action decoding,
/// rate computation and the reward, in that order. The returned observation
/// summarizes the step just taken.
#[derive(Debug, Clone)]
pub struct CellEnv {
    task: TaskSpec,
    snapshot: EnvSnapshot,
    rng: SimRng,
    state: MdpState,
}

impl CellEnv {
    pub fn new(task: TaskSpec, seed: u64) -> Result<Self> {
        task.validate()?;
        let mut rng = SimRng::seed_from_u64(seed);
        let snapshot = reset_with(&task.cell, &mut rng)?;
        let state = Self::initial_state(&task, &snapshot);
        Ok(Self {
            task,
            snapshot,
            rng,
            state,
        })
    }

    /// Restarts the episode from `seed` and returns the first observation.
    pub fn reset(&mut self, seed: u64) -> Result<Vec<f64>> {
        self.rng = SimRng::seed_from_u64(seed);
        self.snapshot = reset_with(&self.task.cell, &mut self.rng)?;
        self.state = Self::initial_state(&self.task, &self.snapshot);
        Ok(self.observation())
    }

    fn initial_state(task: &TaskSpec, snapshot: &EnvSnapshot) -> MdpState {
        let n = task.cell.num_ues;
        let empty = RateReport {
            per_ue_rate: vec![0.0; n],
            min_rate: snapshot.active_mask().contains(&true).then_some(0.0),
            interference: vec![],
            sinr: vec![],
            active: snapshot.active_mask(),
        };
        encode_state(&empty, &AllocationAction::empty(&task.cell), task)
    }

    pub fn task(&self) -> &TaskSpec {
        &self.task
    }

    pub fn snapshot(&self) -> &EnvSnapshot {
        &self.snapshot
    }

    pub fn observation(&self) -> Vec<f64> {
        self.state.to_vec()
    }

    pub fn obs_dim(&self) -> usize {
        self.task.obs_dim()
    }

    pub fn action_dim(&self) -> usize {
        self.task.action_dim()
    }

    pub fn step(&mut self, raw_action: &[f64]) -> Result<StepOutcome> {
        let cell = &self.task.cell;
        step_mobility(&mut self.snapshot, cell, DECISION_INTERVAL_S, &mut self.rng);
        step_traffic(&mut self.snapshot, cell, &mut self.rng);
        let channel = sample_channel(&self.snapshot, cell, &mut self.rng);
        let alloc = decode_action(raw_action, &self.snapshot.active_mask(), cell)?;
        let report = compute_rates(&alloc, &channel, &self.snapshot, cell)?;
        let reward = compute_reward(&report, &alloc, &self.task)?;
        self.state = encode_state(&report, &alloc, &self.task);
        Ok(StepOutcome {
            observation: self.state.to_vec(),
            reward,
            qos: qos_stats(&report, &self.task),
            alloc,
            report,
        })
    }
}
