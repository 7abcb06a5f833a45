use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ddpg::DdpgConfig;
use crate::error::{Error, Result};
use crate::mdp::TaskSpec;
use crate::meta::MetaSchedule;
use crate::sim::CellConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// Per-task overrides on top of the shared cell block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskEntry {
    pub task_id: u64,
    pub num_rbs: usize,
    pub demand_min_bps: f64,
    pub demand_max_bps: f64,
}

impl TaskEntry {
    pub fn spec(&self, cell: &CellConfig) -> TaskSpec {
        TaskSpec {
            task_id: self.task_id,
            demand_min_bps: self.demand_min_bps,
            demand_max_bps: self.demand_max_bps,
            cell: CellConfig {
                num_rbs: self.num_rbs,
                ..cell.clone()
            },
        }
    }

    fn validate_at(&self, prefix: &str, cell: &CellConfig) -> Result<()> {
        let err = |field: &str, reason: &str| Err(Error::config(format!("{prefix}.{field}"), reason));
        if self.num_rbs == 0 {
            return err("num_rbs", "must be positive");
        }
        if !(self.demand_min_bps.is_finite() && self.demand_min_bps >= 0.0) {
            return err("demand_min_bps", "must be a nonnegative number");
        }
        if !(self.demand_max_bps.is_finite() && self.demand_max_bps > self.demand_min_bps) {
            return err("demand_max_bps", "must exceed demand_min_bps");
        }
        self.spec(cell).validate().map_err(|e| e.context(prefix.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineConfig {
    /// Training episodes of the transfer-learning donor agent.
    pub donor_episodes: usize,
    /// Task id (from `tasks`) whose trained agent seeds the TL baseline.
    pub tl_donor: u64,
}

/// Everything needed to run one experiment. Loaded from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub profile: String,
    #[serde(default)]
    pub seeds: Vec<u64>,
    pub out_dir: PathBuf,
    /// Shared cell parameters; each task overrides `num_rbs`.
    pub cell: CellConfig,
    pub tasks: Vec<TaskEntry>,
    pub new_task: TaskEntry,
    pub schedule: MetaSchedule,
    pub agent: DdpgConfig,
    pub baselines: BaselineConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::paper()
    }
}

impl ExperimentConfig {
    /// Full-size setup: 30 UEs, six tasks over K ∈ {60, 80, 100} and two demand levels.
    pub fn paper() -> Self {
        let entry = |task_id, num_rbs, demand_min_bps| TaskEntry {
            task_id,
            num_rbs,
            demand_min_bps,
            demand_max_bps: 10e6,
        };
        let mut tasks = Vec::new();
        for (i, k) in [60, 80, 100].into_iter().enumerate() {
            tasks.push(entry(2 * i as u64, k, 1e6));
            tasks.push(entry(2 * i as u64 + 1, k, 3e6));
        }
        Self {
            schema_version: SCHEMA_VERSION,
            profile: "paper".into(),
            seeds: vec![0, 1, 2, 3, 4],
            out_dir: "runs/paper".into(),
            cell: CellConfig::default(),
            tasks,
            new_task: entry(6, 80, 2e6),
            schedule: MetaSchedule::default(),
            agent: DdpgConfig::default(),
            baselines: BaselineConfig {
                donor_episodes: 100,
                tl_donor: 2,
            },
        }
    }

    /// Desk-scale setup: 5 UEs, three tasks over K ∈ {8, 10, 12}, 20 adaptation episodes.
    pub fn toy() -> Self {
        let entry = |task_id, num_rbs, demand_min_bps| TaskEntry {
            task_id,
            num_rbs,
            demand_min_bps,
            demand_max_bps: 1e6,
        };
        Self {
            schema_version: SCHEMA_VERSION,
            profile: "toy".into(),
            seeds: vec![0, 1, 2, 3, 4],
            out_dir: "runs/toy".into(),
            cell: CellConfig {
                num_ues: 5,
                num_rbs: 10,
                ..CellConfig::default()
            },
            tasks: vec![entry(0, 8, 0.2e6), entry(1, 10, 0.4e6), entry(2, 12, 0.6e6)],
            new_task: entry(3, 10, 0.3e6),
            schedule: MetaSchedule {
                outer_iterations: 200,
                episodes_per_iteration: 2,
                num_tasks: 3,
                meta_lr: 1e-3,
            },
            agent: DdpgConfig {
                hidden_sizes: vec![64, 64],
                actor_lr: 1e-4,
                critic_lr: 1e-3,
                batch_size: 32,
                horizon: 10,
                eval_episodes: 5,
                ..DdpgConfig::default()
            },
            baselines: BaselineConfig {
                donor_episodes: 100,
                tl_donor: 1,
            },
        }
    }

    pub fn profile(name: &str) -> Result<Self> {
        match name {
            "toy" => Ok(Self::toy()),
            "paper" => Ok(Self::paper()),
            other => Err(Error::config("profile", format!("unknown profile `{other}` (expected toy or paper)"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::config(
                "schema_version",
                format!("unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version),
            ));
        }
        if self.seeds.is_empty() {
            return Err(Error::config("seeds", "at least one seed is required"));
        }
        self.cell.validate_at("cell")?;
        self.schedule.validate_at("schedule")?;
        self.agent.validate_at("agent")?;
        if self.tasks.len() != self.schedule.num_tasks {
            return Err(Error::config(
                "tasks",
                format!("{} tasks listed but schedule.num_tasks = {}", self.tasks.len(), self.schedule.num_tasks),
            ));
        }
        let mut ids = BTreeSet::new();
        for (i, t) in self.tasks.iter().enumerate() {
            t.validate_at(&format!("tasks[{i}]"), &self.cell)?;
            if !ids.insert(t.task_id) {
                return Err(Error::config(format!("tasks[{i}].task_id"), "duplicate task id"));
            }
        }
        self.new_task.validate_at("new_task", &self.cell)?;
        if ids.contains(&self.new_task.task_id) {
            return Err(Error::config("new_task.task_id", "must differ from every meta-training task"));
        }
        if !ids.contains(&self.baselines.tl_donor) {
            return Err(Error::config("baselines.tl_donor", "must name one of the meta-training tasks"));
        }
        Ok(())
    }

    pub fn task_specs(&self) -> Vec<TaskSpec> {
        self.tasks.iter().map(|t| t.spec(&self.cell)).collect()
    }

    pub fn new_task_spec(&self) -> TaskSpec {
        self.new_task.spec(&self.cell)
    }

    pub fn donor_spec(&self) -> Result<TaskSpec> {
        self.tasks
            .iter()
            .find(|t| t.task_id == self.baselines.tl_donor)
            .map(|t| t.spec(&self.cell))
            .ok_or_else(|| Error::config("baselines.tl_donor", "must name one of the meta-training tasks"))
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Reads, parses and validates an experiment file. Unknown keys are rejected.
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    ExperimentConfig::from_toml_str(&text).map_err(|e| e.context(path.display().to_string()))
}
