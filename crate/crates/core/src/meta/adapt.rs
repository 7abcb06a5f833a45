use rand::Rng;

use super::model::MetaModel;
use super::schedule::MetaSchedule;
use crate::ddpg::{evaluate_policy, DdpgAgent, DdpgConfig, Learner};
use crate::error::{Error, Result};
use crate::mdp::TaskSpec;
use crate::rng::{stream, Purpose};

/// One adaptation shot: a training episode followed by a greedy evaluation
/// on the target task.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotRecord {
    /// 1-based shot index.
    pub shot: usize,
    /// Task the training episode ran on (differs from the target for MTL donor episodes).
    pub trained_on: u64,
    pub train_return: f64,
    pub eval_return: f64,
    pub q_avg: f64,
    pub q_min: f64,
    pub q_max: f64,
}

#[derive(Debug, Clone)]
pub struct Adaptation {
    pub agent: DdpgAgent,
    pub shots: Vec<ShotRecord>,
}

impl Adaptation {
    pub fn eval_returns(&self) -> Vec<f64> {
        self.shots.iter().map(|s| s.eval_return).collect()
    }

    /// Mean evaluation return over the last `n` shots (all shots if fewer).
    pub fn final_return(&self, n: usize) -> Option<f64> {
        let tail = &self.shots[self.shots.len().saturating_sub(n)..];
        (!tail.is_empty()).then(|| tail.iter().map(|s| s.eval_return).sum::<f64>() / tail.len() as f64)
    }
}

fn run_shots(
    mut learner: Learner,
    target: &TaskSpec,
    plan: &[&TaskSpec],
    seed: u64,
) -> Result<Adaptation> {
    let config = learner.agent.config.clone();
    let mut shots = Vec::with_capacity(plan.len());
    let mut episode_of = std::collections::HashMap::<u64, u64>::new();
    for (i, task) in plan.iter().enumerate() {
        let episode = episode_of.entry(task.task_id).or_insert(0);
        let stats = learner
            .train_episode(task, *episode)
            .map_err(|e| e.context(format!("shot {} on task {}", i + 1, task.task_id)))?;
        *episode += 1;
        let eval = evaluate_policy(&learner.agent, target, config.eval_episodes, config.horizon, seed)?;
        shots.push(ShotRecord {
            shot: i + 1,
            trained_on: task.task_id,
            train_return: stats.discounted_return,
            eval_return: eval.mean_return,
            q_avg: eval.q_avg,
            q_min: eval.q_min,
            q_max: eval.q_max,
        });
    }
    Ok(Adaptation {
        agent: learner.agent,
        shots,
    })
}

/// Trains `agent` on `task` for `budget` episodes, evaluating after each one.
pub fn adapt_from(agent: DdpgAgent, task: &TaskSpec, budget: usize, seed: u64) -> Result<Adaptation> {
    task.validate()?;
    if agent.obs_dim() != task.obs_dim() || agent.action_dim() != task.action_dim() {
        return Err(Error::config("task.cell.num_ues", "agent dimensions do not match the task"));
    }
    let learner = Learner::new(agent, seed, task.task_id);
    run_shots(learner, task, &vec![task; budget], seed)
}

/// Initializes an agent at θ_M and runs the standard DDPG loop on `task`.
pub fn inner_adapt(
    meta: &MetaModel,
    task: &TaskSpec,
    budget: usize,
    config: &DdpgConfig,
    seed: u64,
) -> Result<Adaptation> {
    adapt_from(meta.agent(config)?, task, budget, seed)
}

/// Adaptation to a new task with the schedule's budget T_new = round(0.1 T).
pub fn meta_adapt_new(
    meta: &MetaModel,
    new_task: &TaskSpec,
    schedule: &MetaSchedule,
    config: &DdpgConfig,
    seed: u64,
) -> Result<Adaptation> {
    inner_adapt(meta, new_task, schedule.adaptation_budget(), config, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    Scratch,
    Transfer,
    MultiTask,
}

impl BaselineKind {
    pub fn name(self) -> &'static str {
        match self {
            BaselineKind::Scratch => "scratch",
            BaselineKind::Transfer => "tl",
            BaselineKind::MultiTask => "mtl",
        }
    }
}

impl std::str::FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scratch" => Ok(BaselineKind::Scratch),
            "tl" => Ok(BaselineKind::Transfer),
            "mtl" => Ok(BaselineKind::MultiTask),
            other => Err(Error::config("baseline.kind", format!("unknown baseline `{other}`"))),
        }
    }
}

pub enum Baseline<'a> {
    /// Random initialization.
    Scratch,
    /// Fine-tune a copy of an agent trained on a donor task.
    Transfer { donor: &'a DdpgAgent },
    /// One agent alternating episodes between a randomly chosen donor task
    /// and the new task.
    MultiTask { donors: &'a [TaskSpec] },
}

/// Which task each MTL episode trains on: alternating, ending on the new task.
pub fn multitask_schedule(budget: usize) -> Vec<bool> {
    (0..budget).map(|i| (budget - 1 - i) % 2 == 0).collect()
}

/// Runs a baseline for `budget` episodes; every shot is evaluated on `new_task`.
pub fn run_baseline(
    baseline: Baseline<'_>,
    new_task: &TaskSpec,
    budget: usize,
    config: &DdpgConfig,
    seed: u64,
) -> Result<Adaptation> {
    let (obs, act) = (new_task.obs_dim(), new_task.action_dim());
    match baseline {
        Baseline::Scratch => adapt_from(DdpgAgent::new(obs, act, config.clone(), seed)?, new_task, budget, seed),
        Baseline::Transfer { donor } => {
            let agent = DdpgAgent::from_networks(donor.actor.clone(), donor.critic.clone(), config.clone())?;
            adapt_from(agent, new_task, budget, seed)
        }
        Baseline::MultiTask { donors } => {
            if donors.is_empty() {
                return Err(Error::config("baseline.donors", "multi-task baseline needs a donor task"));
            }
            new_task.validate()?;
            let mut pick = stream(seed, new_task.task_id, Purpose::DonorChoice, 0);
            let donor = &donors[pick.random_range(0..donors.len())];
            if donor.obs_dim() != obs || donor.action_dim() != act {
                return Err(Error::config("baseline.donors", "donor task dimensions differ from the new task"));
            }
            let agent = DdpgAgent::new(obs, act, config.clone(), seed)?;
            let learner = Learner::new(agent, seed, new_task.task_id);
            let plan: Vec<&TaskSpec> = multitask_schedule(budget)
                .into_iter()
                .map(|on_new| if on_new { new_task } else { donor })
                .collect();
            run_shots(learner, new_task, &plan, seed)
        }
    }
}

/// Trains a scratch agent on `donor` for `episodes` episodes (the TL source).
pub fn train_donor(donor: &TaskSpec, episodes: usize, config: &DdpgConfig, seed: u64) -> Result<DdpgAgent> {
    donor.validate()?;
    let agent = DdpgAgent::new(donor.obs_dim(), donor.action_dim(), config.clone(), seed)?;
    let mut learner = Learner::new(agent, seed, donor.task_id);
    for e in 0..episodes {
        learner.train_episode(donor, e as u64)?;
    }
    Ok(learner.agent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::CellConfig;

    fn task(id: u64, k: usize) -> TaskSpec {
        TaskSpec::new(id, 0.5e6, 4e6, CellConfig { num_ues: 2, num_rbs: k, ..Default::default() }).unwrap()
    }

    fn cfg() -> DdpgConfig {
        DdpgConfig {
            hidden_sizes: vec![8, 8],
            batch_size: 4,
            buffer_capacity: 200,
            horizon: 6,
            actor_lr: 1e-3,
            critic_lr: 1e-3,
            ..Default::default()
        }
    }

    #[test]
    fn zero_budget_returns_meta_parameters() {
        let meta = MetaModel::new(7, 4, &cfg(), 1e-4, 3).unwrap();
        let out = inner_adapt(&meta, &task(9, 5), 0, &cfg(), 3).unwrap();
        assert!(out.shots.is_empty());
        assert_eq!(out.agent.actor.params(), meta.actor.params());
        assert_eq!(out.agent.critic.params(), meta.critic.params());
    }

    #[test]
    fn zero_learning_rate_keeps_meta_parameters() {
        let frozen = DdpgConfig { actor_lr: 0.0, critic_lr: 0.0, ..cfg() };
        let meta = MetaModel::new(7, 4, &frozen, 1e-4, 3).unwrap();
        let out = inner_adapt(&meta, &task(9, 5), 4, &frozen, 3).unwrap();
        assert_eq!(out.agent.actor.params(), meta.actor.params());
        assert_eq!(out.agent.critic.params(), meta.critic.params());
    }

    #[test]
    fn longer_budget_extends_the_same_trajectory() {
        let meta = MetaModel::new(7, 4, &cfg(), 1e-4, 3).unwrap();
        let short = inner_adapt(&meta, &task(9, 5), 3, &cfg(), 11).unwrap();
        let long = inner_adapt(&meta, &task(9, 5), 6, &cfg(), 11).unwrap();
        assert_eq!(short.shots[..], long.shots[..3]);
    }

    #[test]
    fn adaptation_trace_has_budget_length() {
        let schedule = MetaSchedule { outer_iterations: 30, num_tasks: 1, ..Default::default() };
        let meta = MetaModel::new(7, 4, &cfg(), 1e-4, 3).unwrap();
        let out = meta_adapt_new(&meta, &task(9, 5), &schedule, &cfg(), 1).unwrap();
        assert_eq!(out.shots.len(), 3);
        assert!(out.shots.iter().all(|s| s.eval_return.is_finite()));
        assert_eq!(out.shots.iter().map(|s| s.shot).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn untrained_meta_equals_scratch() {
        let schedule = MetaSchedule { outer_iterations: 40, num_tasks: 1, ..Default::default() };
        let meta = MetaModel::new(7, 4, &cfg(), 1e-4, 21).unwrap();
        let adapted = meta_adapt_new(&meta, &task(9, 5), &schedule, &cfg(), 21).unwrap();
        let scratch = run_baseline(Baseline::Scratch, &task(9, 5), 4, &cfg(), 21).unwrap();
        assert_eq!(adapted.shots, scratch.shots);
        assert_eq!(adapted.agent.actor.params(), scratch.agent.actor.params());
    }

    #[test]
    fn scratch_with_zero_budget_is_random_init() {
        let out = run_baseline(Baseline::Scratch, &task(9, 5), 0, &cfg(), 2).unwrap();
        let fresh = DdpgAgent::new(7, 4, cfg(), 2).unwrap();
        assert_eq!(out.agent.actor.params(), fresh.actor.params());
    }

    #[test]
    fn transfer_from_own_task_continues() {
        let t = task(9, 5);
        let donor = train_donor(&t, 3, &cfg(), 4).unwrap();
        let out = run_baseline(Baseline::Transfer { donor: &donor }, &t, 3, &cfg(), 4).unwrap();
        assert_eq!(out.shots.len(), 3);
        assert!(out.shots.iter().all(|s| s.eval_return.is_finite() && s.trained_on == 9));
    }

    #[test]
    fn multitask_splits_budget_evenly_ending_on_new_task() {
        assert_eq!(multitask_schedule(10).iter().filter(|&&b| b).count(), 5);
        assert_eq!(multitask_schedule(10).last(), Some(&true));
        assert_eq!(multitask_schedule(3), vec![true, false, true]);

        let donors = [task(0, 4), task(1, 6)];
        let out = run_baseline(Baseline::MultiTask { donors: &donors }, &task(9, 5), 10, &cfg(), 8).unwrap();
        let on_new = out.shots.iter().filter(|s| s.trained_on == 9).count();
        assert_eq!(on_new, 5);
        assert_eq!(out.shots.last().unwrap().trained_on, 9);
        let donor_ids: std::collections::HashSet<u64> =
            out.shots.iter().filter(|s| s.trained_on != 9).map(|s| s.trained_on).collect();
        assert_eq!(donor_ids.len(), 1);
    }

    #[test]
    fn multitask_without_donor_is_config_error() {
        let err = run_baseline(Baseline::MultiTask { donors: &[] }, &task(9, 5), 2, &cfg(), 8);
        assert!(matches!(err, Err(Error::Config { .. })));
    }
}
