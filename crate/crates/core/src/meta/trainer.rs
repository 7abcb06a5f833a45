use rayon::prelude::*;

use super::model::MetaModel;
use super::schedule::MetaSchedule;
use crate::ddpg::{Batch, DdpgConfig, Learner, LossGradients, Partition};
use crate::error::{Error, Result};
use crate::mdp::TaskSpec;

/// One task's agent, replay buffer and episode counter. Buffers persist
/// across outer iterations; networks and optimizers are reset to θ_M.
#[derive(Debug, Clone)]
pub struct TaskWorker {
    pub task: TaskSpec,
    pub learner: Learner,
    episodes_run: u64,
}

impl TaskWorker {
    pub fn episodes_run(&self) -> u64 {
        self.episodes_run
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationStats {
    pub iteration: usize,
    /// Mean discounted training return per task over this iteration's episodes.
    pub task_returns: Vec<f64>,
    /// Tasks that contributed a query gradient.
    pub contributors: usize,
}

/// Stepwise driver of meta-training. [`MetaTrainer::iterate`] runs one full
/// outer iteration; the individual phases are public for inspection.
#[derive(Debug, Clone)]
pub struct MetaTrainer {
    schedule: MetaSchedule,
    agent_config: DdpgConfig,
    model: MetaModel,
    workers: Vec<TaskWorker>,
    last_returns: Vec<f64>,
}

impl MetaTrainer {
    pub fn new(tasks: Vec<TaskSpec>, schedule: MetaSchedule, agent_config: DdpgConfig, seed: u64) -> Result<Self> {
        schedule.validate_at("schedule")?;
        agent_config.validate_at("agent")?;
        if tasks.len() != schedule.num_tasks {
            return Err(Error::config(
                "schedule.num_tasks",
                format!("schedule expects {} tasks, got {}", schedule.num_tasks, tasks.len()),
            ));
        }
        let first = tasks.first().ok_or_else(|| Error::config("tasks", "no meta-training tasks"))?;
        let (obs, act) = (first.obs_dim(), first.action_dim());
        for (i, t) in tasks.iter().enumerate() {
            t.validate()?;
            if t.obs_dim() != obs || t.action_dim() != act {
                return Err(Error::config(
                    format!("tasks[{i}].cell.num_ues"),
                    "all meta-training tasks need the same number of UEs",
                ));
            }
        }
        let model = MetaModel::new(obs, act, &agent_config, schedule.meta_lr, seed)?;
        let workers = tasks
            .into_iter()
            .map(|task| {
                let learner = Learner::new(model.agent(&agent_config)?, seed, task.task_id);
                Ok(TaskWorker {
                    task,
                    learner,
                    episodes_run: 0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            schedule,
            agent_config,
            model,
            workers,
            last_returns: Vec::new(),
        })
    }

    pub fn model(&self) -> &MetaModel {
        &self.model
    }

    pub fn workers(&self) -> &[TaskWorker] {
        &self.workers
    }

    pub fn schedule(&self) -> &MetaSchedule {
        &self.schedule
    }

    /// θ_M → θ_g for every task: online and target networks, fresh optimizers.
    pub fn begin_iteration(&mut self) -> Result<()> {
        for w in &mut self.workers {
            w.learner.agent = self.model.agent(&self.agent_config)?;
        }
        Ok(())
    }

    /// T_e exploratory episodes per task with inner DDPG updates on support
    /// samples. Tasks run in parallel; each owns its streams, so the result
    /// does not depend on scheduling.
    pub fn run_inner(&mut self) -> Result<()> {
        let per_iter = self.schedule.episodes_per_iteration as u64;
        let returns = self
            .workers
            .par_iter_mut()
            .map(|w| {
                let mut total = 0.0;
                for _ in 0..per_iter {
                    let stats = w.learner.train_episode(&w.task, w.episodes_run).map_err(|e| {
                        e.context(format!("task {} episode {}", w.task.task_id, w.episodes_run))
                    })?;
                    w.episodes_run += 1;
                    total += stats.discounted_return;
                }
                Ok(total / per_iter as f64)
            })
            .collect::<Result<Vec<f64>>>()?;
        self.last_returns = returns;
        Ok(())
    }

    /// Loss gradients of each adapted agent on a query sample of its buffer;
    /// `None` for tasks without enough experience yet.
    pub fn query_gradients(&mut self) -> Result<Vec<Option<LossGradients>>> {
        let batch_size = self.agent_config.batch_size;
        self.workers
            .iter_mut()
            .map(|w| {
                if !w.learner.buffer.is_ready(batch_size) {
                    return Ok(None);
                }
                let batch = w.learner.sample_batch(batch_size, Partition::Query)?;
                w.learner.agent.loss_gradients(&batch).map(Some)
            })
            .collect()
    }

    /// Gradients of every task on an explicit batch (same batch for all).
    pub fn query_gradients_on(&self, batch: &Batch) -> Result<Vec<LossGradients>> {
        self.workers.iter().map(|w| w.learner.agent.loss_gradients(batch)).collect()
    }

    /// Sums the available query gradients and takes one Adam step on θ_M.
    /// Returns false (and leaves θ_M alone) when no task contributed.
    pub fn apply_meta_update(&mut self, grads: &[Option<LossGradients>]) -> Result<bool> {
        let mut actor = vec![0.0; self.model.actor.num_params()];
        let mut critic = vec![0.0; self.model.critic.num_params()];
        let mut any = false;
        for g in grads.iter().flatten() {
            any = true;
            actor.iter_mut().zip(&g.actor).for_each(|(a, x)| *a += x);
            critic.iter_mut().zip(&g.critic).for_each(|(c, x)| *c += x);
        }
        if !any {
            return Ok(false);
        }
        self.model.apply_gradients(&actor, &critic)?;
        Ok(true)
    }

    pub fn iterate(&mut self) -> Result<IterationStats> {
        let iteration = self.model.iteration;
        let wrap = |e: Error| e.context(format!("meta iteration {iteration}"));
        self.begin_iteration().map_err(wrap)?;
        self.run_inner().map_err(wrap)?;
        let grads = self.query_gradients().map_err(wrap)?;
        let contributors = grads.iter().filter(|g| g.is_some()).count();
        self.apply_meta_update(&grads).map_err(wrap)?;
        Ok(IterationStats {
            iteration,
            task_returns: self.last_returns.clone(),
            contributors,
        })
    }

    /// Runs the remaining outer iterations and returns the meta model.
    pub fn run(mut self) -> Result<MetaModel> {
        for _ in 0..self.schedule.outer_iterations {
            self.iterate()?;
        }
        Ok(self.model)
    }
}

/// Full meta-training: `schedule.outer_iterations` outer iterations over `tasks`.
pub fn meta_train(tasks: Vec<TaskSpec>, schedule: MetaSchedule, agent_config: DdpgConfig, seed: u64) -> Result<MetaModel> {
    MetaTrainer::new(tasks, schedule, agent_config, seed)?.run()
}
