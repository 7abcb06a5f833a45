use rand::SeedableRng;

use super::agent::DdpgAgent;
use super::replay::{Batch, Partition, ReplayBuffer, Transition};
use crate::error::Result;
use crate::mdp::{CellEnv, TaskSpec};
use crate::rng::{derive_seed, Purpose, SimRng};

/// `Σ γ^t r_t`.
pub fn discounted_return(rewards: &[f64], gamma: f64) -> f64 {
    rewards.iter().rev().fold(0.0, |acc, r| r + gamma * acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeStats {
    pub discounted_return: f64,
    pub mean_reward: f64,
    pub train_steps: usize,
    /// Mean over the episode's updates; 0 when no update ran.
    pub mean_critic_loss: f64,
}

/// Greedy-policy evaluation over a fixed set of episodes.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub mean_return: f64,
    pub episode_returns: Vec<f64>,
    /// Step-averaged (Q_a, Q_m, Q_x) in bits/s, averaged over episodes.
    pub q_avg: f64,
    pub q_min: f64,
    pub q_max: f64,
}

/// Runs the greedy policy on `episodes` evaluation episodes of `task`.
///
/// Episode `e` always starts from the environment seed derived from
/// `(seed, task_id, EvalEnv, e)`, so two policies evaluated with the same
/// seed face identical UE placements, traffic and fading.
pub fn evaluate_policy(
    agent: &DdpgAgent,
    task: &TaskSpec,
    episodes: usize,
    horizon: usize,
    seed: u64,
) -> Result<EvalReport> {
    let gamma = agent.config.gamma;
    let mut unused = SimRng::seed_from_u64(0);
    let mut returns = Vec::with_capacity(episodes);
    let (mut qa, mut qm, mut qx) = (0.0, 0.0, 0.0);
    for e in 0..episodes {
        let mut env = CellEnv::new(task.clone(), derive_seed(seed, task.task_id, Purpose::EvalEnv, e as u64))?;
        let mut obs = env.observation();
        let mut rewards = Vec::with_capacity(horizon);
        let (mut sa, mut sm, mut sx) = (0.0, 0.0, 0.0);
        for _ in 0..horizon {
            let action = agent.select_action(&obs, false, &mut unused)?;
            let out = env.step(&action)?;
            rewards.push(out.reward);
            sa += out.qos.q_avg;
            sm += out.qos.q_min;
            sx += out.qos.q_max;
            obs = out.observation;
        }
        returns.push(discounted_return(&rewards, gamma));
        if horizon > 0 {
            let h = horizon as f64;
            qa += sa / h;
            qm += sm / h;
            qx += sx / h;
        }
    }
    let n = episodes.max(1) as f64;
    Ok(EvalReport {
        mean_return: returns.iter().sum::<f64>() / n,
        episode_returns: returns,
        q_avg: qa / n,
        q_min: qm / n,
        q_max: qx / n,
    })
}

/// An agent bundled with its replay buffer and private random streams.
#[derive(Debug, Clone)]
pub struct Learner {
    pub agent: DdpgAgent,
    pub buffer: ReplayBuffer,
    seed: u64,
    explore_rng: SimRng,
    replay_rng: SimRng,
}

impl Learner {
    /// `seed` and `stream` namespace the exploration and replay streams.
    pub fn new(agent: DdpgAgent, seed: u64, stream: u64) -> Self {
        let buffer = ReplayBuffer::new(agent.config.buffer_capacity);
        Self {
            agent,
            buffer,
            seed,
            explore_rng: SimRng::seed_from_u64(derive_seed(seed, stream, Purpose::Exploration, 0)),
            replay_rng: SimRng::seed_from_u64(derive_seed(seed, stream, Purpose::Replay, 0)),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sample_batch(&mut self, batch_size: usize, partition: Partition) -> Result<Batch> {
        self.buffer.sample_batch(batch_size, partition, &mut self.replay_rng)
    }

    /// One exploratory episode on `task`, storing every transition and
    /// running one DDPG update per step once the buffer holds two batches.
    ///
    /// `episode` selects the environment seed, `(seed, task_id, TrainEnv, episode)`.
    pub fn train_episode(&mut self, task: &TaskSpec, episode: u64) -> Result<EpisodeStats> {
        let horizon = self.agent.config.horizon;
        let batch_size = self.agent.config.batch_size;
        let mut env = CellEnv::new(task.clone(), derive_seed(self.seed, task.task_id, Purpose::TrainEnv, episode))?;
        let mut obs = env.observation();
        let mut rewards = Vec::with_capacity(horizon);
        let (mut steps, mut loss_sum) = (0usize, 0.0);
        for _ in 0..horizon {
            let action = self.agent.select_action(&obs, true, &mut self.explore_rng)?;
            let out = env.step(&action)?;
            rewards.push(out.reward);
            self.buffer.push(Transition {
                state: obs,
                action,
                reward: out.reward,
                next_state: out.observation.clone(),
            });
            obs = out.observation;
            if self.buffer.is_ready(batch_size) {
                let batch = self.buffer.sample_batch(batch_size, Partition::Support, &mut self.replay_rng)?;
                let (critic_loss, _) = self.agent.train_step(&batch)?;
                loss_sum += critic_loss;
                steps += 1;
            }
        }
        self.agent.end_episode();
        Ok(EpisodeStats {
            discounted_return: discounted_return(&rewards, self.agent.config.gamma),
            mean_reward: if rewards.is_empty() { 0.0 } else { rewards.iter().sum::<f64>() / rewards.len() as f64 },
            train_steps: steps,
            mean_critic_loss: if steps == 0 { 0.0 } else { loss_sum / steps as f64 },
        })
    }
}
