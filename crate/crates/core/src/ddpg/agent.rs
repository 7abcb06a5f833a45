use ndarray::{concatenate, s, Array2, Axis};
use rand::Rng;
use rand_distr::StandardNormal;

use super::config::DdpgConfig;
use super::replay::Batch;
use crate::error::{Error, Result};
use crate::nn::{Activation, AdamConfig, AdamState, DenseNetwork};
use crate::rng::{derive_seed, Purpose, SimRng};

/// Loss gradients of both networks on one batch, evaluated at the current
/// online parameters without applying them.
#[derive(Debug, Clone)]
pub struct LossGradients {
    pub actor: Vec<f64>,
    pub critic: Vec<f64>,
    pub actor_loss: f64,
    pub critic_loss: f64,
}

/// Actor-critic pair with target copies and their optimizers.
///
/// The actor maps observations to raw actions in [-1, 1] (tanh head); the
/// critic maps `state ‖ action` to a scalar value (identity head).
#[derive(Debug, Clone)]
pub struct DdpgAgent {
    pub actor: DenseNetwork,
    pub critic: DenseNetwork,
    pub target_actor: DenseNetwork,
    pub target_critic: DenseNetwork,
    pub actor_opt: AdamState,
    pub critic_opt: AdamState,
    pub config: DdpgConfig,
    noise_std: f64,
}

impl DdpgAgent {
    pub fn actor_sizes(obs_dim: usize, act_dim: usize, config: &DdpgConfig) -> Vec<usize> {
        let mut sizes = vec![obs_dim];
        sizes.extend(&config.hidden_sizes);
        sizes.push(act_dim);
        sizes
    }

    pub fn critic_sizes(obs_dim: usize, act_dim: usize, config: &DdpgConfig) -> Vec<usize> {
        let mut sizes = vec![obs_dim + act_dim];
        sizes.extend(&config.hidden_sizes);
        sizes.push(1);
        sizes
    }

    /// Freshly initialized networks; deterministic in `seed`.
    pub fn new(obs_dim: usize, act_dim: usize, config: DdpgConfig, seed: u64) -> Result<Self> {
        let actor = DenseNetwork::new(
            &Self::actor_sizes(obs_dim, act_dim, &config),
            Activation::Tanh,
            Activation::Tanh,
            derive_seed(seed, 0, Purpose::Init, 0),
        )?;
        let critic = DenseNetwork::new(
            &Self::critic_sizes(obs_dim, act_dim, &config),
            Activation::Tanh,
            Activation::Identity,
            derive_seed(seed, 0, Purpose::Init, 1),
        )?;
        Self::from_networks(actor, critic, config)
    }

    /// Builds an agent whose online and target networks all equal the given
    /// ones, with fresh optimizer state and the initial noise level.
    pub fn from_networks(actor: DenseNetwork, critic: DenseNetwork, config: DdpgConfig) -> Result<Self> {
        if critic.input_dim() != actor.input_dim() + actor.output_dim() || critic.output_dim() != 1 {
            return Err(Error::contract("critic must take state ‖ action and return a scalar"));
        }
        config.validate_at("agent")?;
        let actor_opt = AdamState::new(actor.num_params(), AdamConfig::with_lr(config.actor_lr));
        let critic_opt = AdamState::new(critic.num_params(), AdamConfig::with_lr(config.critic_lr));
        Ok(Self {
            target_actor: actor.clone(),
            target_critic: critic.clone(),
            actor,
            critic,
            actor_opt,
            critic_opt,
            noise_std: config.noise_std,
            config,
        })
    }

    pub fn obs_dim(&self) -> usize {
        self.actor.input_dim()
    }

    pub fn action_dim(&self) -> usize {
        self.actor.output_dim()
    }

    pub fn noise_std(&self) -> f64 {
        self.noise_std
    }

    pub fn set_noise_std(&mut self, std: f64) {
        self.noise_std = std;
    }

    /// Applies the per-episode exploration decay.
    pub fn end_episode(&mut self) {
        self.noise_std = (self.noise_std * self.config.noise_decay).max(self.config.noise_floor);
    }

    /// Actor output, optionally perturbed by Gaussian noise and clamped to [-1, 1].
    pub fn select_action(&self, state: &[f64], explore: bool, rng: &mut SimRng) -> Result<Vec<f64>> {
        let mut action = self.actor.predict(state)?;
        if explore && self.noise_std > 0.0 {
            for a in action.iter_mut() {
                let z: f64 = rng.sample(StandardNormal);
                *a = (*a + self.noise_std * z).clamp(-1.0, 1.0);
            }
        }
        Ok(action)
    }

    fn state_action(states: &Array2<f64>, actions: &Array2<f64>) -> Array2<f64> {
        concatenate![Axis(1), *states, *actions]
    }

    /// TD targets `r + γ Q'(s', μ'(s'))` from the target networks.
    fn td_targets(&self, batch: &Batch) -> Result<Vec<f64>> {
        let (next_actions, _) = self.target_actor.forward_batch(batch.next_states.view())?;
        let (next_q, _) = self
            .target_critic
            .forward_batch(Self::state_action(&batch.next_states, &next_actions).view())?;
        Ok(batch
            .rewards
            .iter()
            .zip(next_q.column(0))
            .map(|(r, q)| r + self.config.gamma * q)
            .collect())
    }

    /// Mean squared TD error and its gradient w.r.t. the critic.
    pub fn critic_gradient(&self, batch: &Batch) -> Result<(Vec<f64>, f64)> {
        if batch.is_empty() {
            return Err(Error::contract("empty batch"));
        }
        let targets = self.td_targets(batch)?;
        let (q, tape) = self
            .critic
            .forward_batch(Self::state_action(&batch.states, &batch.actions).view())?;
        let n = batch.len() as f64;
        let mut out_grad = Array2::zeros((batch.len(), 1));
        let mut loss = 0.0;
        for (i, (&qi, yi)) in q.column(0).iter().zip(&targets).enumerate() {
            let err = qi - yi;
            loss += err * err / n;
            out_grad[[i, 0]] = 2.0 * err / n;
        }
        if !loss.is_finite() {
            return Err(Error::Divergence(format!("critic loss {loss}")));
        }
        Ok((self.critic.backward(&tape, out_grad.view())?.params, loss))
    }

    /// `-mean Q(s, μ(s))` and its gradient w.r.t. the actor.
    pub fn actor_gradient(&self, batch: &Batch) -> Result<(Vec<f64>, f64)> {
        if batch.is_empty() {
            return Err(Error::contract("empty batch"));
        }
        let (actions, actor_tape) = self.actor.forward_batch(batch.states.view())?;
        let (q, critic_tape) = self
            .critic
            .forward_batch(Self::state_action(&batch.states, &actions).view())?;
        let n = batch.len() as f64;
        let loss = -q.column(0).sum() / n;
        if !loss.is_finite() {
            return Err(Error::Divergence(format!("actor loss {loss}")));
        }
        let out_grad = Array2::from_elem((batch.len(), 1), -1.0 / n);
        let critic_grads = self.critic.backward(&critic_tape, out_grad.view())?;
        let obs = self.obs_dim();
        let action_grad = critic_grads.input.slice(s![.., obs..]).to_owned();
        Ok((self.actor.backward(&actor_tape, action_grad.view())?.params, loss))
    }

    /// Both loss gradients at the current parameters; nothing is updated.
    pub fn loss_gradients(&self, batch: &Batch) -> Result<LossGradients> {
        let (critic, critic_loss) = self.critic_gradient(batch)?;
        let (actor, actor_loss) = self.actor_gradient(batch)?;
        Ok(LossGradients {
            actor,
            critic,
            actor_loss,
            critic_loss,
        })
    }

    /// One DDPG update: critic Adam step on the TD loss, actor Adam step on
    /// the updated critic, then soft target updates.
    pub fn train_step(&mut self, batch: &Batch) -> Result<(f64, f64)> {
        let (critic_grad, critic_loss) = self.critic_gradient(batch)?;
        check_finite(&critic_grad, "critic gradient")?;
        self.critic.apply_adam(&critic_grad, &mut self.critic_opt)?;
        let (actor_grad, actor_loss) = self.actor_gradient(batch)?;
        check_finite(&actor_grad, "actor gradient")?;
        self.actor.apply_adam(&actor_grad, &mut self.actor_opt)?;
        self.soft_update_targets()?;
        Ok((critic_loss, actor_loss))
    }

    pub fn soft_update_targets(&mut self) -> Result<()> {
        let tau = self.config.tau;
        self.target_critic.soft_update_from(&self.critic, tau)?;
        self.target_actor.soft_update_from(&self.actor, tau)
    }
}

pub(crate) fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Divergence(format!("non-finite {what}")))
    }
}
