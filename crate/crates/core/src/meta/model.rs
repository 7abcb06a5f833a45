use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ddpg::{DdpgAgent, DdpgConfig};
use crate::error::{Error, Result};
use crate::nn::{AdamConfig, AdamState, DenseNetwork, NetworkSnapshot};

pub const META_FORMAT: &str = "oran-meta/meta-model";
pub const META_VERSION: u32 = 1;

/// Shared initialization θ_M of actor and critic, with its own optimizers.
#[derive(Debug, Clone)]
pub struct MetaModel {
    pub actor: DenseNetwork,
    pub critic: DenseNetwork,
    pub actor_opt: AdamState,
    pub critic_opt: AdamState,
    /// Meta-updates applied so far.
    pub iteration: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetaCheckpoint {
    format: String,
    version: u32,
    iteration: usize,
    actor: NetworkSnapshot,
    critic: NetworkSnapshot,
    actor_opt: AdamState,
    critic_opt: AdamState,
}

impl MetaModel {
    /// Initialization identical to `DdpgAgent::new(.., seed)`, so an untrained
    /// meta model and a scratch agent with the same seed start equal.
    pub fn new(obs_dim: usize, act_dim: usize, config: &DdpgConfig, meta_lr: f64, seed: u64) -> Result<Self> {
        let agent = DdpgAgent::new(obs_dim, act_dim, config.clone(), seed)?;
        Ok(Self::from_networks(agent.actor, agent.critic, meta_lr))
    }

    pub fn from_networks(actor: DenseNetwork, critic: DenseNetwork, meta_lr: f64) -> Self {
        Self {
            actor_opt: AdamState::new(actor.num_params(), AdamConfig::with_lr(meta_lr)),
            critic_opt: AdamState::new(critic.num_params(), AdamConfig::with_lr(meta_lr)),
            actor,
            critic,
            iteration: 0,
        }
    }

    /// A fresh task agent initialized at θ_M (online and target networks).
    pub fn agent(&self, config: &DdpgConfig) -> Result<DdpgAgent> {
        DdpgAgent::from_networks(self.actor.clone(), self.critic.clone(), config.clone())
    }

    /// One Adam step of θ_M along the given (summed) loss gradients.
    pub fn apply_gradients(&mut self, actor_grad: &[f64], critic_grad: &[f64]) -> Result<()> {
        if actor_grad.iter().chain(critic_grad).any(|g| !g.is_finite()) {
            return Err(Error::Divergence(format!(
                "non-finite meta gradient at meta iteration {}",
                self.iteration
            )));
        }
        self.actor.apply_adam(actor_grad, &mut self.actor_opt)?;
        self.critic.apply_adam(critic_grad, &mut self.critic_opt)?;
        self.iteration += 1;
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let ckpt = MetaCheckpoint {
            format: META_FORMAT.into(),
            version: META_VERSION,
            iteration: self.iteration,
            actor: NetworkSnapshot::from(&self.actor),
            critic: NetworkSnapshot::from(&self.critic),
            actor_opt: self.actor_opt.clone(),
            critic_opt: self.critic_opt.clone(),
        };
        let text = serde_json::to_string(&ckpt).map_err(|e| Error::Parse(e.to_string()))?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let ckpt: MetaCheckpoint = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        if ckpt.format != META_FORMAT || ckpt.version != META_VERSION {
            return Err(Error::Parse(format!(
                "unsupported meta checkpoint {} v{}",
                ckpt.format, ckpt.version
            )));
        }
        let actor = DenseNetwork::try_from(&ckpt.actor)?;
        let critic = DenseNetwork::try_from(&ckpt.critic)?;
        if ckpt.actor_opt.m.len() != actor.num_params() || ckpt.critic_opt.m.len() != critic.num_params() {
            return Err(Error::Parse("optimizer state does not match network size".into()));
        }
        Ok(Self {
            actor,
            critic,
            actor_opt: ckpt.actor_opt,
            critic_opt: ckpt.critic_opt,
            iteration: ckpt.iteration,
        })
    }
}
