//! PPO with clipped surrogate and generalized advantage estimation, plus a
//! deterministic parallel rollout driver. Shared by the tracker and the
//! task-policy stages.

pub mod gae;
pub mod loss;
pub mod policy;
pub mod rollout;
pub mod update;

pub use gae::compute_gae;
pub use loss::{ppo_loss, LossTerms};
pub use policy::{ActorCritic, TrainState};
pub use rollout::{collect_rollouts, Env, EnvSlot, RolloutBatch, StepOut, Termination};
pub use update::{update_policy, UpdateMetrics};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PPOConfig {
    pub gamma: f64,
    pub gae_lambda: f64,
    pub clip_eps: f64,
    pub epochs: usize,
    pub minibatch_size: usize,
    pub value_coef: f64,
    pub entropy_coef: f64,
    pub learning_rate: f64,
    pub rollout_length: usize,
    pub env_count: usize,
    pub max_grad_norm: f64,
    /// Number of collect/update iterations in a training run.
    pub updates: usize,
    pub hidden: Vec<usize>,
    pub log_std_init: f64,
    /// Uniform scale on environment rewards as seen by the optimizer;
    /// reported rewards and metrics stay unscaled.
    pub reward_scale: f64,
}

impl Default for PPOConfig {
    fn default() -> Self {
        Self {
            gamma: 0.99,
            gae_lambda: 0.95,
            clip_eps: 0.2,
            epochs: 4,
            minibatch_size: 256,
            value_coef: 0.5,
            entropy_coef: 0.003,
            learning_rate: 3e-4,
            rollout_length: 128,
            env_count: 64,
            max_grad_norm: 0.5,
            updates: 300,
            hidden: vec![64, 64],
            log_std_init: -0.7,
            reward_scale: 1.0,
        }
    }
}

impl PPOConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) || !(self.gae_lambda > 0.0 && self.gae_lambda <= 1.0) {
            return Err(Error::InvalidArg("gamma and gae_lambda must be in (0, 1]".into()));
        }
        if !(self.clip_eps > 0.0 && self.clip_eps < 1.0) {
            return Err(Error::InvalidArg("clip_eps must be in (0, 1)".into()));
        }
        if self.env_count == 0 || self.rollout_length == 0 || self.minibatch_size == 0 {
            return Err(Error::InvalidArg("env_count, rollout_length, minibatch_size must be positive".into()));
        }
        Ok(())
    }
}
