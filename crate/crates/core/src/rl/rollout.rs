//! Deterministic parallel rollout collection. Every environment slot owns
//! an independent RNG stream derived from (seed, env index), episodes are
//! stepped strictly sequentially within a slot, and the batch concatenates
//! slots in index order — so the bytes are identical for any worker count.

use rayon::prelude::*;

use super::gae::compute_gae;
use super::policy::ActorCritic;
use super::PPOConfig;
use crate::error::{Error, Result};
use crate::num::rng::{derive_rng, stream, Rng64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Absorbing failure: bootstraps zero.
    Failure,
    /// Horizon/timeout end: bootstraps V(s_T).
    Timeout,
}

#[derive(Debug, Clone)]
pub struct StepOut {
    pub obs: Vec<f64>,
    pub reward: f64,
    pub done: Option<Termination>,
}

/// A rollout environment. Implementations own all randomness through the
/// rng handed to them at construction.
pub trait Env: Send {
    fn obs_dim(&self) -> usize;
    fn action_dim(&self) -> usize;
    fn reset(&mut self) -> Vec<f64>;
    fn step(&mut self, action: &[f64]) -> Result<StepOut>;
}

/// One environment plus its sampling stream and carried state.
pub struct EnvSlot<E: Env> {
    pub env: E,
    pub index: usize,
    action_rng: Rng64,
    obs: Vec<f64>,
    episode_return: f64,
    episode_len: usize,
}

impl<E: Env> EnvSlot<E> {
    pub fn new(mut env: E, index: usize, seed: u64) -> Self {
        let obs = env.reset();
        Self {
            env,
            index,
            action_rng: derive_rng(seed, &[stream::POLICY_INIT, index as u64]),
            obs,
            episode_return: 0.0,
            episode_len: 0,
        }
    }
}

/// Build env slots 0..count from a factory receiving the slot index; the
/// factory must derive any env-side randomness from (seed, index).
pub fn make_slots<E: Env>(count: usize, seed: u64, factory: impl Fn(usize) -> E) -> Vec<EnvSlot<E>> {
    (0..count).map(|i| EnvSlot::new(factory(i), i, seed)).collect()
}

/// Flattened rollout batch, slot-major.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RolloutBatch {
    pub obs: Vec<Vec<f64>>,
    pub actions: Vec<Vec<f64>>,
    pub log_probs: Vec<f64>,
    pub advantages: Vec<f64>,
    pub returns: Vec<f64>,
    /// Unscaled environment rewards, for logging.
    pub mean_reward: f64,
    /// Returns/lengths of episodes that finished inside this batch.
    pub finished_returns: Vec<f64>,
    pub finished_lengths: Vec<usize>,
}

impl RolloutBatch {
    pub fn len(&self) -> usize {
        self.obs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obs.is_empty()
    }
}

struct SlotTrace {
    obs: Vec<Vec<f64>>,
    actions: Vec<Vec<f64>>,
    log_probs: Vec<f64>,
    rewards: Vec<f64>,
    values: Vec<f64>,
    dones: Vec<bool>,
    bootstrap: f64,
    raw_reward_sum: f64,
    finished_returns: Vec<f64>,
    finished_lengths: Vec<usize>,
}

fn run_slot<E: Env>(slot: &mut EnvSlot<E>, ac: &ActorCritic, cfg: &PPOConfig) -> Result<SlotTrace> {
    let t_len = cfg.rollout_length;
    let mut trace = SlotTrace {
        obs: Vec::with_capacity(t_len),
        actions: Vec::with_capacity(t_len),
        log_probs: Vec::with_capacity(t_len),
        rewards: Vec::with_capacity(t_len),
        values: Vec::with_capacity(t_len),
        dones: Vec::with_capacity(t_len),
        bootstrap: 0.0,
        raw_reward_sum: 0.0,
        finished_returns: Vec::new(),
        finished_lengths: Vec::new(),
    };
    let mut value_here = ac.value_of(&slot.obs)?;
    for t in 0..t_len {
        let (action, log_prob) = ac.sample_action(&slot.obs, &mut slot.action_rng)?;
        let out = slot
            .env
            .step(&action)
            .map_err(|e| Error::InvalidArg(format!("env {} step fault: {e}", slot.index)))?;
        trace.obs.push(std::mem::take(&mut slot.obs));
        trace.actions.push(action);
        trace.log_probs.push(log_prob);
        trace.values.push(value_here);
        trace.raw_reward_sum += out.reward;
        slot.episode_return += out.reward;
        slot.episode_len += 1;
        let mut scaled_reward = out.reward * cfg.reward_scale;
        match out.done {
            None => {
                slot.obs = out.obs;
                value_here = ac.value_of(&slot.obs)?;
                trace.dones.push(false);
                if t + 1 == t_len {
                    trace.bootstrap = value_here;
                }
            }
            Some(kind) => {
                if kind == Termination::Timeout {
                    // Fold the terminal bootstrap into the reward so GAE's
                    // done flag can cut the recursion uniformly.
                    scaled_reward += cfg.gamma * ac.value_of(&out.obs)? * cfg.reward_scale;
                }
                trace.dones.push(true);
                trace.finished_returns.push(slot.episode_return);
                trace.finished_lengths.push(slot.episode_len);
                slot.episode_return = 0.0;
                slot.episode_len = 0;
                slot.obs = slot.env.reset();
                value_here = ac.value_of(&slot.obs)?;
                if t + 1 == t_len {
                    trace.bootstrap = 0.0; // unused: done cuts the recursion
                }
            }
        }
        trace.rewards.push(scaled_reward);
    }
    Ok(trace)
}

/// Collect `rollout_length` steps from every slot and assemble the batch
/// with GAE-processed advantages (unnormalized).
pub fn collect_rollouts<E: Env>(
    slots: &mut [EnvSlot<E>],
    ac: &ActorCritic,
    cfg: &PPOConfig,
) -> Result<RolloutBatch> {
    let traces: Vec<Result<SlotTrace>> = slots
        .par_iter_mut()
        .map(|slot| run_slot(slot, ac, cfg))
        .collect();
    let mut batch = RolloutBatch::default();
    let mut reward_sum = 0.0;
    let mut step_count = 0usize;
    for trace in traces {
        let mut trace = trace?;
        let (adv, ret) = compute_gae(
            &trace.rewards,
            &trace.values,
            &trace.dones,
            trace.bootstrap,
            cfg.gamma,
            cfg.gae_lambda,
        )?;
        step_count += trace.rewards.len();
        reward_sum += trace.raw_reward_sum;
        batch.obs.append(&mut trace.obs);
        batch.actions.append(&mut trace.actions);
        batch.log_probs.append(&mut trace.log_probs);
        batch.advantages.extend(adv);
        batch.returns.extend(ret);
        batch.finished_returns.append(&mut trace.finished_returns);
        batch.finished_lengths.append(&mut trace.finished_lengths);
    }
    batch.mean_reward = if step_count > 0 { reward_sum / step_count as f64 } else { 0.0 };
    Ok(batch)
}
