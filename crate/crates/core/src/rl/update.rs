//! PPO update: epochs of shuffled minibatches, analytic gradients chained
//! through the Gaussian log-density into the mean net, global grad-norm
//! clipping, Adam steps. Single-threaded over the assembled batch.

use serde::Serialize;

use super::loss::{normalize_advantages, ppo_loss, LossCoeffs};
use super::policy::{TrainState, LOG_STD_MAX, LOG_STD_MIN};
use super::rollout::RolloutBatch;
use super::PPOConfig;
use crate::error::{Error, Result};
use crate::num::net::NetParams;
use crate::num::rng::{derive_rng, stream};

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct UpdateMetrics {
    pub loss: f64,
    pub surrogate: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub clip_fraction: f64,
    pub approx_kl: f64,
    pub grad_norm: f64,
}

fn shuffled_indices(n: usize, seed: u64, tags: &[u64]) -> Vec<usize> {
    use rand::Rng;
    let mut rng = derive_rng(seed, tags);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        idx.swap(i, j);
    }
    idx
}

/// One PPO update over the batch. `update_idx` seeds the minibatch shuffle.
pub fn update_policy(
    state: &mut TrainState,
    batch: &RolloutBatch,
    cfg: &PPOConfig,
    seed: u64,
    update_idx: u64,
) -> Result<UpdateMetrics> {
    if batch.is_empty() {
        return Err(Error::InvalidArg("empty rollout batch".into()));
    }
    let mut advantages = batch.advantages.clone();
    normalize_advantages(&mut advantages);
    let coeffs = LossCoeffs {
        clip_eps: cfg.clip_eps,
        value_coef: cfg.value_coef,
        entropy_coef: cfg.entropy_coef,
    };
    let n = batch.len();
    let mut metrics = UpdateMetrics::default();
    let mut minibatches = 0usize;

    let mut policy_grads = NetParams::zeros(&state.ac.policy.spec());
    let mut value_grads = NetParams::zeros(&state.ac.value.spec());
    let act_dim = state.ac.action_dim();
    let mut log_std_grads = vec![0.0; act_dim];
    let mut flat_policy = Vec::new();
    let mut flat_value = Vec::new();
    let mut flat_pgrad = Vec::new();
    let mut flat_vgrad = Vec::new();

    for epoch in 0..cfg.epochs {
        let order = shuffled_indices(n, seed, &[stream::SHUFFLE, update_idx, epoch as u64]);
        for mb in order.chunks(cfg.minibatch_size.min(n)) {
            // Forward pass over the minibatch.
            let mut traces = Vec::with_capacity(mb.len());
            let mut vtraces = Vec::with_capacity(mb.len());
            let mut new_log_probs = Vec::with_capacity(mb.len());
            let mut new_values = Vec::with_capacity(mb.len());
            let mut old_log_probs = Vec::with_capacity(mb.len());
            let mut adv = Vec::with_capacity(mb.len());
            let mut rets = Vec::with_capacity(mb.len());
            for &i in mb {
                let tr = state.ac.policy.forward_traced(&batch.obs[i])?;
                let vt = state.ac.value.forward_traced(&batch.obs[i])?;
                new_log_probs.push(state.ac.log_prob(tr.output(), &batch.actions[i]));
                new_values.push(vt.output()[0]);
                traces.push(tr);
                vtraces.push(vt);
                old_log_probs.push(batch.log_probs[i]);
                adv.push(advantages[i]);
                rets.push(batch.returns[i]);
            }
            let entropy = state.ac.entropy();
            let lg = ppo_loss(
                &new_log_probs,
                &new_values,
                entropy,
                &old_log_probs,
                &adv,
                &rets,
                &coeffs,
            )?;

            // Backward pass.
            policy_grads.fill(0.0);
            value_grads.fill(0.0);
            log_std_grads.fill(lg.d_entropy); // dH/d logσ_j = 1
            for (k, &i) in mb.iter().enumerate() {
                let mean = traces[k].output();
                let action = &batch.actions[i];
                let gl = lg.d_log_probs[k];
                if gl != 0.0 {
                    let mut out_grad = vec![0.0; act_dim];
                    for j in 0..act_dim {
                        let s = state.ac.log_std[j].exp();
                        let u = (action[j] - mean[j]) / s;
                        out_grad[j] = gl * u / s; // ∂logp/∂μ_j
                        log_std_grads[j] += gl * (u * u - 1.0);
                    }
                    state.ac.policy.backward(&traces[k], &out_grad, &mut policy_grads)?;
                }
                if lg.d_values[k] != 0.0 {
                    state.ac.value.backward(&vtraces[k], &[lg.d_values[k]], &mut value_grads)?;
                }
            }

            // Global norm clip across every parameter block.
            policy_grads.flatten_into(&mut flat_pgrad);
            value_grads.flatten_into(&mut flat_vgrad);
            let sq: f64 = flat_pgrad.iter().chain(&flat_vgrad).chain(&log_std_grads)
                .map(|g| g * g)
                .sum();
            let norm = sq.sqrt();
            if !norm.is_finite() {
                return Err(Error::Divergence("non-finite gradient norm".into()));
            }
            if norm > cfg.max_grad_norm {
                let scale = cfg.max_grad_norm / norm;
                for g in flat_pgrad.iter_mut().chain(flat_vgrad.iter_mut()).chain(log_std_grads.iter_mut()) {
                    *g *= scale;
                }
            }

            state.ac.policy.flatten_into(&mut flat_policy);
            state.opt_policy.step(&mut flat_policy, &flat_pgrad)?;
            state.ac.policy.assign_from_flat(&flat_policy)?;

            state.opt_log_std.step(&mut state.ac.log_std, &log_std_grads)?;
            for ls in state.ac.log_std.iter_mut() {
                *ls = ls.clamp(LOG_STD_MIN, LOG_STD_MAX);
            }

            state.ac.value.flatten_into(&mut flat_value);
            state.opt_value.step(&mut flat_value, &flat_vgrad)?;
            state.ac.value.assign_from_flat(&flat_value)?;

            metrics.loss += lg.terms.total;
            metrics.surrogate += lg.terms.surrogate;
            metrics.value_loss += lg.terms.value_loss;
            metrics.entropy += lg.terms.entropy;
            metrics.clip_fraction += lg.terms.clip_fraction;
            metrics.approx_kl += lg.terms.approx_kl;
            metrics.grad_norm += norm;
            minibatches += 1;
        }
    }
    let inv = 1.0 / minibatches.max(1) as f64;
    metrics.loss *= inv;
    metrics.surrogate *= inv;
    metrics.value_loss *= inv;
    metrics.entropy *= inv;
    metrics.clip_fraction *= inv;
    metrics.approx_kl *= inv;
    metrics.grad_norm *= inv;
    Ok(metrics)
}
