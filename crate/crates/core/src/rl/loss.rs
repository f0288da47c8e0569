//! Clipped-surrogate PPO loss as a pure function of the per-sample
//! quantities, so the update code and the finite-difference checks share
//! one definition.
//!
//!   L = mean( −min(ρA, clip(ρ, 1−ε, 1+ε)A) + c_v (V − R)² ) − c_e·H,
//!   ρ = exp(new_logp − old_logp).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default)]
pub struct LossTerms {
    pub total: f64,
    pub surrogate: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub clip_fraction: f64,
    /// mean(old_logp − new_logp), a cheap KL-to-old estimate.
    pub approx_kl: f64,
}

pub struct LossCoeffs {
    pub clip_eps: f64,
    pub value_coef: f64,
    pub entropy_coef: f64,
}

/// Loss value and its gradients w.r.t. new_log_probs and new_values.
/// `entropy` is the (state-independent) policy entropy; its gradient
/// coefficient is returned as `d_entropy`.
pub struct LossGrads {
    pub terms: LossTerms,
    pub d_log_probs: Vec<f64>,
    pub d_values: Vec<f64>,
    pub d_entropy: f64,
}

pub fn ppo_loss(
    new_log_probs: &[f64],
    new_values: &[f64],
    entropy: f64,
    old_log_probs: &[f64],
    advantages: &[f64],
    returns: &[f64],
    c: &LossCoeffs,
) -> Result<LossGrads> {
    let n = new_log_probs.len();
    if [new_values.len(), old_log_probs.len(), advantages.len(), returns.len()]
        .iter()
        .any(|&l| l != n)
        || n == 0
    {
        return Err(Error::Shape("ppo_loss batch arrays must share a nonzero length".into()));
    }
    let inv_n = 1.0 / n as f64;
    let mut terms = LossTerms { entropy, ..Default::default() };
    let mut d_log_probs = vec![0.0; n];
    let mut d_values = vec![0.0; n];
    let mut clipped = 0usize;
    for i in 0..n {
        let ratio = (new_log_probs[i] - old_log_probs[i]).exp();
        if !ratio.is_finite() {
            return Err(Error::Divergence(format!("non-finite ratio at sample {i}")));
        }
        let a = advantages[i];
        let unclipped = ratio * a;
        let ratio_clamped = ratio.clamp(1.0 - c.clip_eps, 1.0 + c.clip_eps);
        let clipped_term = ratio_clamped * a;
        if unclipped <= clipped_term {
            terms.surrogate -= unclipped * inv_n;
            d_log_probs[i] = -ratio * a * inv_n;
        } else {
            terms.surrogate -= clipped_term * inv_n;
            // The clamp is active here, so the gradient through ρ dies.
            d_log_probs[i] = 0.0;
        }
        if ratio != ratio_clamped {
            clipped += 1;
        }
        let v_err = new_values[i] - returns[i];
        terms.value_loss += v_err * v_err * inv_n;
        d_values[i] = 2.0 * c.value_coef * v_err * inv_n;
        terms.approx_kl += (old_log_probs[i] - new_log_probs[i]) * inv_n;
    }
    terms.clip_fraction = clipped as f64 * inv_n;
    terms.total = terms.surrogate + c.value_coef * terms.value_loss - c.entropy_coef * entropy;
    if !terms.total.is_finite() {
        return Err(Error::Divergence("non-finite PPO loss".into()));
    }
    Ok(LossGrads { terms, d_log_probs, d_values, d_entropy: -c.entropy_coef })
}

/// In-place batch advantage normalization to mean 0, std 1 (ε-guarded).
pub fn normalize_advantages(adv: &mut [f64]) {
    if adv.is_empty() {
        return;
    }
    let n = adv.len() as f64;
    let mean = adv.iter().sum::<f64>() / n;
    let var = adv.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    let denom = std + 1e-8;
    for a in adv.iter_mut() {
        *a = (*a - mean) / denom;
    }
}
