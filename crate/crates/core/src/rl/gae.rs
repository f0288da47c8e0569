//! Generalized advantage estimation over one environment's step sequence.
//!
//! δ_t = r_t + γ·V_{t+1}·(1−done_t) − V_t, A_t = δ_t + γλ(1−done_t)·A_{t+1},
//! returns = A + V. The final V_{T} is the supplied bootstrap value.
//! Timeout terminations are handled upstream by folding γ·V(s_T) into the
//! reward at the timeout step, so done always cuts the recursion here.

use crate::error::{Error, Result};

pub fn compute_gae(
    rewards: &[f64],
    values: &[f64],
    dones: &[bool],
    bootstrap: f64,
    gamma: f64,
    lambda: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = rewards.len();
    if values.len() != n || dones.len() != n {
        return Err(Error::Shape("GAE sequences must have equal length".into()));
    }
    let mut advantages = vec![0.0; n];
    let mut returns = vec![0.0; n];
    let mut acc = 0.0;
    for t in (0..n).rev() {
        let not_done = if dones[t] { 0.0 } else { 1.0 };
        let v_next = if t + 1 == n { bootstrap } else { values[t + 1] };
        let delta = rewards[t] + gamma * v_next * not_done - values[t];
        acc = delta + gamma * lambda * not_done * acc;
        advantages[t] = acc;
        returns[t] = acc + values[t];
    }
    Ok((advantages, returns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rng::derive_rng;
    use rand::Rng;

    #[test]
    fn single_done_step_is_reward_minus_value() {
        let (adv, ret) = compute_gae(&[2.5], &[0.7], &[true], 9.9, 0.99, 0.95).unwrap();
        assert!((adv[0] - (2.5 - 0.7)).abs() < 1e-15);
        assert!((ret[0] - 2.5).abs() < 1e-15);
    }

    #[test]
    fn lambda_zero_gives_one_step_td() {
        let rewards = [1.0, -0.5, 0.25];
        let values = [0.2, 0.4, -0.1];
        let dones = [false, false, false];
        let (adv, _) = compute_gae(&rewards, &values, &dones, 0.3, 0.9, 0.0).unwrap();
        for t in 0..3 {
            let v_next = if t == 2 { 0.3 } else { values[t + 1] };
            let delta = rewards[t] + 0.9 * v_next - values[t];
            assert!((adv[t] - delta).abs() < 1e-15);
        }
    }

    #[test]
    fn lambda_one_equals_discounted_return_minus_value() {
        // Brute-force oracle: A_t = Σ_{k≥t} γ^{k−t} r_k + γ^{T−t}·V_T − V_t
        // on random sequences with random done cuts, lengths ≤ 32.
        let mut rng = derive_rng(5, &[0]);
        for _ in 0..200 {
            let n = 1 + (rng.random::<u32>() % 32) as usize;
            let rewards: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let values: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let dones: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < 0.15).collect();
            let bootstrap = rng.random_range(-1.0..1.0);
            let gamma = 0.97;
            let (adv, ret) = compute_gae(&rewards, &values, &dones, bootstrap, gamma, 1.0).unwrap();
            for t in 0..n {
                let mut acc = 0.0;
                let mut disc = 1.0;
                for k in t..n {
                    acc += disc * rewards[k];
                    if dones[k] {
                        break;
                    }
                    disc *= gamma;
                    if k + 1 == n {
                        acc += disc * bootstrap;
                    }
                }
                let expect = acc - values[t];
                assert!(
                    (adv[t] - expect).abs() < 1e-12,
                    "t={t} adv {} vs oracle {expect}",
                    adv[t]
                );
                assert!((ret[t] - (adv[t] + values[t])).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(compute_gae(&[1.0], &[0.0, 0.0], &[false], 0.0, 0.99, 0.95).is_err());
    }
}
