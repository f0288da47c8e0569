//! Gaussian actor and value function over the shared dense nets. The actor
//! mean is a tanh net with a linear head; exploration std is a learnable
//! state-independent log-std vector.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::num::adam::{Adam, AdamConfig};
use crate::num::gauss::LN_2PI;
use crate::num::net::{NetParams, NetSpec};
use crate::num::rng::Rng64;

pub const LOG_STD_MIN: f64 = -5.0;
pub const LOG_STD_MAX: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ActorCritic {
    pub policy: NetParams,
    pub log_std: Vec<f64>,
    pub value: NetParams,
}

impl ActorCritic {
    pub fn init(obs_dim: usize, action_dim: usize, hidden: &[usize], log_std_init: f64, rng: &mut Rng64) -> Result<Self> {
        let mut pw = vec![obs_dim];
        pw.extend_from_slice(hidden);
        pw.push(action_dim);
        let mut vw = vec![obs_dim];
        vw.extend_from_slice(hidden);
        vw.push(1);
        let policy_spec = NetSpec::new(pw)?;
        let value_spec = NetSpec::new(vw)?;
        Ok(Self {
            policy: NetParams::init(&policy_spec, 0.01, rng),
            log_std: vec![log_std_init; action_dim],
            value: NetParams::init(&value_spec, 1.0, rng),
        })
    }

    pub fn obs_dim(&self) -> usize {
        self.policy.input_dim()
    }

    pub fn action_dim(&self) -> usize {
        self.policy.output_dim()
    }

    pub fn mean_action(&self, obs: &[f64]) -> Result<Vec<f64>> {
        self.policy.forward(obs)
    }

    /// Sample an action and its log probability.
    pub fn sample_action(&self, obs: &[f64], rng: &mut Rng64) -> Result<(Vec<f64>, f64)> {
        let mean = self.policy.forward(obs)?;
        let mut action = Vec::with_capacity(mean.len());
        let mut log_prob = 0.0;
        for (m, ls) in mean.iter().zip(&self.log_std) {
            let s = ls.exp();
            let n: f64 = rng.sample(StandardNormal);
            let a = m + s * n;
            log_prob += -0.5 * n * n - ls - 0.5 * LN_2PI;
            action.push(a);
        }
        Ok((action, log_prob))
    }

    /// Log probability of `action` under the current parameters.
    pub fn log_prob(&self, mean: &[f64], action: &[f64]) -> f64 {
        mean.iter()
            .zip(action)
            .zip(&self.log_std)
            .map(|((m, a), ls)| {
                let u = (a - m) / ls.exp();
                -0.5 * u * u - ls - 0.5 * LN_2PI
            })
            .sum()
    }

    /// Entropy of the (state-independent) action distribution.
    pub fn entropy(&self) -> f64 {
        self.log_std.iter().sum::<f64>() + 0.5 * self.log_std.len() as f64 * (1.0 + LN_2PI)
    }

    pub fn value_of(&self, obs: &[f64]) -> Result<f64> {
        Ok(self.value.forward(obs)?[0])
    }
}

/// ActorCritic plus optimizer state.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainState {
    pub ac: ActorCritic,
    pub opt_policy: Adam,
    pub opt_log_std: Adam,
    pub opt_value: Adam,
}

impl TrainState {
    pub fn new(ac: ActorCritic, lr: f64) -> Self {
        let cfg = AdamConfig { lr, ..AdamConfig::default() };
        let np = ac.policy.param_count();
        let nl = ac.log_std.len();
        let nv = ac.value.param_count();
        Self {
            ac,
            opt_policy: Adam::new(np, cfg),
            opt_log_std: Adam::new(nl, cfg),
            opt_value: Adam::new(nv, cfg),
        }
    }
}
