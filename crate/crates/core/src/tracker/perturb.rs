//! Mean-reverting (Ornstein–Uhlenbeck) wrist perturbation, clamped to
//! ±bound. Steps use the exact OU discretization
//!   value ← value·e^{−θ·dt} + σ·√((1 − e^{−2θ·dt}) / 2θ)·n
//! rather than Euler–Maruyama, so the σ = 0 decay follows e^{−θt} exactly
//! at the 50 Hz control rate and the stationary std is σ/√(2θ) exactly.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::num::rng::Rng64;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PerturberConfig {
    /// Mean-reversion rate (1/s).
    pub theta: f64,
    /// Diffusion strength (rad/√s).
    pub sigma: f64,
    /// Hard clamp (rad).
    pub bound: f64,
}

impl Default for PerturberConfig {
    fn default() -> Self {
        Self { theta: 2.0, sigma: 1.0, bound: 1.0 }
    }
}

#[derive(Debug, Clone)]
pub struct WristPerturber {
    pub cfg: PerturberConfig,
    pub value: f64,
}

impl WristPerturber {
    pub fn new(cfg: PerturberConfig) -> Self {
        Self { cfg, value: 0.0 }
    }

    pub fn reset(&mut self, rng: &mut Rng64) {
        // Start somewhere inside the stationary band rather than at 0.
        let half = (0.5 * self.cfg.bound).min(self.stationary_std());
        self.value = if half > 0.0 { rng.random_range(-half..half) } else { 0.0 };
    }

    pub fn step(&mut self, dt: f64, rng: &mut Rng64) -> f64 {
        let n: f64 = rng.sample(StandardNormal);
        let theta = self.cfg.theta;
        let decay = (-theta * dt).exp();
        let diffusion = if theta > 0.0 {
            self.cfg.sigma * ((1.0 - decay * decay) / (2.0 * theta)).sqrt()
        } else {
            self.cfg.sigma * dt.sqrt()
        };
        self.value = self.value * decay + diffusion * n;
        self.value = self.value.clamp(-self.cfg.bound, self.cfg.bound);
        self.value
    }

    pub fn stationary_std(&self) -> f64 {
        if self.cfg.theta > 0.0 {
            self.cfg.sigma / (2.0 * self.cfg.theta).sqrt()
        } else {
            f64::INFINITY
        }
    }
}
