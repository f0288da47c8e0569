//! Per-frame observation corruption. Each observation field belongs to a
//! class with its own uniform half-width; the whole frame is subject to
//! dropouts (replaying the previously delivered frame) and fixed latency.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::rng::Rng64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldClass {
    JointPos,
    JointVel,
    BallPos,
    /// Delivered untouched (flags, timers, targets).
    Clean,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    /// Uniform half-width on joint positions (rad / m).
    pub joint_pos_noise: f64,
    /// Uniform half-width on joint velocities (rad/s / m/s).
    pub joint_vel_noise: f64,
    /// Uniform half-width on observed ball position (m).
    pub ball_pos_noise: f64,
    pub dropout_prob: f64,
    /// Whole frames of delay at the control rate; sampled per episode from 0..=latency_max.
    pub latency_max: usize,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            joint_pos_noise: 0.01,
            joint_vel_noise: 0.1,
            ball_pos_noise: 0.02,
            dropout_prob: 0.05,
            latency_max: 2,
        }
    }
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        if self.joint_pos_noise < 0.0 || self.joint_vel_noise < 0.0 || self.ball_pos_noise < 0.0 {
            return Err(Error::InvalidArg("noise half-widths must be nonnegative".into()));
        }
        if !(0.0..=0.2).contains(&self.dropout_prob) {
            return Err(Error::InvalidArg("dropout_prob must be in [0, 0.2]".into()));
        }
        if self.latency_max > 2 {
            return Err(Error::InvalidArg("latency_max must be in {0, 1, 2}".into()));
        }
        Ok(())
    }

    pub fn disabled() -> Self {
        Self {
            joint_pos_noise: 0.0,
            joint_vel_noise: 0.0,
            ball_pos_noise: 0.0,
            dropout_prob: 0.0,
            latency_max: 0,
        }
    }

    fn half_width(&self, class: FieldClass) -> f64 {
        match class {
            FieldClass::JointPos => self.joint_pos_noise,
            FieldClass::JointVel => self.joint_vel_noise,
            FieldClass::BallPos => self.ball_pos_noise,
            FieldClass::Clean => 0.0,
        }
    }
}

/// Stateful corruption pipeline for one observation stream:
/// noise → latency buffer → dropout replay.
#[derive(Debug, Clone)]
pub struct SensorChannel {
    cfg: NoiseConfig,
    /// Latency drawn for this episode.
    latency: usize,
    history: Vec<Vec<f64>>,
    last_delivered: Option<Vec<f64>>,
}

impl SensorChannel {
    /// `latency` is normally drawn per episode from 0..=cfg.latency_max.
    pub fn new(cfg: NoiseConfig, latency: usize) -> Self {
        Self { cfg, latency, history: Vec::new(), last_delivered: None }
    }

    pub fn sample_latency(cfg: &NoiseConfig, rng: &mut Rng64) -> usize {
        if cfg.latency_max == 0 {
            0
        } else {
            rng.random_range(0..=cfg.latency_max)
        }
    }

    pub fn latency(&self) -> usize {
        self.latency
    }

    pub fn reset(&mut self) {
        self.history.clear();
        self.last_delivered = None;
    }

    /// Corrupt one raw frame and return the delivered observation.
    pub fn corrupt(&mut self, raw: &[f64], classes: &[FieldClass], rng: &mut Rng64) -> Vec<f64> {
        debug_assert_eq!(raw.len(), classes.len());
        let noisy: Vec<f64> = raw
            .iter()
            .zip(classes)
            .map(|(&v, &c)| {
                let w = self.cfg.half_width(c);
                if w > 0.0 {
                    v + rng.random_range(-w..w)
                } else {
                    v
                }
            })
            .collect();
        self.history.push(noisy);
        let idx = self.history.len().saturating_sub(1 + self.latency);
        let delayed = self.history[idx].clone();
        // Bound the buffer; only the trailing latency window is ever read.
        if self.history.len() > 8 {
            self.history.remove(0);
        }
        let delivered = match &self.last_delivered {
            Some(prev) if self.cfg.dropout_prob > 0.0 && rng.random::<f64>() < self.cfg.dropout_prob => {
                prev.clone()
            }
            _ => delayed,
        };
        self.last_delivered = Some(delivered.clone());
        delivered
    }
}
