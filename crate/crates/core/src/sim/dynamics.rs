//! Per-episode dynamics randomization.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::num::rng::Rng64;

/// Uniform sampling ranges for every randomized quantity.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RandRanges {
    pub ball_mass_scale: (f64, f64),
    pub ground_restitution: (f64, f64),
    pub tangential_damping: (f64, f64),
    pub drag_k: (f64, f64),
    pub joint_friction_scale: (f64, f64),
    pub body_mass_scale: (f64, f64),
    pub racket_restitution: (f64, f64),
    pub pd_gain_scale: (f64, f64),
}

impl Default for RandRanges {
    fn default() -> Self {
        Self {
            ball_mass_scale: (0.95, 1.05),
            ground_restitution: (0.71, 0.79),
            tangential_damping: (0.4, 0.7),
            drag_k: (0.01, 0.04),
            joint_friction_scale: (0.75, 1.25),
            body_mass_scale: (0.75, 1.25),
            racket_restitution: (0.78, 0.92),
            pd_gain_scale: (0.9, 1.1),
        }
    }
}

/// One episode's physics coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsParams {
    pub ball_mass_scale: f64,
    pub ground_restitution: f64,
    pub tangential_damping: f64,
    /// Air-drag coefficient k in a = −k · v · ‖v‖ (1/m).
    pub drag_k: f64,
    pub joint_friction_scale: f64,
    pub body_mass_scale: f64,
    pub racket_restitution: f64,
    pub pd_gain_scale: f64,
}

impl DynamicsParams {
    /// Mid-range values, used wherever randomization is switched off.
    pub fn nominal() -> Self {
        Self {
            ball_mass_scale: 1.0,
            ground_restitution: 0.75,
            tangential_damping: 0.55,
            drag_k: 0.025,
            joint_friction_scale: 1.0,
            body_mass_scale: 1.0,
            racket_restitution: 0.85,
            pd_gain_scale: 1.0,
        }
    }

    pub fn sample(rng: &mut Rng64, r: &RandRanges) -> Self {
        let mut u = |range: (f64, f64)| rng.random_range(range.0..range.1);
        Self {
            ball_mass_scale: u(r.ball_mass_scale),
            ground_restitution: u(r.ground_restitution),
            tangential_damping: u(r.tangential_damping),
            drag_k: u(r.drag_k),
            joint_friction_scale: u(r.joint_friction_scale),
            body_mass_scale: u(r.body_mass_scale),
            racket_restitution: u(r.racket_restitution),
            pd_gain_scale: u(r.pd_gain_scale),
        }
    }
}
