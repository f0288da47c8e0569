//! Motion-tracker stage: a PPO policy imitates library fragments frame by
//! frame. In the primary configuration the wrist is excluded from the
//! action space and driven by a mean-reverting perturbation instead; the
//! whole-body variant (used by the no-correction ablation) keeps the wrist.

pub mod env;
pub mod obs;
pub mod perturb;
pub mod reward;
pub mod train;

pub use env::TrackerEnv;
pub use obs::{build_tracker_obs, TRACKER_OBS_DIM};
pub use perturb::{PerturberConfig, WristPerturber};
pub use reward::tracking_reward;
pub use train::{evaluate_tracking, train_tracker, TrackingReport};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TrackerConfig {
    /// false: 5-action tracker with perturbed wrist (primary).
    /// true: whole-body 6-action tracker (no-correction ablation).
    pub include_wrist: bool,
    pub perturber: PerturberConfig,
    /// Episode ends in failure when the non-wrist ‖q − q_ref‖ exceeds this.
    pub failure_threshold: f64,
    pub randomize_dynamics: bool,
    /// exp(−‖q − q_ref‖² / pos_scale)
    pub pos_scale: f64,
    /// 0.5 · exp(−‖qd − qd_ref‖² / vel_scale)
    pub vel_scale: f64,
    pub action_rate_coef: f64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            include_wrist: false,
            perturber: PerturberConfig::default(),
            failure_threshold: 1.5,
            randomize_dynamics: true,
            pos_scale: 0.25,
            vel_scale: 4.0,
            action_rate_coef: 0.01,
        }
    }
}

impl TrackerConfig {
    pub fn action_dim(&self) -> usize {
        if self.include_wrist {
            6
        } else {
            5
        }
    }
}
