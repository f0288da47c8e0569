//! The physics world: 3-D ball flight with quadratic drag, ground and
//! racket contacts, a 6-DoF PD-controlled agent on a holonomic base, court
//! geometry, and per-episode dynamics randomization.

pub mod agent;
pub mod ball;
pub mod court;
pub mod dynamics;
pub mod export;
pub mod launch;
pub mod racket;
pub mod vec3;

pub use agent::{AgentState, JointConfig, StepReport, READY_POSE};
pub use ball::{BallState, BALL_RADIUS, GRAVITY, SIM_DT};
pub use court::CourtGeometry;
pub use dynamics::{DynamicsParams, RandRanges};
pub use racket::{ContactEvent, ContactKind, RacketPose};
pub use vec3::Vec3;

/// Control runs at 50 Hz over a 2000 Hz simulation.
pub const CTRL_DT: f64 = 0.02;
pub const SUBSTEPS: usize = 40;

use serde::{Deserialize, Serialize};

/// Config for everything the sim exposes as tunable.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub joints: JointConfig,
    /// Per-control-step bound on base x/y PD-target deltas (m).
    pub base_delta_limit: f64,
    pub rand: RandRanges,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            joints: JointConfig::default(),
            base_delta_limit: 1.0,
            rand: RandRanges::default(),
        }
    }
}
