//! Tracker observation layout, 30 values. Index map:
//!
//! ```text
//! [ 0.. 6)  s_t q block, current-base frame: base x/y are identically 0,
//!           then yaw, shoulder, lift, wrist (absolute)
//! [ 6..12)  s_t qd block (court-frame rates)
//! [12..18)  s_t last executed command (base deltas, absolute targets)
//! [18..24)  s̃_{t+1} q_ref, base x/y relative to the current base
//! [24..30)  s̃_{t+1} qd_ref
//! ```
//!
//! Expressing base positions relative to the current base keeps the
//! tracker and every latent net translation-invariant across the court;
//! the global pose only ever enters through the task policy's g block.

use crate::motion::MotionFrame;
use crate::sim::agent::{AgentState, N_JOINTS};

pub const S_DIM: usize = 18;
pub const REF_DIM: usize = 12;
pub const TRACKER_OBS_DIM: usize = S_DIM + REF_DIM;

/// The proprioceptive s_t block shared with the latent nets and planner.
pub fn write_s_block(agent: &AgentState, out: &mut [f64]) {
    debug_assert!(out.len() >= S_DIM);
    out[0] = 0.0;
    out[1] = 0.0;
    out[2..6].copy_from_slice(&agent.q[2..6]);
    out[6..12].copy_from_slice(&agent.qd);
    out[12..18].copy_from_slice(&agent.last_action);
}

pub fn write_ref_block(agent: &AgentState, frame: &MotionFrame, out: &mut [f64]) {
    debug_assert!(out.len() >= REF_DIM);
    out[0] = frame.q_ref[0] - agent.q[0];
    out[1] = frame.q_ref[1] - agent.q[1];
    out[2..6].copy_from_slice(&frame.q_ref[2..6]);
    out[6..12].copy_from_slice(&frame.qd_ref);
}

pub fn build_tracker_obs(agent: &AgentState, target: &MotionFrame) -> Vec<f64> {
    let mut obs = vec![0.0; TRACKER_OBS_DIM];
    write_s_block(agent, &mut obs[..S_DIM]);
    write_ref_block(agent, target, &mut obs[S_DIM..]);
    obs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_matches_index_map() {
        let mut agent = AgentState::at_ready(5.0, -2.0);
        agent.qd = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
        agent.last_action = [0.9; N_JOINTS];
        let mut frame = MotionFrame { q_ref: [6.0, -1.5, 0.1, 0.2, 0.3, 0.4], qd_ref: [1.0; 6], t: 0.0 };
        frame.qd_ref[2] = -1.0;
        let obs = build_tracker_obs(&agent, &frame);
        assert_eq!(obs.len(), TRACKER_OBS_DIM);
        assert_eq!(obs[0], 0.0);
        assert_eq!(obs[1], 0.0);
        assert_eq!(obs[2], agent.q[2]);
        assert_eq!(obs[6], 0.1);
        assert_eq!(obs[12], 0.9);
        assert!((obs[18] - 1.0).abs() < 1e-12); // 6.0 − 5.0
        assert!((obs[19] - 0.5).abs() < 1e-12); // −1.5 − (−2.0)
        assert_eq!(obs[20], 0.1);
        assert_eq!(obs[26], -1.0);
    }
}
