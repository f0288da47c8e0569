//! Tracking reward: pose and rate proximity to the reference plus an
//! action-rate penalty. The wrist channel never contributes when
//! `include_wrist` is false.

use super::TrackerConfig;
use crate::motion::MotionFrame;
use crate::sim::agent::{AgentState, N_JOINTS, WRIST};

pub fn tracking_error_sq(agent: &AgentState, target: &MotionFrame, include_wrist: bool) -> (f64, f64) {
    let n = if include_wrist { N_JOINTS } else { WRIST };
    let mut eq = 0.0;
    let mut ev = 0.0;
    for j in 0..n {
        let dq = agent.q[j] - target.q_ref[j];
        let dv = agent.qd[j] - target.qd_ref[j];
        eq += dq * dq;
        ev += dv * dv;
    }
    (eq, ev)
}

pub fn tracking_reward(
    agent: &AgentState,
    target: &MotionFrame,
    action: &[f64],
    prev_action: &[f64],
    cfg: &TrackerConfig,
) -> f64 {
    let (eq, ev) = tracking_error_sq(agent, target, cfg.include_wrist);
    let rate: f64 = action
        .iter()
        .zip(prev_action)
        .map(|(a, p)| (a - p) * (a - p))
        .sum();
    (-eq / cfg.pos_scale).exp() + 0.5 * (-ev / cfg.vel_scale).exp() - cfg.action_rate_coef * rate
}

#[cfg(test)]
mod tests {
    use super::*;

    fn on_reference() -> (AgentState, MotionFrame) {
        let agent = AgentState::at_ready(5.0, 1.0);
        let frame = MotionFrame { q_ref: agent.q, qd_ref: agent.qd, t: 0.0 };
        (agent, frame)
    }

    #[test]
    fn perfect_tracking_scores_one_and_a_half() {
        let (agent, frame) = on_reference();
        let r = tracking_reward(&agent, &frame, &[0.0; 5], &[0.0; 5], &TrackerConfig::default());
        assert!((r - 1.5).abs() < 1e-12);
    }

    #[test]
    fn reward_decreases_with_pose_error() {
        let (agent, mut frame) = on_reference();
        let cfg = TrackerConfig::default();
        let mut prev = tracking_reward(&agent, &frame, &[0.0; 5], &[0.0; 5], &cfg);
        for step in 1..=10 {
            frame.q_ref[3] = agent.q[3] + 0.1 * step as f64;
            let r = tracking_reward(&agent, &frame, &[0.0; 5], &[0.0; 5], &cfg);
            assert!(r < prev);
            prev = r;
        }
    }

    #[test]
    fn wrist_mismatch_is_invisible() {
        let (agent, mut frame) = on_reference();
        let cfg = TrackerConfig::default();
        let base = tracking_reward(&agent, &frame, &[0.0; 5], &[0.0; 5], &cfg);
        frame.q_ref[WRIST] = 1.2;
        frame.qd_ref[WRIST] = -9.0;
        let r = tracking_reward(&agent, &frame, &[0.0; 5], &[0.0; 5], &cfg);
        assert_eq!(r, base);
        // The whole-body variant does see it.
        let cfg6 = TrackerConfig { include_wrist: true, ..TrackerConfig::default() };
        let r6 = tracking_reward(&agent, &frame, &[0.0; 6], &[0.0; 6], &cfg6);
        assert!(r6 < base);
    }

    #[test]
    fn action_rate_penalty_applies() {
        let (agent, frame) = on_reference();
        let cfg = TrackerConfig::default();
        let still = tracking_reward(&agent, &frame, &[0.2; 5], &[0.2; 5], &cfg);
        let moving = tracking_reward(&agent, &frame, &[0.2; 5], &[-0.2; 5], &cfg);
        assert!((still - 1.5).abs() < 1e-12);
        assert!((moving - (1.5 - 0.01 * 5.0 * 0.16)).abs() < 1e-12);
    }
}
