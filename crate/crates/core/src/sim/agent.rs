//! The 6-DoF agent: holonomic planar base (x, y, yaw) plus a shoulder /
//! lift / wrist arm, PD-controlled with unit-inertia joint dynamics.
//!
//! Joint order everywhere: [base_x (m), base_y (m), base_yaw (rad),
//! shoulder (rad), lift (rad), wrist (rad)]. Yaw 0 faces the net (−x);
//! the arm azimuth in the court frame is π + yaw + shoulder. The racket
//! face normal is the arm tangent tilted by the wrist about the arm axis,
//! so positive wrist tilts the face upward.

use serde::{Deserialize, Serialize};

use super::dynamics::DynamicsParams;
use super::racket::RacketPose;
use super::vec3::Vec3;
use crate::error::{Error, Result};

pub const N_JOINTS: usize = 6;
pub const WRIST: usize = 5;

pub const ARM_REACH: f64 = 0.9;
pub const SHOULDER_HEIGHT: f64 = 1.0;
/// End-effector height gain of the lift joint (m per rad).
pub const LIFT_GAIN: f64 = 0.6;
pub const RACKET_RADIUS: f64 = 0.13;

/// Ready pose for the non-base joints: yaw facing the net, arm low on the
/// forehand side, level racket face.
pub const READY_POSE: [f64; 4] = [0.0, -0.45, 0.0, 0.0];

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct JointConfig {
    pub kp: [f64; N_JOINTS],
    pub kd: [f64; N_JOINTS],
    pub torque_limit: [f64; N_JOINTS],
    pub viscous_friction: [f64; N_JOINTS],
    pub q_lo: [f64; N_JOINTS],
    pub q_hi: [f64; N_JOINTS],
    pub qd_limit: [f64; N_JOINTS],
}

impl Default for JointConfig {
    fn default() -> Self {
        Self {
            kp: [150.0, 150.0, 100.0, 80.0, 60.0, 40.0],
            kd: [30.0, 30.0, 20.0, 12.0, 10.0, 6.0],
            torque_limit: [400.0, 400.0, 200.0, 120.0, 80.0, 40.0],
            viscous_friction: [3.0, 3.0, 1.5, 0.8, 0.6, 0.3],
            q_lo: [0.30, -5.30, -1.50, -2.60, -0.80, -1.30],
            q_hi: [11.50, 5.30, 1.50, 2.60, 1.20, 1.30],
            qd_limit: [7.0, 7.0, 8.0, 14.0, 10.0, 14.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub q: [f64; N_JOINTS],
    pub qd: [f64; N_JOINTS],
    /// Last executed PD command (base deltas, absolute joint targets).
    pub last_action: [f64; N_JOINTS],
}

impl AgentState {
    pub fn at_ready(base_x: f64, base_y: f64) -> Self {
        let mut q = [0.0; N_JOINTS];
        q[0] = base_x;
        q[1] = base_y;
        q[2..].copy_from_slice(&READY_POSE);
        Self { q, qd: [0.0; N_JOINTS], last_action: [0.0; N_JOINTS] }
    }

    /// Unit heading in the court frame; yaw 0 points at the net.
    pub fn heading(&self) -> (f64, f64) {
        (-self.q[2].cos(), -self.q[2].sin())
    }

    pub fn base_pos(&self) -> (f64, f64) {
        (self.q[0], self.q[1])
    }

    /// Racket center, face normal, and racket point velocity from the
    /// current joint state.
    pub fn racket_pose(&self) -> RacketPose {
        let az = std::f64::consts::PI + self.q[2] + self.q[3];
        let u = Vec3::new(az.cos(), az.sin(), 0.0);
        let center = Vec3::new(
            self.q[0] + ARM_REACH * u.x,
            self.q[1] + ARM_REACH * u.y,
            SHOULDER_HEIGHT + LIFT_GAIN * self.q[4],
        );
        // Tangent of the arm circle, tilted by the wrist toward +z.
        let n0 = Vec3::UNIT_Z.cross(u);
        let w = self.q[WRIST];
        let normal = n0 * w.cos() + Vec3::UNIT_Z * w.sin();
        let sweep = self.qd[2] + self.qd[3];
        let velocity = Vec3::new(
            self.qd[0] - ARM_REACH * az.sin() * sweep,
            self.qd[1] + ARM_REACH * az.cos() * sweep,
            LIFT_GAIN * self.qd[4],
        );
        RacketPose { center, normal, velocity, radius: RACKET_RADIUS }
    }

    pub fn is_finite(&self) -> bool {
        self.q.iter().chain(&self.qd).all(|v| v.is_finite())
    }
}

/// Per-substep bookkeeping for rewards and termination checks.
#[derive(Debug, Clone, Copy, Default)]
pub struct StepReport {
    pub torques: [f64; N_JOINTS],
    /// How far integration tried to push each joint past its limit (pre-clamp).
    pub pos_violation: [f64; N_JOINTS],
    /// Speed beyond the per-joint soft velocity limit.
    pub vel_violation: [f64; N_JOINTS],
}

/// Interpret a body command as PD targets. Base x/y entries are deltas from
/// the current pose, bounded by `base_delta_limit`; every other entry is an
/// absolute target clamped into the joint limits. With a 5-long `body` the
/// wrist target comes from `wrist_target`; a 6-long body carries its own.
pub fn command_to_targets(
    q: &[f64; N_JOINTS],
    body: &[f64],
    wrist_target: Option<f64>,
    cfg: &JointConfig,
    base_delta_limit: f64,
) -> [f64; N_JOINTS] {
    debug_assert!(body.len() == 5 || body.len() == 6);
    let mut target = [0.0; N_JOINTS];
    for i in 0..2 {
        let delta = body[i].clamp(-base_delta_limit, base_delta_limit);
        target[i] = (q[i] + delta).clamp(cfg.q_lo[i], cfg.q_hi[i]);
    }
    for i in 2..5 {
        target[i] = body[i].clamp(cfg.q_lo[i], cfg.q_hi[i]);
    }
    let wrist = match (wrist_target, body.len()) {
        (Some(w), _) => w,
        (None, 6) => body[5],
        _ => q[WRIST],
    };
    target[WRIST] = wrist.clamp(cfg.q_lo[WRIST], cfg.q_hi[WRIST]);
    target
}

/// One 2000 Hz PD substep: torque = kp(target − q) − kd·qd, clamped, then
/// unit-inertia integration with viscous friction. Joint limits clamp q and
/// zero the violating qd component.
pub fn step_agent(
    a: &mut AgentState,
    target: &[f64; N_JOINTS],
    cfg: &JointConfig,
    d: &DynamicsParams,
    dt: f64,
) -> Result<StepReport> {
    if target.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("agent PD target".into()));
    }
    let mut report = StepReport::default();
    let g = d.pd_gain_scale;
    for i in 0..N_JOINTS {
        let tau_raw = cfg.kp[i] * g * (target[i] - a.q[i]) - cfg.kd[i] * g * a.qd[i];
        let tau = tau_raw.clamp(-cfg.torque_limit[i], cfg.torque_limit[i]);
        report.torques[i] = tau;
        let friction = cfg.viscous_friction[i] * d.joint_friction_scale;
        let qdd = (tau - friction * a.qd[i]) / d.body_mass_scale;
        a.qd[i] += qdd * dt;
        a.q[i] += a.qd[i] * dt;
        if a.q[i] < cfg.q_lo[i] {
            report.pos_violation[i] = cfg.q_lo[i] - a.q[i];
            a.q[i] = cfg.q_lo[i];
            if a.qd[i] < 0.0 {
                a.qd[i] = 0.0;
            }
        } else if a.q[i] > cfg.q_hi[i] {
            report.pos_violation[i] = a.q[i] - cfg.q_hi[i];
            a.q[i] = cfg.q_hi[i];
            if a.qd[i] > 0.0 {
                a.qd[i] = 0.0;
            }
        }
        let over = a.qd[i].abs() - cfg.qd_limit[i];
        if over > 0.0 {
            report.vel_violation[i] = over;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::SIM_DT;

    #[test]
    fn pd_equilibrium_is_a_fixed_point() {
        let cfg = JointConfig::default();
        let d = DynamicsParams::nominal();
        let mut a = AgentState::at_ready(5.0, 0.0);
        let target = a.q;
        let before = a;
        let report = step_agent(&mut a, &target, &cfg, &d, SIM_DT).unwrap();
        assert!(report.torques.iter().all(|&t| t == 0.0));
        assert_eq!(a.q, before.q);
        assert_eq!(a.qd, before.qd);
    }

    #[test]
    fn overdamped_joint_converges_monotonically_to_ode_solution() {
        // Single joint, unit inertia, no friction/limits:
        // q̈ = kp (q* − q) − kd q̇ with kd² > 4 kp is overdamped.
        let mut cfg = JointConfig::default();
        cfg.kp = [16.0; N_JOINTS];
        cfg.kd = [10.0; N_JOINTS];
        cfg.viscous_friction = [0.0; N_JOINTS];
        cfg.torque_limit = [1e9; N_JOINTS];
        cfg.q_lo = [-1e9; N_JOINTS];
        cfg.q_hi = [1e9; N_JOINTS];
        let d = DynamicsParams::nominal();
        let mut a = AgentState::at_ready(5.0, 0.0);
        a.q = [0.0; N_JOINTS];
        a.qd = [0.0; N_JOINTS];
        let delta = 0.8;
        let mut target = [0.0; N_JOINTS];
        target[3] = delta;
        // Analytic solution of the linear ODE from rest.
        let (kp, kd) = (16.0_f64, 10.0_f64);
        let disc = (kd * kd - 4.0 * kp).sqrt();
        let r1 = (-kd + disc) / 2.0;
        let r2 = (-kd - disc) / 2.0;
        let c1 = delta * r2 / (r1 - r2);
        let c2 = -delta * r1 / (r1 - r2);
        let mut prev = 0.0;
        for step in 1..=6000 {
            step_agent(&mut a, &target, &cfg, &d, SIM_DT).unwrap();
            assert!(a.q[3] >= prev - 1e-12, "non-monotone at step {step}");
            prev = a.q[3];
            if step % 500 == 0 {
                let t = step as f64 * SIM_DT;
                let exact = delta + c1 * (r1 * t).exp() + c2 * (r2 * t).exp();
                assert!((a.q[3] - exact).abs() < 5e-3, "t={t} got {} want {exact}", a.q[3]);
            }
        }
        assert!((a.q[3] - delta).abs() < 0.01);
    }

    #[test]
    fn torque_clamps_at_limit() {
        let cfg = JointConfig::default();
        let d = DynamicsParams::nominal();
        let mut a = AgentState::at_ready(5.0, 0.0);
        let mut target = a.q;
        target[3] += 100.0;
        let report = step_agent(&mut a, &target, &cfg, &d, SIM_DT).unwrap();
        assert_eq!(report.torques[3], cfg.torque_limit[3]);
    }

    #[test]
    fn joint_limits_hold_after_every_step() {
        let cfg = JointConfig::default();
        let d = DynamicsParams::nominal();
        let mut a = AgentState::at_ready(5.0, 0.0);
        let target = [-100.0, 100.0, 100.0, -100.0, 100.0, -100.0];
        for _ in 0..5000 {
            step_agent(&mut a, &target, &cfg, &d, SIM_DT).unwrap();
            for i in 0..N_JOINTS {
                assert!(a.q[i] >= cfg.q_lo[i] && a.q[i] <= cfg.q_hi[i]);
            }
        }
        // Driven hard against the limits, the violation depth is recorded.
        let report = step_agent(&mut a, &target, &cfg, &d, SIM_DT).unwrap();
        assert!(report.pos_violation.iter().any(|&v| v > 0.0));
    }

    #[test]
    fn racket_pose_geometry() {
        // yaw = 0, shoulder = 0: arm points at the net (−x), face normal is
        // horizontal; positive wrist tilts the normal upward.
        let mut a = AgentState::at_ready(5.0, 1.0);
        a.q[3] = 0.0;
        let p = a.racket_pose();
        assert!((p.center.x - (5.0 - ARM_REACH)).abs() < 1e-12);
        assert!((p.center.y - 1.0).abs() < 1e-12);
        assert!((p.center.z - SHOULDER_HEIGHT).abs() < 1e-12);
        assert!(p.normal.z.abs() < 1e-12);
        a.q[WRIST] = 0.5;
        let tilted = a.racket_pose();
        assert!(tilted.normal.z > 0.0);
        assert!((tilted.normal.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn racket_velocity_tracks_sweep() {
        let mut a = AgentState::at_ready(5.0, 0.0);
        a.q[3] = 0.0;
        a.qd[3] = 2.0; // shoulder sweep only
        let p = a.racket_pose();
        // az = π: d/dt center = R·(−sin az, cos az)·sweep = R·(0, −1)·2.
        assert!(p.velocity.x.abs() < 1e-12);
        assert!((p.velocity.y + ARM_REACH * 2.0).abs() < 1e-12);
    }

    #[test]
    fn non_finite_target_rejected() {
        let cfg = JointConfig::default();
        let d = DynamicsParams::nominal();
        let mut a = AgentState::at_ready(5.0, 0.0);
        let target = [f64::NAN; N_JOINTS];
        assert!(step_agent(&mut a, &target, &cfg, &d, SIM_DT).is_err());
    }
}
