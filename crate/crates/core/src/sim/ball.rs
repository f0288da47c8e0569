//! Ball flight and ground contact.
//!
//! Air drag follows a = −k · v · ‖v‖ (the mass in f = −k·m·v·‖v‖ cancels).
//! Flight integrates a midpoint step on velocity and a trapezoidal step on
//! position at 2000 Hz, which keeps the drag-free trajectory on the exact
//! parabola; an RK4 reference lives in the tests.

use serde::{Deserialize, Serialize};

use super::dynamics::DynamicsParams;
use super::vec3::Vec3;
use crate::error::{Error, Result};

pub const GRAVITY: f64 = 9.81;
pub const BALL_RADIUS: f64 = 0.033;
pub const BALL_MASS: f64 = 0.057;
pub const SIM_DT: f64 = 1.0 / 2000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallState {
    pub pos: Vec3,
    pub vel: Vec3,
    pub live: bool,
}

impl BallState {
    pub fn new(pos: Vec3, vel: Vec3) -> Self {
        Self { pos, vel, live: true }
    }

    pub fn dead() -> Self {
        Self { pos: Vec3::ZERO, vel: Vec3::ZERO, live: false }
    }
}

#[inline]
fn accel(v: Vec3, k: f64) -> Vec3 {
    Vec3::new(0.0, 0.0, -GRAVITY) - v * (k * v.norm())
}

/// One flight substep; contacts are handled by the caller.
pub fn step_ball(b: &BallState, d: &DynamicsParams, dt: f64) -> Result<BallState> {
    if !b.pos.is_finite() || !b.vel.is_finite() {
        return Err(Error::NonFinite("ball state".into()));
    }
    let a1 = accel(b.vel, d.drag_k);
    let v_mid = b.vel + a1 * (0.5 * dt);
    let a2 = accel(v_mid, d.drag_k);
    let vel = b.vel + a2 * dt;
    let pos = b.pos + (b.vel + vel) * (0.5 * dt);
    Ok(BallState { pos, vel, live: b.live })
}

/// Ground bounce: normal restitution e, tangential velocity scaled by
/// (1 − tangential_damping). Pre: pos.z ≤ radius and vel.z < 0.
pub fn ground_bounce(b: &BallState, d: &DynamicsParams) -> BallState {
    let keep = 1.0 - d.tangential_damping;
    BallState {
        pos: Vec3::new(b.pos.x, b.pos.y, BALL_RADIUS),
        vel: Vec3::new(b.vel.x * keep, b.vel.y * keep, -d.ground_restitution * b.vel.z),
        live: b.live,
    }
}

pub fn touching_ground(b: &BallState) -> bool {
    b.pos.z <= BALL_RADIUS && b.vel.z < 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nominal_k(k: f64) -> DynamicsParams {
        DynamicsParams { drag_k: k, ..DynamicsParams::nominal() }
    }

    /// RK4 reference integrator for the same force model.
    fn rk4_step(pos: Vec3, vel: Vec3, k: f64, dt: f64) -> (Vec3, Vec3) {
        let f = |v: Vec3| accel(v, k);
        let k1v = f(vel);
        let k1p = vel;
        let k2v = f(vel + k1v * (dt / 2.0));
        let k2p = vel + k1v * (dt / 2.0);
        let k3v = f(vel + k2v * (dt / 2.0));
        let k3p = vel + k2v * (dt / 2.0);
        let k4v = f(vel + k3v * dt);
        let k4p = vel + k3v * dt;
        let vel2 = vel + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (dt / 6.0);
        let pos2 = pos + (k1p + k2p * 2.0 + k3p * 2.0 + k4p) * (dt / 6.0);
        (pos2, vel2)
    }

    #[test]
    fn drag_free_matches_parabola() {
        let d = nominal_k(0.0);
        let v0 = Vec3::new(12.0, 0.0, 6.0);
        let p0 = Vec3::new(0.0, 0.0, 2.0);
        let mut b = BallState::new(p0, v0);
        let steps = 2000;
        for _ in 0..steps {
            b = step_ball(&b, &d, SIM_DT).unwrap();
        }
        let t = steps as f64 * SIM_DT;
        let exact = p0 + v0 * t + Vec3::new(0.0, 0.0, -0.5 * GRAVITY * t * t);
        assert!((b.pos - exact).norm() < 2e-3, "error {}", (b.pos - exact).norm());
    }

    #[test]
    fn free_fall_velocity_is_linear() {
        let d = nominal_k(0.0);
        let mut b = BallState::new(Vec3::new(0.0, 0.0, 100.0), Vec3::ZERO);
        for _ in 0..1000 {
            b = step_ball(&b, &d, SIM_DT).unwrap();
        }
        let t = 1000.0 * SIM_DT;
        assert!((b.vel.z + GRAVITY * t).abs() < 1e-9);
    }

    #[test]
    fn drag_matches_rk4_reference() {
        let d = nominal_k(0.04);
        let v0 = Vec3::new(20.0, 0.0, 0.0);
        let p0 = Vec3::new(0.0, 0.0, 50.0);
        let mut b = BallState::new(p0, v0);
        // Above the terminal speed √(g/k) drag dominates, so total speed
        // must fall strictly step over step.
        let terminal = (GRAVITY / d.drag_k).sqrt();
        for _ in 0..2000 {
            let before = b.vel.norm();
            b = step_ball(&b, &d, SIM_DT).unwrap();
            if before > terminal + 0.2 {
                assert!(b.vel.norm() < before);
            }
        }
        // RK4 at dt = 1e-5 over the same second.
        let (mut rp, mut rv) = (p0, v0);
        let fine = 1e-5;
        for _ in 0..100_000 {
            let (p2, v2) = rk4_step(rp, rv, d.drag_k, fine);
            rp = p2;
            rv = v2;
        }
        assert!((b.pos - rp).norm() < 1e-3, "pos err {}", (b.pos - rp).norm());
    }

    #[test]
    fn drag_never_increases_speed_beyond_gravity() {
        let d = nominal_k(0.04);
        let mut b = BallState::new(Vec3::new(0.0, 0.0, 5.0), Vec3::new(-8.0, 3.0, 9.0));
        for _ in 0..4000 {
            let before = b.vel.norm();
            b = step_ball(&b, &d, SIM_DT).unwrap();
            assert!(b.vel.norm() <= before + GRAVITY * SIM_DT + 1e-12);
        }
    }

    #[test]
    fn bounce_apex_follows_restitution_squared() {
        // Drop from 1 m above the contact plane with e = 0.75 and no drag:
        // rebound apex is e²·h = 0.5625 m within 1 %.
        let d = DynamicsParams {
            drag_k: 0.0,
            ground_restitution: 0.75,
            tangential_damping: 0.5,
            ..DynamicsParams::nominal()
        };
        let mut b = BallState::new(Vec3::new(0.0, 0.0, BALL_RADIUS + 1.0), Vec3::ZERO);
        let mut bounced = false;
        let mut apex: f64 = 0.0;
        for _ in 0..4000 {
            b = step_ball(&b, &d, SIM_DT).unwrap();
            if touching_ground(&b) {
                if bounced {
                    break;
                }
                b = ground_bounce(&b, &d);
                bounced = true;
            }
            if bounced {
                apex = apex.max(b.pos.z - BALL_RADIUS);
            }
        }
        assert!(bounced);
        assert!((apex - 0.5625).abs() / 0.5625 < 0.01, "apex {apex}");
    }

    #[test]
    fn vertical_impact_keeps_zero_tangential() {
        let d = DynamicsParams::nominal();
        let b = BallState::new(Vec3::new(1.0, 2.0, BALL_RADIUS), Vec3::new(0.0, 0.0, -5.0));
        let out = ground_bounce(&b, &d);
        assert_eq!(out.vel.x, 0.0);
        assert_eq!(out.vel.y, 0.0);
        assert!(out.vel.z > 0.0);
    }

    #[test]
    fn tangential_damping_scales_horizontal_velocity() {
        let d = DynamicsParams { tangential_damping: 0.4, ..DynamicsParams::nominal() };
        let b = BallState::new(Vec3::new(0.0, 0.0, BALL_RADIUS), Vec3::new(10.0, 0.0, -3.0));
        let out = ground_bounce(&b, &d);
        assert!((out.vel.x - 6.0).abs() < 1e-12);
    }

    #[test]
    fn bounce_dissipates_kinetic_energy() {
        let d = DynamicsParams::nominal();
        let b = BallState::new(Vec3::new(0.0, 0.0, BALL_RADIUS), Vec3::new(4.0, -2.0, -7.0));
        let out = ground_bounce(&b, &d);
        assert!(out.vel.dot(out.vel) < b.vel.dot(b.vel));
    }

    #[test]
    fn no_tunneling_at_30_mps() {
        let d = nominal_k(0.02);
        let mut b = BallState::new(Vec3::new(0.0, 0.0, 2.0), Vec3::new(0.0, 0.0, -30.0));
        let mut bounced = false;
        for _ in 0..2000 {
            b = step_ball(&b, &d, SIM_DT).unwrap();
            assert!(b.pos.z >= 0.0, "ball went through the floor: {}", b.pos.z);
            if touching_ground(&b) {
                b = ground_bounce(&b, &d);
                bounced = true;
            }
        }
        assert!(bounced);
    }
}
