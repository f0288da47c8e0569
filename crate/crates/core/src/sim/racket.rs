//! Ball-racket contact: the racket is a rigid disc; an approaching ball
//! overlapping the disc reflects its relative velocity about the face
//! normal with the episode's racket restitution.

use serde::{Deserialize, Serialize};

use super::ball::{BallState, BALL_RADIUS};
use super::dynamics::DynamicsParams;
use super::vec3::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RacketPose {
    pub center: Vec3,
    /// Unit face normal.
    pub normal: Vec3,
    /// Velocity of the racket center point.
    pub velocity: Vec3,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContactKind {
    RacketHit,
    GroundBounce,
    Net,
    OutOfBounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactEvent {
    pub kind: ContactKind,
    pub time: f64,
    pub vel_before: Vec3,
    pub vel_after: Vec3,
}

/// Contact test + impulse. Returns the post-contact ball and an event when
/// the ball overlaps the disc and approaches the face.
pub fn racket_contact(
    b: &BallState,
    pose: &RacketPose,
    d: &DynamicsParams,
    time: f64,
) -> (BallState, Option<ContactEvent>) {
    let rel_pos = b.pos - pose.center;
    let dist_n = rel_pos.dot(pose.normal);
    let in_plane = rel_pos - pose.normal * dist_n;
    if dist_n.abs() > BALL_RADIUS || in_plane.norm() > pose.radius + BALL_RADIUS {
        return (*b, None);
    }
    // Orient the normal toward the ball's side so it reflects back out.
    let n = if dist_n >= 0.0 { pose.normal } else { -pose.normal };
    let rel_vel = b.vel - pose.velocity;
    let closing = rel_vel.dot(n);
    if closing >= 0.0 {
        return (*b, None);
    }
    let e = d.racket_restitution;
    let vel_after = b.vel - n * ((1.0 + e) * closing);
    let out = BallState { pos: b.pos, vel: vel_after, live: b.live };
    let event = ContactEvent { kind: ContactKind::RacketHit, time, vel_before: b.vel, vel_after };
    (out, Some(event))
}
