//! Court geometry. The agent plays the x > 0 half; the net plane is x = 0.

use serde::{Deserialize, Serialize};

use super::vec3::Vec3;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CourtGeometry {
    pub half_length: f64,
    pub half_width: f64,
    /// Net height at the center line y = 0; treated as constant across y.
    pub net_height: f64,
    /// Landing point returns should aim for, on the opponent (x < 0) side.
    pub target: [f64; 2],
}

impl Default for CourtGeometry {
    fn default() -> Self {
        Self {
            half_length: 11.885,
            half_width: 5.485,
            net_height: 0.914,
            target: [-6.0, 0.0],
        }
    }
}

impl CourtGeometry {
    pub fn inside_agent_half(&self, x: f64, y: f64) -> bool {
        x > 0.0 && x <= self.half_length && y.abs() <= self.half_width
    }

    pub fn inside_opponent_half(&self, x: f64, y: f64) -> bool {
        x < 0.0 && x >= -self.half_length && y.abs() <= self.half_width
    }

    /// Midline of the opponent half splitting forecourt (near net) from backcourt.
    pub fn opponent_midline_x(&self) -> f64 {
        -self.half_length / 2.0
    }

    /// If the segment prev→next crosses the net plane, the interpolated
    /// (y, z) at the crossing.
    pub fn net_crossing(&self, prev: Vec3, next: Vec3) -> Option<(f64, f64)> {
        if (prev.x > 0.0) == (next.x > 0.0) || prev.x == next.x {
            return None;
        }
        let t = prev.x / (prev.x - next.x);
        let y = prev.y + t * (next.y - prev.y);
        let z = prev.z + t * (next.z - prev.z);
        Some((y, z))
    }

    /// A net crossing blocks the ball if it is below the tape and within
    /// the net span.
    pub fn blocked_by_net(&self, y: f64, z: f64) -> bool {
        z < self.net_height && y.abs() <= self.half_width + 0.5
    }
}
