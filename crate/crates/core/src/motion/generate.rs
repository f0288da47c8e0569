//! Scripted primitive-skill fragments. Each generator writes smooth joint
//! position curves from min-jerk phase blends, samples them at 50 Hz, and
//! derives reference velocities by central finite differences so that the
//! q/qd consistency invariant holds exactly.
//!
//! Crossover steps are kinematically indistinct from shuffles on a
//! holonomic base, so the shuffle generators cover both.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::corrupt::WristCorruption;
use super::library::{MotionFragment, MotionFrame};
use super::FRAME_DT;
use crate::error::{Error, Result};
use crate::num::rng::Rng64;
use crate::sim::agent::{N_JOINTS, READY_POSE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Skill {
    Forehand,
    Backhand,
    ShuffleLeft,
    ShuffleRight,
    Sprint,
    Ready,
}

impl Skill {
    pub const ALL: [Skill; 6] = [
        Skill::Forehand,
        Skill::Backhand,
        Skill::ShuffleLeft,
        Skill::ShuffleRight,
        Skill::Sprint,
        Skill::Ready,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Skill::Forehand => "forehand",
            Skill::Backhand => "backhand",
            Skill::ShuffleLeft => "shuffle-left",
            Skill::ShuffleRight => "shuffle-right",
            Skill::Sprint => "sprint",
            Skill::Ready => "ready",
        }
    }

    pub fn from_name(s: &str) -> Option<Skill> {
        Skill::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Style knobs with documented ranges (see [`Style::validate`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Style {
    /// Sweep / travel scale, in [0.7, 1.35].
    pub amplitude: f64,
    /// Speed scale, in [0.75, 1.3]; durations shrink as tempo grows.
    pub tempo: f64,
    /// Lateral stance offset of the base (m), in [−0.4, 0.4].
    pub stance_offset: f64,
}

impl Default for Style {
    fn default() -> Self {
        Self { amplitude: 1.0, tempo: 1.0, stance_offset: 0.0 }
    }
}

impl Style {
    pub fn validate(&self) -> Result<()> {
        if !(0.7..=1.35).contains(&self.amplitude)
            || !(0.75..=1.3).contains(&self.tempo)
            || !(-0.4..=0.4).contains(&self.stance_offset)
        {
            return Err(Error::InvalidArg(format!("style out of range: {self:?}")));
        }
        Ok(())
    }

    pub fn sample(cfg: &MotionConfig, rng: &mut Rng64) -> Style {
        Style {
            amplitude: rng.random_range(cfg.amplitude.0..cfg.amplitude.1),
            tempo: rng.random_range(cfg.tempo.0..cfg.tempo.1),
            stance_offset: rng.random_range(cfg.stance_offset.0..cfg.stance_offset.1),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MotionConfig {
    pub fragments_per_skill: usize,
    pub amplitude: (f64, f64),
    pub tempo: (f64, f64),
    pub stance_offset: (f64, f64),
    pub wrist: WristCorruption,
    /// Base anchor for generated fragments (court frame).
    pub anchor: (f64, f64),
}

impl Default for MotionConfig {
    fn default() -> Self {
        Self {
            fragments_per_skill: 50,
            amplitude: (0.85, 1.3),
            tempo: (0.8, 1.25),
            stance_offset: (-0.3, 0.3),
            wrist: WristCorruption::default(),
            anchor: (6.0, 0.0),
        }
    }
}

/// Min-jerk blend: zero velocity and acceleration at both ends.
fn blend(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
}

/// Piecewise curve through waypoints, each phase a min-jerk blend.
#[derive(Clone)]
struct Curve {
    /// (end time of phase, start value, end value), phases contiguous from 0.
    phases: Vec<(f64, f64, f64)>,
}

impl Curve {
    fn through(start: f64, legs: &[(f64, f64)]) -> Curve {
        // legs: (phase duration, target value)
        let mut phases = Vec::with_capacity(legs.len());
        let mut t = 0.0;
        let mut v = start;
        for &(dur, target) in legs {
            t += dur;
            phases.push((t, v, target));
            v = target;
        }
        Curve { phases }
    }

    fn constant(v: f64) -> Curve {
        Curve { phases: vec![(f64::INFINITY, v, v)] }
    }

    fn at(&self, t: f64) -> f64 {
        let mut t0 = 0.0;
        for &(t1, a, b) in &self.phases {
            if t <= t1 {
                let dur = t1 - t0;
                let u = if dur > 0.0 { (t - t0) / dur } else { 1.0 };
                return a + (b - a) * blend(u);
            }
            t0 = t1;
        }
        self.phases.last().map_or(0.0, |&(_, _, b)| b)
    }
}

struct Script {
    duration: f64,
    curves: [Curve; N_JOINTS],
}

fn ready_q(anchor: (f64, f64), stance: f64) -> [f64; N_JOINTS] {
    let mut q = [0.0; N_JOINTS];
    q[0] = anchor.0;
    q[1] = anchor.1 + stance;
    q[2..].copy_from_slice(&READY_POSE);
    q
}

fn script(skill: Skill, style: &Style, anchor: (f64, f64)) -> Script {
    let a = style.amplitude;
    let base = ready_q(anchor, style.stance_offset);
    let hold = |i: usize| Curve::constant(base[i]);
    match skill {
        Skill::Forehand | Skill::Backhand => {
            let d = 1.3 / style.tempo;
            let (back, follow) = match skill {
                // Forehand: backswing to the right (negative shoulder),
                // positive sweep through contact. Backhand mirrors it.
                Skill::Forehand => (base[3] - 1.1 * a, base[3] + 1.4 * a),
                _ => (base[3] + 1.1 * a + 0.9, base[3] - 1.4 * a + 0.2),
            };
            let legs = [(0.34 * d, back), (0.33 * d, follow), (0.33 * d, base[3])];
            let yaw_lean = if skill == Skill::Forehand { 0.15 } else { -0.15 } * a;
            Script {
                duration: d,
                curves: [
                    hold(0),
                    hold(1),
                    Curve::through(
                        base[2],
                        &[(0.34 * d, base[2] + yaw_lean), (0.66 * d, base[2])],
                    ),
                    Curve::through(base[3], &legs),
                    Curve::through(
                        base[4],
                        &[(0.34 * d, base[4]), (0.33 * d, base[4] + 0.25 * a), (0.33 * d, base[4])],
                    ),
                    Curve::through(
                        base[5],
                        &[(0.34 * d, base[5]), (0.33 * d, base[5] + 0.15 * a), (0.33 * d, base[5])],
                    ),
                ],
            }
        }
        Skill::ShuffleLeft | Skill::ShuffleRight => {
            let d = 1.6 / style.tempo;
            // Facing −x, the agent's left is −y.
            let sign = if skill == Skill::ShuffleLeft { -1.0 } else { 1.0 };
            let out = base[1] + sign * 0.9 * a;
            Script {
                duration: d,
                curves: [
                    hold(0),
                    Curve::through(base[1], &[(0.5 * d, out), (0.5 * d, base[1])]),
                    hold(2),
                    hold(3),
                    hold(4),
                    hold(5),
                ],
            }
        }
        Skill::Sprint => {
            let d = 1.5 / style.tempo;
            // Ramp toward the net and settle; velocity peaks mid-fragment.
            let target = base[0] - 2.2 * a;
            Script {
                duration: d,
                curves: [
                    Curve::through(base[0], &[(d, target)]),
                    hold(1),
                    hold(2),
                    hold(3),
                    hold(4),
                    hold(5),
                ],
            }
        }
        Skill::Ready => {
            let d = 1.6 / style.tempo;
            // Near-static: a slow, tiny sway of the lift joint.
            Script {
                duration: d,
                curves: [
                    hold(0),
                    hold(1),
                    hold(2),
                    hold(3),
                    Curve::through(base[4], &[(0.5 * d, base[4] + 0.01), (0.5 * d, base[4])]),
                    hold(5),
                ],
            }
        }
    }
}

/// Generate one clean (uncorrupted) fragment. The rng adds a small
/// per-fragment duration jitter on top of the style.
pub fn generate_fragment(skill: Skill, style: &Style, rng: &mut Rng64) -> Result<MotionFragment> {
    generate_fragment_anchored(skill, style, (6.0, 0.0), rng)
}

pub fn generate_fragment_anchored(
    skill: Skill,
    style: &Style,
    anchor: (f64, f64),
    rng: &mut Rng64,
) -> Result<MotionFragment> {
    style.validate()?;
    let jitter = 1.0 + rng.random_range(-0.03..0.03);
    let s = script(skill, style, anchor);
    let duration = (s.duration * jitter).clamp(1.0, 3.0);
    let n = (duration / FRAME_DT).round() as usize + 1;
    let mut frames: Vec<MotionFrame> = (0..n)
        .map(|i| {
            let t = i as f64 * FRAME_DT;
            let ts = (t / duration) * s.duration; // stretch script to jittered length
            let mut q = [0.0; N_JOINTS];
            for (j, c) in s.curves.iter().enumerate() {
                q[j] = c.at(ts);
            }
            MotionFrame { q_ref: q, qd_ref: [0.0; N_JOINTS], t }
        })
        .collect();
    recompute_velocities(&mut frames);
    Ok(MotionFragment { skill, frames })
}

/// Reference velocities as central finite differences of the positions
/// (one-sided at the ends).
pub fn recompute_velocities(frames: &mut [MotionFrame]) {
    let n = frames.len();
    if n < 2 {
        return;
    }
    for i in 0..n {
        let (lo, hi, dt) = if i == 0 {
            (0, 1, FRAME_DT)
        } else if i == n - 1 {
            (n - 2, n - 1, FRAME_DT)
        } else {
            (i - 1, i + 1, 2.0 * FRAME_DT)
        };
        for j in 0..N_JOINTS {
            frames[i].qd_ref[j] = (frames[hi].q_ref[j] - frames[lo].q_ref[j]) / dt;
        }
    }
}
