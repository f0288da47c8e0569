//! Ball launcher. Samples a start on the opponent side and a speed in
//! [10, 20] m/s, then bisects the elevation angle against a drag-integrated
//! trajectory (nominal drag, coarse steps) until the landing point hits a
//! sampled aim point well inside the agent half. Episode drag is randomized
//! afterwards, so the aim box keeps a wide margin from every line.

use rand::Rng;

use super::ball::{BallState, BALL_RADIUS, GRAVITY};
use super::court::CourtGeometry;
use super::vec3::Vec3;
use crate::num::rng::Rng64;

const POS_X: (f64, f64) = (-11.0, -6.0);
const POS_Y: (f64, f64) = (-4.0, 4.0);
const POS_Z: (f64, f64) = (0.5, 1.5);
const SPEED: (f64, f64) = (10.0, 20.0);
/// Aim box, interior of the agent half.
const AIM_X: (f64, f64) = (3.0, 7.5);
const AIM_Y: (f64, f64) = (-3.2, 3.2);
/// Planning model: nominal drag for the angle solve, extreme drags for the
/// clearance/landing validation, coarse integration throughout.
const PLAN_K: f64 = 0.025;
const PLAN_K_LO: f64 = 0.01;
const PLAN_K_HI: f64 = 0.04;
const PLAN_DT: f64 = 2e-3;
const RANGE_TOL: f64 = 0.12;
const NET_MARGIN: f64 = 0.15;
const LINE_MARGIN: f64 = 0.6;
const MAX_BISECT: usize = 50;

/// Landing range along the horizontal direction and net-crossing height,
/// integrated with the planning model at drag coefficient `k`.
fn plan_flight(p0: Vec3, dir: (f64, f64), speed: f64, elev: f64, k: f64) -> (f64, Option<f64>) {
    let mut pos = p0;
    let mut vel = Vec3::new(
        speed * elev.cos() * dir.0,
        speed * elev.cos() * dir.1,
        speed * elev.sin(),
    );
    let mut net_z = None;
    for _ in 0..4000 {
        let a1 = Vec3::new(0.0, 0.0, -GRAVITY) - vel * (k * vel.norm());
        let v_mid = vel + a1 * (0.5 * PLAN_DT);
        let a2 = Vec3::new(0.0, 0.0, -GRAVITY) - v_mid * (k * v_mid.norm());
        let next_vel = vel + a2 * PLAN_DT;
        let next_pos = pos + (vel + next_vel) * (0.5 * PLAN_DT);
        if pos.x <= 0.0 && next_pos.x > 0.0 {
            let t = -pos.x / (next_pos.x - pos.x);
            net_z = Some(pos.z + t * (next_pos.z - pos.z));
        }
        if next_pos.z <= BALL_RADIUS && next_vel.z < 0.0 {
            let t = (pos.z - BALL_RADIUS) / (pos.z - next_pos.z).max(1e-12);
            let lx = pos.x + t * (next_pos.x - pos.x);
            let ly = pos.y + t * (next_pos.y - pos.y);
            let range = (lx - p0.x) * dir.0 + (ly - p0.y) * dir.1;
            return (range, net_z);
        }
        pos = next_pos;
        vel = next_vel;
    }
    (f64::INFINITY, net_z)
}

/// The flight must clear the net and land inside the agent half with
/// margin under the given drag.
fn flight_ok(court: &CourtGeometry, p0: Vec3, dir: (f64, f64), speed: f64, elev: f64, k: f64) -> bool {
    let (range, net_z) = plan_flight(p0, dir, speed, elev, k);
    if !range.is_finite() {
        return false;
    }
    match net_z {
        Some(z) if z >= court.net_height + NET_MARGIN => {}
        _ => return false,
    }
    let lx = p0.x + range * dir.0;
    let ly = p0.y + range * dir.1;
    lx > LINE_MARGIN
        && lx < court.half_length - LINE_MARGIN
        && ly.abs() < court.half_width - LINE_MARGIN
}

/// Sample one launch. Resamples internally until the angle solve converges
/// and the planned flight clears the net with margin.
pub fn launch_ball(rng: &mut Rng64, court: &CourtGeometry) -> BallState {
    loop {
        let p0 = Vec3::new(
            rng.random_range(POS_X.0..POS_X.1),
            rng.random_range(POS_Y.0..POS_Y.1),
            rng.random_range(POS_Z.0..POS_Z.1),
        );
        let speed = rng.random_range(SPEED.0..SPEED.1);
        let aim = (rng.random_range(AIM_X.0..AIM_X.1), rng.random_range(AIM_Y.0..AIM_Y.1));
        let dx = aim.0 - p0.x;
        let dy = aim.1 - p0.y;
        let dist = (dx * dx + dy * dy).sqrt();
        let dir = (dx / dist, dy / dist);

        // Bracket the target range on the rising branch of range(elev).
        let mut lo = -0.2f64;
        let mut hi = lo;
        let mut found = false;
        let mut prev_range = plan_flight(p0, dir, speed, lo, PLAN_K).0;
        for i in 1..=14 {
            let elev = lo + 0.08 * i as f64;
            let (range, _) = plan_flight(p0, dir, speed, elev, PLAN_K);
            if range >= dist && prev_range < dist {
                hi = elev;
                lo = elev - 0.08;
                found = true;
                break;
            }
            prev_range = range;
        }
        if !found {
            continue; // this speed cannot reach the aim point
        }
        let mut solved = None;
        for _ in 0..MAX_BISECT {
            let mid = 0.5 * (lo + hi);
            let (range, _) = plan_flight(p0, dir, speed, mid, PLAN_K);
            if (range - dist).abs() <= RANGE_TOL {
                solved = Some(mid);
                break;
            }
            if range < dist {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let Some(elev) = solved else {
            continue; // bisection failed to converge, resample
        };
        // Episode drag is sampled later; both extremes must stay legal.
        if !flight_ok(court, p0, dir, speed, elev, PLAN_K_LO)
            || !flight_ok(court, p0, dir, speed, elev, PLAN_K_HI)
        {
            continue;
        }
        let vel = Vec3::new(
            speed * elev.cos() * dir.0,
            speed * elev.cos() * dir.1,
            speed * elev.sin(),
        );
        return BallState::new(p0, vel);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rng::derive_rng;
    use crate::sim::ball::{step_ball, touching_ground};
    use crate::sim::dynamics::{DynamicsParams, RandRanges};
    use crate::sim::SIM_DT;

    #[test]
    fn fixed_seed_reproduces_launch() {
        let court = CourtGeometry::default();
        let a = launch_ball(&mut derive_rng(3, &[9]), &court);
        let b = launch_ball(&mut derive_rng(3, &[9]), &court);
        assert_eq!(a, b);
    }

    #[test]
    fn speed_within_declared_range() {
        let court = CourtGeometry::default();
        let mut rng = derive_rng(21, &[0]);
        for _ in 0..500 {
            let b = launch_ball(&mut rng, &court);
            let s = b.vel.norm();
            assert!((SPEED.0..=SPEED.1).contains(&s), "speed {s}");
            assert!(b.pos.x >= POS_X.0 && b.pos.x <= POS_X.1);
        }
    }

    #[test]
    fn every_launch_lands_in_agent_half_under_episode_dynamics() {
        let court = CourtGeometry::default();
        let ranges = RandRanges::default();
        let mut rng = derive_rng(77, &[1]);
        for trial in 0..10_000 {
            let d = DynamicsParams::sample(&mut rng, &ranges);
            let mut b = launch_ball(&mut rng, &court);
            let mut landed = false;
            for _ in 0..(4.0 / SIM_DT) as usize {
                b = step_ball(&b, &d, SIM_DT).unwrap();
                if touching_ground(&b) {
                    assert!(
                        court.inside_agent_half(b.pos.x, b.pos.y),
                        "trial {trial}: landed at ({:.2}, {:.2})",
                        b.pos.x,
                        b.pos.y
                    );
                    // Must also have cleared the net on the way.
                    landed = true;
                    break;
                }
                if b.pos.x > 0.0 && b.pos.x < 0.05 {
                    assert!(b.pos.z > court.net_height, "net clipped at z {}", b.pos.z);
                }
            }
            assert!(landed, "trial {trial} never landed");
        }
    }
}
