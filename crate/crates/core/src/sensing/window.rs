//! Four-frame sliding window over observed ball positions. The velocity
//! estimate is the mean of the three consecutive finite differences, which
//! telescopes to (p_t − p_{t−3}) / (3·Δt) and cuts the estimator variance
//! 9× relative to single-frame differencing under i.i.d. position noise.

use crate::sim::vec3::Vec3;

pub const WINDOW: usize = 4;

#[derive(Debug, Clone, Default)]
pub struct BallObsWindow {
    /// Oldest-first (position, timestamp) pairs, at most WINDOW of them.
    frames: Vec<(Vec3, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityEstimate {
    pub vel: Vec3,
    /// True until at least two frames have been observed.
    pub cold: bool,
}

impl BallObsWindow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.frames.clear();
    }

    pub fn push(&mut self, pos: Vec3, t: f64) {
        if let Some(&(_, last_t)) = self.frames.last() {
            debug_assert!(t > last_t, "timestamps must be strictly increasing");
        }
        if self.frames.len() == WINDOW {
            self.frames.remove(0);
        }
        self.frames.push((pos, t));
    }

    pub fn is_full(&self) -> bool {
        self.frames.len() == WINDOW
    }

    /// Mean of consecutive finite differences over however many frames are
    /// available; a single frame (or none) yields a cold zero estimate.
    pub fn estimate_velocity(&self) -> VelocityEstimate {
        let n = self.frames.len();
        if n < 2 {
            return VelocityEstimate { vel: Vec3::ZERO, cold: true };
        }
        let (p0, t0) = self.frames[0];
        let (p1, t1) = self.frames[n - 1];
        let dt = t1 - t0;
        VelocityEstimate { vel: (p1 - p0) * (1.0 / dt), cold: false }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rng::derive_rng;
    use rand::Rng;

    const DT: f64 = 0.02;

    #[test]
    fn constant_velocity_is_exact() {
        // Positions 0, 1, 2, 3 at Δt = 0.02 → 50 m/s exactly.
        let mut w = BallObsWindow::new();
        for i in 0..4 {
            w.push(Vec3::new(i as f64, 0.0, 0.0), i as f64 * DT);
        }
        let est = w.estimate_velocity();
        assert!(!est.cold);
        assert_eq!(est.vel.x, 50.0);
        assert_eq!(est.vel.y, 0.0);
    }

    #[test]
    fn constant_position_gives_zero() {
        let mut w = BallObsWindow::new();
        for i in 0..4 {
            w.push(Vec3::new(2.0, -1.0, 0.5), i as f64 * DT);
        }
        assert_eq!(w.estimate_velocity().vel, Vec3::ZERO);
    }

    #[test]
    fn cold_until_two_frames() {
        let mut w = BallObsWindow::new();
        assert!(w.estimate_velocity().cold);
        w.push(Vec3::new(1.0, 0.0, 0.0), 0.0);
        assert!(w.estimate_velocity().cold);
        w.push(Vec3::new(1.1, 0.0, 0.0), DT);
        let est = w.estimate_velocity();
        assert!(!est.cold);
        assert!((est.vel.x - 0.1 / DT).abs() < 1e-9);
    }

    #[test]
    fn exact_on_affine_signals() {
        let mut rng = derive_rng(4, &[0]);
        for _ in 0..100 {
            let v = Vec3::new(
                rng.random_range(-30.0..30.0),
                rng.random_range(-30.0..30.0),
                rng.random_range(-30.0..30.0),
            );
            let p0 = Vec3::new(rng.random_range(-5.0..5.0), 0.0, 1.0);
            let mut w = BallObsWindow::new();
            for i in 0..4 {
                let t = i as f64 * DT;
                w.push(p0 + v * t, t);
            }
            let est = w.estimate_velocity();
            assert!((est.vel - v).norm() < 1e-9);
        }
    }

    #[test]
    fn window_variance_is_ninth_of_single_difference() {
        // i.i.d. position noise of std σ: single-frame differencing has
        // variance 2σ²/Δt², the telescoped 4-frame window 2σ²/(9Δt²).
        let sigma = 0.02;
        let mut rng = derive_rng(10, &[3]);
        let trials = 1_000_000;
        let (mut sum_sq_single, mut sum_sq_window) = (0.0, 0.0);
        let mut w = BallObsWindow::new();
        for trial in 0..trials {
            let noise: Vec<f64> = (0..4)
                .map(|_| {
                    let u1: f64 = rng.random::<f64>().max(1e-12);
                    let u2: f64 = rng.random::<f64>();
                    sigma * (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
                })
                .collect();
            // True position is constant, so estimates are pure noise.
            w.clear();
            for (i, n) in noise.iter().enumerate() {
                w.push(Vec3::new(*n, 0.0, 0.0), (trial * 4 + i) as f64 * DT);
            }
            let single = (noise[3] - noise[2]) / DT;
            let window = w.estimate_velocity().vel.x;
            sum_sq_single += single * single;
            sum_sq_window += window * window;
        }
        let var_single = sum_sq_single / trials as f64;
        let var_window = sum_sq_window / trials as f64;
        let expect_single = 2.0 * sigma * sigma / (DT * DT);
        let expect_window = expect_single / 9.0;
        assert!((var_single - expect_single).abs() / expect_single < 0.05);
        assert!((var_window - expect_window).abs() / expect_window < 0.05);
        assert!((var_single / var_window - 9.0).abs() < 0.45);
    }
}
