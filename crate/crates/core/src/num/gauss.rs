//! Diagonal-Gaussian operations: KL divergence, reparameterized sampling,
//! log density, and their analytic gradients.

use rand::Rng;
use rand_distr::StandardNormal;

use super::rng::Rng64;
use crate::error::{Error, Result};

pub const LN_2PI: f64 = 1.8378770664093453;

/// Mean/std pair with strictly positive std.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagGaussian {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl DiagGaussian {
    pub fn new(mean: Vec<f64>, std: Vec<f64>) -> Result<Self> {
        if mean.len() != std.len() {
            return Err(Error::Shape("DiagGaussian mean/std length mismatch".into()));
        }
        if std.iter().any(|&s| !(s > 0.0)) {
            return Err(Error::InvalidArg("DiagGaussian std must be strictly positive".into()));
        }
        Ok(Self { mean, std })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// z = mean + std ⊙ noise, noise ~ N(0, I). The noise is returned so
    /// callers can reparameterize gradients through the sample.
    pub fn sample(&self, rng: &mut Rng64) -> (Vec<f64>, Vec<f64>) {
        let noise: Vec<f64> = (0..self.dim()).map(|_| rng.sample(StandardNormal)).collect();
        let z = self
            .mean
            .iter()
            .zip(&self.std)
            .zip(&noise)
            .map(|((m, s), n)| m + s * n)
            .collect();
        (z, noise)
    }

    pub fn log_prob(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::Shape("log_prob dimension mismatch".into()));
        }
        let mut acc = 0.0;
        for ((m, s), v) in self.mean.iter().zip(&self.std).zip(x) {
            let u = (v - m) / s;
            acc += -0.5 * u * u - s.ln() - 0.5 * LN_2PI;
        }
        Ok(acc)
    }

    /// d log N(x; μ, σ) / d(μ, σ, x).
    pub fn log_prob_grads(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        if x.len() != self.dim() {
            return Err(Error::Shape("log_prob dimension mismatch".into()));
        }
        let d = self.dim();
        let (mut dm, mut ds, mut dx) = (vec![0.0; d], vec![0.0; d], vec![0.0; d]);
        for i in 0..d {
            let s = self.std[i];
            let u = (x[i] - self.mean[i]) / s;
            dm[i] = u / s;
            ds[i] = (u * u - 1.0) / s;
            dx[i] = -u / s;
        }
        Ok((dm, ds, dx))
    }

    /// Entropy of the distribution: Σ ln σ + d/2 (1 + ln 2π).
    pub fn entropy(&self) -> f64 {
        let d = self.dim() as f64;
        self.std.iter().map(|s| s.ln()).sum::<f64>() + 0.5 * d * (1.0 + LN_2PI)
    }
}

/// Closed-form KL(q ‖ p) for diagonal Gaussians, summed over dimensions:
///   Σ  ln(σp/σq) + (σq² + (μq−μp)²) / (2 σp²) − ½.
pub fn gaussian_kl(q: &DiagGaussian, p: &DiagGaussian) -> Result<f64> {
    if q.dim() != p.dim() {
        return Err(Error::Shape("gaussian_kl dimension mismatch".into()));
    }
    let mut acc = 0.0;
    for i in 0..q.dim() {
        let (mq, sq) = (q.mean[i], q.std[i]);
        let (mp, sp) = (p.mean[i], p.std[i]);
        let d = mq - mp;
        acc += (sp / sq).ln() + (sq * sq + d * d) / (2.0 * sp * sp) - 0.5;
    }
    Ok(acc)
}

/// Gradients of `gaussian_kl` w.r.t. (μq, σq, μp, σp).
pub fn gaussian_kl_grads(
    q: &DiagGaussian,
    p: &DiagGaussian,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)> {
    if q.dim() != p.dim() {
        return Err(Error::Shape("gaussian_kl dimension mismatch".into()));
    }
    let d = q.dim();
    let (mut dmq, mut dsq, mut dmp, mut dsp) =
        (vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d]);
    for i in 0..d {
        let (mq, sq) = (q.mean[i], q.std[i]);
        let (mp, sp) = (p.mean[i], p.std[i]);
        let diff = mq - mp;
        let sp2 = sp * sp;
        dmq[i] = diff / sp2;
        dmp[i] = -diff / sp2;
        dsq[i] = -1.0 / sq + sq / sp2;
        dsp[i] = 1.0 / sp - (sq * sq + diff * diff) / (sp2 * sp);
    }
    Ok((dmq, dsq, dmp, dsp))
}

/// softplus(x) + floor, used to map raw net outputs to strictly positive stds.
pub fn softplus_std(raw: f64, floor: f64) -> f64 {
    let sp = if raw > 30.0 { raw } else { (1.0 + raw.exp()).ln() };
    sp + floor
}

/// d softplus_std / d raw = sigmoid(raw).
pub fn softplus_std_grad(raw: f64) -> f64 {
    if raw > 30.0 {
        1.0
    } else {
        let e = raw.exp();
        e / (1.0 + e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rng::derive_rng;

    #[test]
    fn kl_of_identical_is_zero() {
        let g = DiagGaussian::new(vec![0.3, -1.2], vec![0.5, 2.0]).unwrap();
        assert!(gaussian_kl(&g, &g).unwrap().abs() < 1e-15);
    }

    #[test]
    fn kl_unit_variance_shifted_mean() {
        // KL(N(1,1) ‖ N(0,1)) = μ²/2 = 0.5 in one dimension.
        let q = DiagGaussian::new(vec![1.0], vec![1.0]).unwrap();
        let p = DiagGaussian::new(vec![0.0], vec![1.0]).unwrap();
        assert!((gaussian_kl(&q, &p).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn kl_nonnegative_random_pairs() {
        let mut rng = derive_rng(3, &[7]);
        use rand::Rng;
        for _ in 0..200 {
            let d = 1 + (rng.random::<u32>() % 6) as usize;
            let mk = |rng: &mut crate::num::rng::Rng64| -> DiagGaussian {
                let mean = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
                let std = (0..d).map(|_| rng.random_range(0.1..3.0)).collect();
                DiagGaussian::new(mean, std).unwrap()
            };
            let q = mk(&mut rng);
            let p = mk(&mut rng);
            assert!(gaussian_kl(&q, &p).unwrap() >= 0.0);
        }
    }

    #[test]
    fn sample_tight_std_recovers_mean() {
        let g = DiagGaussian::new(vec![1.5, -0.4], vec![1e-12, 1e-12]).unwrap();
        let mut rng = derive_rng(0, &[1]);
        let (z, _) = g.sample(&mut rng);
        assert!((z[0] - 1.5).abs() < 1e-10);
        assert!((z[1] + 0.4).abs() < 1e-10);
    }

    #[test]
    fn sample_deterministic_under_seed() {
        let g = DiagGaussian::new(vec![0.0; 4], vec![1.0; 4]).unwrap();
        let (z1, n1) = g.sample(&mut derive_rng(11, &[2]));
        let (z2, n2) = g.sample(&mut derive_rng(11, &[2]));
        assert_eq!(z1, z2);
        assert_eq!(n1, n2);
    }

    #[test]
    fn log_prob_standard_normal_at_origin() {
        for d in [1usize, 3, 8] {
            let g = DiagGaussian::new(vec![0.0; d], vec![1.0; d]).unwrap();
            let lp = g.log_prob(&vec![0.0; d]).unwrap();
            assert!((lp + 0.5 * d as f64 * LN_2PI).abs() < 1e-12);
        }
    }

    #[test]
    fn log_prob_translation_invariant() {
        let g = DiagGaussian::new(vec![0.2, -0.7], vec![0.9, 1.7]).unwrap();
        let x = [0.5, 0.1];
        let shift = [3.1, -2.2];
        let shifted = DiagGaussian::new(
            g.mean.iter().zip(&shift).map(|(m, s)| m + s).collect(),
            g.std.clone(),
        )
        .unwrap();
        let xs: Vec<f64> = x.iter().zip(&shift).map(|(v, s)| v + s).collect();
        let a = g.log_prob(&x).unwrap();
        let b = shifted.log_prob(&xs).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn log_prob_normalizes_by_quadrature() {
        // Simpson integration of exp(log_prob) over ±8σ must give 1.
        let g = DiagGaussian::new(vec![0.37], vec![1.42]).unwrap();
        let (lo, hi) = (g.mean[0] - 8.0 * g.std[0], g.mean[0] + 8.0 * g.std[0]);
        let n = 2000;
        let h = (hi - lo) / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let x = lo + i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * g.log_prob(&[x]).unwrap().exp();
        }
        acc *= h / 3.0;
        assert!((acc - 1.0).abs() < 1e-3, "integral {acc}");
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let q = DiagGaussian::new(vec![0.0], vec![1.0]).unwrap();
        let p = DiagGaussian::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert!(gaussian_kl(&q, &p).is_err());
        assert!(q.log_prob(&[0.0, 1.0]).is_err());
        assert!(DiagGaussian::new(vec![0.0], vec![0.0]).is_err());
    }
}
