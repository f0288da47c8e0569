//! Dense feed-forward networks: tanh hidden layers, linear output,
//! analytic reverse-mode gradients. Everything is f64 and deterministic.

use rand::Rng;

use super::linalg::Matrix;
use super::rng::Rng64;
use crate::error::{Error, Result};

/// Layer widths of a fully-connected net. Hidden activation is tanh,
/// the output layer is linear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetSpec {
    pub widths: Vec<usize>,
}

impl NetSpec {
    pub fn new(widths: Vec<usize>) -> Result<Self> {
        if widths.len() < 2 {
            return Err(Error::InvalidArg("NetSpec needs at least 2 layers".into()));
        }
        if widths.iter().any(|&w| w == 0) {
            return Err(Error::InvalidArg("NetSpec widths must be >= 1".into()));
        }
        Ok(Self { widths })
    }

    pub fn input_dim(&self) -> usize {
        self.widths[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.widths.last().unwrap()
    }

    pub fn param_count(&self) -> usize {
        self.widths.windows(2).map(|w| w[1] * w[0] + w[1]).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    /// out × in
    pub w: Matrix,
    pub b: Vec<f64>,
}

/// All weights and biases of a net; also reused as the gradient container.
#[derive(Debug, Clone, PartialEq)]
pub struct NetParams {
    pub layers: Vec<Dense>,
}

/// Per-layer activations cached by [`NetParams::forward_traced`] for backprop.
#[derive(Debug, Clone)]
pub struct Trace {
    /// inputs[l] is the input vector fed to layer l; inputs.last() is the net output.
    pub inputs: Vec<Vec<f64>>,
}

impl Trace {
    pub fn output(&self) -> &[f64] {
        self.inputs.last().unwrap()
    }
}

fn orthogonalize_rows(m: &mut Matrix) {
    // Modified Gram-Schmidt over rows; rows beyond the rank keep their
    // normalized residual direction.
    let (rows, cols) = (m.rows, m.cols);
    for r in 0..rows {
        for p in 0..r.min(cols) {
            let proj: f64 = (0..cols).map(|c| m.get(r, c) * m.get(p, c)).sum();
            for c in 0..cols {
                let v = m.get(r, c) - proj * m.get(p, c);
                m.set(r, c, v);
            }
        }
        let n: f64 = (0..cols).map(|c| m.get(r, c).powi(2)).sum::<f64>().sqrt();
        if n > 1e-12 {
            for c in 0..cols {
                m.set(r, c, m.get(r, c) / n);
            }
        }
    }
}

impl NetParams {
    pub fn zeros(spec: &NetSpec) -> Self {
        let layers = spec
            .widths
            .windows(2)
            .map(|w| Dense { w: Matrix::zeros(w[1], w[0]), b: vec![0.0; w[1]] })
            .collect();
        Self { layers }
    }

    /// Orthogonal-style init: unit-gain hidden layers, `last_gain` on the
    /// output layer, zero biases.
    pub fn init(spec: &NetSpec, last_gain: f64, rng: &mut Rng64) -> Self {
        let n_layers = spec.widths.len() - 1;
        let mut params = Self::zeros(spec);
        for (l, layer) in params.layers.iter_mut().enumerate() {
            for v in layer.w.data.iter_mut() {
                // Box-Muller keeps us independent of distribution crates here.
                let u1: f64 = rng.random::<f64>().max(1e-12);
                let u2: f64 = rng.random::<f64>();
                *v = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
            }
            orthogonalize_rows(&mut layer.w);
            let gain = if l + 1 == n_layers { last_gain } else { 1.0 };
            for v in layer.w.data.iter_mut() {
                *v *= gain;
            }
        }
        params
    }

    pub fn spec(&self) -> NetSpec {
        let mut widths = vec![self.layers[0].w.cols];
        widths.extend(self.layers.iter().map(|l| l.w.rows));
        NetSpec { widths }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].w.cols
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().w.rows
    }

    fn check_input(&self, input: &[f64]) -> Result<()> {
        if input.len() != self.input_dim() {
            return Err(Error::Shape(format!(
                "net input length {} != first layer width {}",
                input.len(),
                self.input_dim()
            )));
        }
        Ok(())
    }

    /// Plain forward pass.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        self.check_input(input)?;
        let n = self.layers.len();
        let mut h = input.to_vec();
        for (l, layer) in self.layers.iter().enumerate() {
            let mut z = layer.b.clone();
            let mut wx = vec![0.0; layer.w.rows];
            layer.w.matvec(&h, &mut wx);
            for (zi, wi) in z.iter_mut().zip(&wx) {
                *zi += wi;
            }
            if l + 1 < n {
                for v in z.iter_mut() {
                    *v = v.tanh();
                }
            }
            h = z;
        }
        Ok(h)
    }

    /// Forward pass that caches every layer input for [`Self::backward`].
    pub fn forward_traced(&self, input: &[f64]) -> Result<Trace> {
        self.check_input(input)?;
        let n = self.layers.len();
        let mut inputs = Vec::with_capacity(n + 1);
        inputs.push(input.to_vec());
        for (l, layer) in self.layers.iter().enumerate() {
            let h = inputs.last().unwrap();
            let mut z = layer.b.clone();
            let mut wx = vec![0.0; layer.w.rows];
            layer.w.matvec(h, &mut wx);
            for (zi, wi) in z.iter_mut().zip(&wx) {
                *zi += wi;
            }
            if l + 1 < n {
                for v in z.iter_mut() {
                    *v = v.tanh();
                }
            }
            inputs.push(z);
        }
        Ok(Trace { inputs })
    }

    /// Reverse-mode gradients of `output · output_grad` w.r.t. every
    /// parameter (accumulated into `grads`) and the input (returned).
    pub fn backward(
        &self,
        trace: &Trace,
        output_grad: &[f64],
        grads: &mut NetParams,
    ) -> Result<Vec<f64>> {
        let n = self.layers.len();
        if output_grad.len() != self.output_dim() {
            return Err(Error::Shape(format!(
                "output_grad length {} != net output {}",
                output_grad.len(),
                self.output_dim()
            )));
        }
        if trace.inputs.len() != n + 1 {
            return Err(Error::Shape("trace does not match net depth".into()));
        }
        let mut delta = output_grad.to_vec();
        for l in (0..n).rev() {
            let layer = &self.layers[l];
            let h_in = &trace.inputs[l];
            // Hidden layers: activation derivative tanh' = 1 - h².
            if l + 1 < n {
                let h_out = &trace.inputs[l + 1];
                for (d, h) in delta.iter_mut().zip(h_out) {
                    *d *= 1.0 - h * h;
                }
            }
            let g = &mut grads.layers[l];
            for (r, &d) in delta.iter().enumerate() {
                g.b[r] += d;
                let row = &mut g.w.data[r * g.w.cols..(r + 1) * g.w.cols];
                for (gw, &hv) in row.iter_mut().zip(h_in) {
                    *gw += d * hv;
                }
            }
            let mut prev = vec![0.0; layer.w.cols];
            layer.w.matvec_t(&delta, &mut prev);
            delta = prev;
        }
        Ok(delta)
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.w.data.len() + l.b.len()).sum()
    }

    pub fn flatten_into(&self, out: &mut Vec<f64>) {
        out.clear();
        for l in &self.layers {
            out.extend_from_slice(&l.w.data);
            out.extend_from_slice(&l.b);
        }
    }

    pub fn assign_from_flat(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.param_count() {
            return Err(Error::Shape("flat vector length != param count".into()));
        }
        let mut off = 0;
        for l in self.layers.iter_mut() {
            let wn = l.w.data.len();
            l.w.data.copy_from_slice(&flat[off..off + wn]);
            off += wn;
            let bn = l.b.len();
            l.b.copy_from_slice(&flat[off..off + bn]);
            off += bn;
        }
        Ok(())
    }

    pub fn fill(&mut self, v: f64) {
        for l in self.layers.iter_mut() {
            l.w.data.fill(v);
            l.b.fill(v);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.layers.iter().all(|l| l.w.is_finite() && l.b.iter().all(|v| v.is_finite()))
    }
}
