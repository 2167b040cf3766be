//! Shared-trunk actor–critic MLP with manual backpropagation.
//!
//! Parameters live in one flat `Vec<f64>`. For every hidden layer `l` the
//! block is `W_l` (row-major, `[out, in]`) followed by `b_l`; then the policy
//! projection `W_pi [L, H]`, `b_pi [L]` where `L` is the sum of all head
//! sizes, and finally the value projection `w_v [H]`, `b_v [1]`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkShape {
    pub obs_dim: usize,
    pub hidden: Vec<usize>,
    pub head_sizes: Vec<usize>,
}

/// Location of one dense layer inside the flat parameter vector.
#[derive(Clone, Copy, Debug)]
struct Dense {
    w: usize,
    b: usize,
    n_in: usize,
    n_out: usize,
}

impl Dense {
    fn len(&self) -> usize {
        self.n_out * (self.n_in + 1)
    }
}

impl NetworkShape {
    pub fn logits_len(&self) -> usize {
        self.head_sizes.iter().sum()
    }

    fn trunk_out(&self) -> usize {
        self.hidden.last().copied().unwrap_or(self.obs_dim)
    }

    fn layout(&self) -> (Vec<Dense>, Dense, Dense) {
        let mut offset = 0;
        let mut dense = |n_in, n_out| {
            let d = Dense { w: offset, b: offset + n_in * n_out, n_in, n_out };
            offset += d.len();
            d
        };
        let mut n_in = self.obs_dim;
        let mut trunk = Vec::with_capacity(self.hidden.len());
        for &h in &self.hidden {
            trunk.push(dense(n_in, h));
            n_in = h;
        }
        let policy = dense(n_in, self.logits_len());
        let value = dense(n_in, 1);
        (trunk, policy, value)
    }

    pub fn n_params(&self) -> usize {
        let (trunk, policy, value) = self.layout();
        trunk.iter().map(Dense::len).sum::<usize>() + policy.len() + value.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    pub shape: NetworkShape,
    pub data: Vec<f64>,
}

/// Output of one forward pass.
#[derive(Clone, Debug, PartialEq)]
pub struct Forward {
    /// Concatenated logits of every categorical head.
    pub logits: Vec<f64>,
    pub value: f64,
}

/// Activations kept for backpropagation.
#[derive(Clone, Debug)]
pub struct ForwardCache {
    input: Vec<f64>,
    /// tanh outputs of every hidden layer.
    hidden: Vec<Vec<f64>>,
}

fn dense_forward(data: &[f64], d: Dense, x: &[f64], out: &mut [f64]) {
    let w = &data[d.w..d.b];
    let b = &data[d.b..d.b + d.n_out];
    for (o, (row, bias)) in out.iter_mut().zip(w.chunks_exact(d.n_in).zip(b)) {
        *o = bias + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    }
}

/// Accumulates parameter gradients of a dense layer and, when `dx` is given,
/// the gradient with respect to its input.
fn dense_backward(
    data: &[f64],
    grad: &mut [f64],
    d: Dense,
    x: &[f64],
    dy: &[f64],
    dx: Option<&mut [f64]>,
) {
    for (j, &g) in dy.iter().enumerate() {
        if g == 0.0 {
            continue;
        }
        let row = &mut grad[d.w + j * d.n_in..d.w + (j + 1) * d.n_in];
        for (r, &xi) in row.iter_mut().zip(x) {
            *r += g * xi;
        }
        grad[d.b + j] += g;
    }
    if let Some(dx) = dx {
        dx.iter_mut().for_each(|v| *v = 0.0);
        let w = &data[d.w..d.b];
        for (row, &g) in w.chunks_exact(d.n_in).zip(dy) {
            if g == 0.0 {
                continue;
            }
            for (v, &wij) in dx.iter_mut().zip(row) {
                *v += g * wij;
            }
        }
    }
}

/// Fills `w` ([rows, cols], row-major) with a scaled orthonormal basis.
fn orthogonal_init<R: Rng>(rng: &mut R, w: &mut [f64], rows: usize, cols: usize, gain: f64) {
    // Orthonormalise along the longer dimension.
    let transpose = rows > cols;
    let (n, m) = if transpose { (cols, rows) } else { (rows, cols) };
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        for u in &basis {
            let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= dot * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|a| *a /= norm);
            basis.push(v);
        }
    }
    for r in 0..rows {
        for c in 0..cols {
            let v = if transpose { basis[c][r] } else { basis[r][c] };
            w[r * cols + c] = gain * v;
        }
    }
}

impl NetworkParams {
    pub fn zeros(shape: NetworkShape) -> Self {
        let n = shape.n_params();
        Self { shape, data: vec![0.0; n] }
    }

    /// Orthogonal weights (gain √2 in the trunk, `policy_gain` on the logits,
    /// 1 on the value head) and zero biases.
    pub fn init<R: Rng>(shape: NetworkShape, rng: &mut R, policy_gain: f64) -> Self {
        let mut p = Self::zeros(shape);
        let (trunk, policy, value) = p.shape.layout();
        for d in trunk {
            orthogonal_init(rng, &mut p.data[d.w..d.b], d.n_out, d.n_in, 2f64.sqrt());
        }
        orthogonal_init(rng, &mut p.data[policy.w..policy.b], policy.n_out, policy.n_in, policy_gain);
        orthogonal_init(rng, &mut p.data[value.w..value.b], value.n_out, value.n_in, 1.0);
        p
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.data.len() != self.shape.n_params() {
            return Err(Error::Shape(format!(
                "parameter vector has {} entries, shape needs {}",
                self.data.len(),
                self.shape.n_params()
            )));
        }
        if self.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("network parameters".into()));
        }
        Ok(())
    }

    fn check_obs(&self, obs: &[f64]) -> Result<()> {
        if obs.len() != self.shape.obs_dim {
            return Err(Error::Shape(format!(
                "observation has {} features, network expects {}",
                obs.len(),
                self.shape.obs_dim
            )));
        }
        Ok(())
    }

    pub fn forward(&self, obs: &[f64]) -> Result<Forward> {
        Ok(self.forward_cached(obs)?.0)
    }

    pub fn forward_batch(&self, batch: &[Vec<f64>]) -> Result<Vec<Forward>> {
        batch.iter().map(|o| self.forward(o)).collect()
    }

    pub fn forward_cached(&self, obs: &[f64]) -> Result<(Forward, ForwardCache)> {
        self.check_obs(obs)?;
        let (trunk, policy, value) = self.shape.layout();
        let mut hidden = Vec::with_capacity(trunk.len());
        let mut x: &[f64] = obs;
        for d in &trunk {
            let mut h = vec![0.0; d.n_out];
            dense_forward(&self.data, *d, x, &mut h);
            h.iter_mut().for_each(|v| *v = v.tanh());
            hidden.push(h);
            x = hidden.last().unwrap();
        }
        let mut logits = vec![0.0; policy.n_out];
        dense_forward(&self.data, policy, x, &mut logits);
        let mut v = [0.0];
        dense_forward(&self.data, value, x, &mut v);
        let cache = ForwardCache { input: obs.to_vec(), hidden };
        Ok((Forward { logits, value: v[0] }, cache))
    }

    /// Adds the gradient of a scalar loss into `grad`, given the loss
    /// gradients with respect to the logits and the value output.
    pub fn backward(&self, cache: &ForwardCache, dlogits: &[f64], dvalue: f64, grad: &mut [f64]) {
        let (trunk, policy, value) = self.shape.layout();
        let top: &[f64] = cache.hidden.last().map(Vec::as_slice).unwrap_or(&cache.input);
        let mut dh = vec![0.0; self.shape.trunk_out()];
        let mut dh_value = vec![0.0; self.shape.trunk_out()];
        dense_backward(&self.data, grad, policy, top, dlogits, Some(&mut dh));
        dense_backward(&self.data, grad, value, top, &[dvalue], Some(&mut dh_value));
        dh.iter_mut().zip(&dh_value).for_each(|(a, b)| *a += b);

        for (l, d) in trunk.iter().enumerate().rev() {
            // through tanh
            for (g, h) in dh.iter_mut().zip(&cache.hidden[l]) {
                *g *= 1.0 - h * h;
            }
            let x: &[f64] = if l == 0 { &cache.input } else { &cache.hidden[l - 1] };
            if l == 0 {
                dense_backward(&self.data, grad, *d, x, &dh, None);
            } else {
                let mut dx = vec![0.0; d.n_in];
                dense_backward(&self.data, grad, *d, x, &dh, Some(&mut dx));
                dh = dx;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn shape() -> NetworkShape {
        NetworkShape { obs_dim: 3, hidden: vec![4, 5], head_sizes: vec![2, 3] }
    }

    #[test]
    fn parameter_count() {
        // 3→4: 16, 4→5: 25, 5→5 logits: 30, 5→1 value: 6
        assert_eq!(shape().n_params(), 77);
    }

    #[test]
    fn zero_network_is_uniform_with_zero_value() {
        let p = NetworkParams::zeros(shape());
        let f = p.forward(&[0.3, -1.0, 2.0]).unwrap();
        assert!(f.logits.iter().all(|&l| l == 0.0));
        assert_eq!(f.value, 0.0);
    }

    #[test]
    fn batched_forward_matches_single() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = NetworkParams::init(shape(), &mut rng, 1.0);
        let batch = vec![vec![0.1, 0.2, 0.3], vec![-1.0, 0.5, 0.0]];
        let out = p.forward_batch(&batch).unwrap();
        for (o, x) in out.iter().zip(&batch) {
            assert_eq!(*o, p.forward(x).unwrap());
        }
        assert!(p.forward(&[1.0]).is_err());
    }

    #[test]
    fn orthogonal_rows_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (rows, cols) = (4, 9);
        let mut w = vec![0.0; rows * cols];
        orthogonal_init(&mut rng, &mut w, rows, cols, 1.0);
        for i in 0..rows {
            for j in 0..rows {
                let dot: f64 = (0..cols).map(|c| w[i * cols + c] * w[j * cols + c]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn backward_matches_finite_differences_on_linear_readout() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = NetworkParams::init(shape(), &mut rng, 1.0);
        let x = [0.4, -0.2, 0.9];
        let c = [0.3, -0.7, 1.1, 0.2, -0.5];
        let cv = 0.8;
        let loss = |q: &NetworkParams| {
            let f = q.forward(&x).unwrap();
            f.logits.iter().zip(&c).map(|(a, b)| a * b).sum::<f64>() + cv * f.value
        };
        let (_, cache) = p.forward_cached(&x).unwrap();
        let mut g = vec![0.0; p.len()];
        p.backward(&cache, &c, cv, &mut g);
        let h = 1e-6;
        for i in 0..p.len() {
            let mut plus = p.clone();
            plus.data[i] += h;
            let mut minus = p.clone();
            minus.data[i] -= h;
            let fd = (loss(&plus) - loss(&minus)) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-7 * (1.0 + fd.abs()), "param {i}: {fd} vs {}", g[i]);
        }
    }
}
