use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::buffer::RolloutBuffer;
use super::config::PpoConfig;
use super::loss::{ppo_loss, LossStats, TrainSample};
use super::network::NetworkParams;
use crate::error::{Error, Result};

/// Adam optimiser state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Adam {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl Adam {
    pub fn new(n_params: usize) -> Self {
        Self { beta1: 0.9, beta2: 0.999, eps: 1e-8, m: vec![0.0; n_params], v: vec![0.0; n_params], t: 0 }
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t as i32);
        let bc2 = 1.0 - self.beta2.powi(self.t as i32);
        for (((p, g), m), v) in params.iter_mut().zip(grad).zip(&mut self.m).zip(&mut self.v) {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            *p -= lr * (*m / bc1) / ((*v / bc2).sqrt() + self.eps);
        }
    }
}

/// Scales `grad` so its L2 norm is at most `max_norm`; returns the norm before clipping.
pub fn clip_grad_norm(grad: &mut [f64], max_norm: f64) -> f64 {
    let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    if norm > max_norm {
        let k = max_norm / norm;
        grad.iter_mut().for_each(|g| *g *= k);
    }
    norm
}

/// Diagnostics of one policy update, averaged over all minibatch steps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct UpdateStats {
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub clip_fraction: f64,
    pub approx_kl: f64,
    pub grad_norm: f64,
    pub minibatches: usize,
}

/// Several epochs of shuffled-minibatch Adam steps on the clipped loss.
pub fn ppo_update<R: Rng>(
    params: &mut NetworkParams,
    optimizer: &mut Adam,
    buffer: &RolloutBuffer,
    config: &PpoConfig,
    rng: &mut R,
) -> Result<UpdateStats> {
    let samples = buffer.training_samples(config.gamma, config.gae_lambda)?;
    update_on_samples(params, optimizer, &samples, config, rng)
}

pub fn update_on_samples<R: Rng>(
    params: &mut NetworkParams,
    optimizer: &mut Adam,
    samples: &[TrainSample],
    config: &PpoConfig,
    rng: &mut R,
) -> Result<UpdateStats> {
    let mut order: Vec<usize> = (0..samples.len()).collect();
    let mut acc = UpdateStats::default();
    let mut batch = Vec::with_capacity(config.minibatch_size);
    for epoch in 0..config.epochs_per_update {
        order.shuffle(rng);
        for chunk in order.chunks(config.minibatch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| samples[i].clone()));
            let (stats, mut grad) = ppo_loss(params, &batch, config)?;
            check_finite(&stats, &grad, epoch, acc.minibatches)?;
            let norm = clip_grad_norm(&mut grad, config.grad_clip_norm);
            optimizer.step(&mut params.data, &grad, config.learning_rate);
            accumulate(&mut acc, &stats, norm);
        }
    }
    let n = acc.minibatches.max(1) as f64;
    acc.policy_loss /= n;
    acc.value_loss /= n;
    acc.entropy /= n;
    acc.clip_fraction /= n;
    acc.approx_kl /= n;
    acc.grad_norm /= n;
    Ok(acc)
}

fn accumulate(acc: &mut UpdateStats, s: &LossStats, grad_norm: f64) {
    acc.policy_loss += s.policy;
    acc.value_loss += s.value;
    acc.entropy += s.entropy;
    acc.clip_fraction += s.clip_fraction;
    acc.approx_kl += s.approx_kl;
    acc.grad_norm += grad_norm;
    acc.minibatches += 1;
}

fn check_finite(stats: &LossStats, grad: &[f64], epoch: usize, minibatch: usize) -> Result<()> {
    if stats.total.is_finite() && grad.iter().all(|g| g.is_finite()) {
        return Ok(());
    }
    let bad_grads = grad.iter().filter(|g| !g.is_finite()).count();
    Err(Error::NonFinite(format!(
        "epoch {epoch}, minibatch {minibatch}: total={} policy={} value={} entropy={} \
         kl={} clip_fraction={}; {bad_grads} non-finite gradient entries",
        stats.total, stats.policy, stats.value, stats.entropy, stats.approx_kl, stats.clip_fraction
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adam_moves_against_gradient() {
        let mut adam = Adam::new(2);
        let mut p = vec![1.0, -1.0];
        adam.step(&mut p, &[2.0, -3.0], 0.1);
        // first bias-corrected step has magnitude lr
        assert!((p[0] - 0.9).abs() < 1e-6);
        assert!((p[1] + 0.9).abs() < 1e-6);
    }

    #[test]
    fn adam_minimises_quadratic() {
        let mut adam = Adam::new(1);
        let mut x = vec![5.0];
        for _ in 0..2000 {
            let g = [2.0 * (x[0] - 1.5)];
            adam.step(&mut x, &g, 0.05);
        }
        assert!((x[0] - 1.5).abs() < 1e-3);
    }

    #[test]
    fn grad_clipping() {
        let mut g = vec![3.0, 4.0];
        assert_eq!(clip_grad_norm(&mut g, 1.0), 5.0);
        assert!((g[0] - 0.6).abs() < 1e-12 && (g[1] - 0.8).abs() < 1e-12);
        let mut g = vec![0.3, 0.4];
        clip_grad_norm(&mut g, 1.0);
        assert_eq!(g, vec![0.3, 0.4]);
    }
}
