//! Clipped-surrogate PPO loss and its analytic gradient.

use super::config::PpoConfig;
use super::dist::{log_softmax, softmax, split_heads};
use super::network::NetworkParams;
use crate::error::Result;

/// One training example with its fixed targets.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainSample {
    pub obs: Vec<f64>,
    pub heads: Vec<usize>,
    /// Joint log-probability under the policy that collected the sample.
    pub old_log_prob: f64,
    pub advantage: f64,
    /// Value target.
    pub ret: f64,
}

/// Minibatch averages of the loss components.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LossStats {
    pub total: f64,
    pub policy: f64,
    pub value: f64,
    pub entropy: f64,
    pub clip_fraction: f64,
    pub approx_kl: f64,
}

/// Loss `−min(r·Â, clip(r)·Â) + c_v·(V − R)² − c_H·H`, averaged over the
/// batch, and its gradient with respect to every network parameter.
pub fn ppo_loss(
    params: &NetworkParams,
    batch: &[TrainSample],
    config: &PpoConfig,
) -> Result<(LossStats, Vec<f64>)> {
    let head_sizes = &params.shape.head_sizes;
    let mut grad = vec![0.0; params.len()];
    let mut stats = LossStats::default();
    let inv_b = 1.0 / batch.len().max(1) as f64;
    let eps = config.clip_eps;

    for s in batch {
        let (out, cache) = params.forward_cached(&s.obs)?;
        let mut log_prob = 0.0;
        let mut entropy = 0.0;
        let mut probs_per_head = Vec::with_capacity(head_sizes.len());
        for (l, &a) in split_heads(&out.logits, head_sizes).zip(&s.heads) {
            let lp = log_softmax(l);
            let p = softmax(l);
            log_prob += lp[a];
            let h: f64 = -p.iter().zip(&lp).map(|(pi, li)| pi * li).sum::<f64>();
            entropy += h;
            probs_per_head.push((p, lp, h));
        }

        let log_ratio = log_prob - s.old_log_prob;
        let ratio = log_ratio.exp();
        let unclipped = ratio * s.advantage;
        let clipped = ratio.clamp(1.0 - eps, 1.0 + eps) * s.advantage;
        let surrogate = unclipped.min(clipped);
        // d(−surrogate)/d(log π): nonzero only when the unclipped branch is the minimum
        let dlogp = if unclipped <= clipped { -ratio * s.advantage * inv_b } else { 0.0 };
        let value_err = out.value - s.ret;

        stats.policy -= surrogate * inv_b;
        stats.value += value_err * value_err * inv_b;
        stats.entropy += entropy * inv_b;
        if (ratio - 1.0).abs() > eps {
            stats.clip_fraction += inv_b;
        }
        stats.approx_kl += (ratio - 1.0 - log_ratio) * inv_b;

        let mut dlogits = Vec::with_capacity(out.logits.len());
        let ent_scale = config.entropy_coef * inv_b;
        for ((p, lp, h), &a) in probs_per_head.iter().zip(&s.heads) {
            for (j, (&pj, &lpj)) in p.iter().zip(lp).enumerate() {
                let onehot = if j == a { 1.0 } else { 0.0 };
                // −c_H·H contributes c_H·p_j(log p_j + H) per logit
                dlogits.push(dlogp * (onehot - pj) + ent_scale * pj * (lpj + h));
            }
        }
        let dvalue = 2.0 * config.value_coef * value_err * inv_b;
        params.backward(&cache, &dlogits, dvalue, &mut grad);
    }
    stats.total = stats.policy + config.value_coef * stats.value - config.entropy_coef * stats.entropy;
    Ok((stats, grad))
}
