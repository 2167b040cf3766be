use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// PPO hyperparameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PpoConfig {
    pub clip_eps: f64,
    pub gamma: f64,
    pub gae_lambda: f64,
    pub learning_rate: f64,
    pub epochs_per_update: usize,
    pub minibatch_size: usize,
    pub entropy_coef: f64,
    pub value_coef: f64,
    /// Global L2 norm limit on each minibatch gradient.
    pub grad_clip_norm: f64,
    pub total_env_steps: usize,
    /// Complete episodes collected between policy updates.
    pub episodes_per_update: usize,
    pub hidden_sizes: Vec<usize>,
    /// Orthogonal-init gain of the logit projection.
    pub policy_init_gain: f64,
    /// Multiplier applied to environment rewards before GAE.
    pub reward_scale: f64,
    pub seed: u64,
}

impl Default for PpoConfig {
    fn default() -> Self {
        Self {
            clip_eps: 0.2,
            gamma: 0.99,
            gae_lambda: 0.95,
            learning_rate: 3e-4,
            epochs_per_update: 4,
            minibatch_size: 256,
            entropy_coef: 0.01,
            value_coef: 0.5,
            grad_clip_norm: 0.5,
            total_env_steps: 200_000,
            episodes_per_update: 16,
            hidden_sizes: vec![128, 128],
            policy_init_gain: 0.01,
            reward_scale: 1.0,
            seed: 0,
        }
    }
}

impl PpoConfig {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("clip_eps", self.clip_eps > 0.0 && self.clip_eps < 1.0),
            ("gamma", self.gamma > 0.0 && self.gamma <= 1.0),
            ("gae_lambda", self.gae_lambda > 0.0 && self.gae_lambda <= 1.0),
            ("learning_rate", self.learning_rate > 0.0 && self.learning_rate.is_finite()),
            ("epochs_per_update", self.epochs_per_update >= 1),
            ("minibatch_size", self.minibatch_size >= 1),
            ("entropy_coef", self.entropy_coef >= 0.0),
            ("value_coef", self.value_coef >= 0.0),
            ("grad_clip_norm", self.grad_clip_norm > 0.0),
            ("episodes_per_update", self.episodes_per_update >= 1),
            ("hidden_sizes", self.hidden_sizes.iter().all(|&h| h > 0)),
            ("policy_init_gain", self.policy_init_gain >= 0.0),
            ("reward_scale", self.reward_scale > 0.0 && self.reward_scale.is_finite()),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(Error::Config(format!("PPO parameter `{name}` is invalid")));
            }
        }
        Ok(())
    }
}
