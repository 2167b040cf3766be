//! Rollout collection and the outer PPO training loop.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::buffer::{RolloutBuffer, Transition};
use super::config::PpoConfig;
use super::dist::sample_action;
use super::gae::Boundary;
use super::network::{NetworkParams, NetworkShape};
use super::update::{ppo_update, Adam};
use crate::error::Result;

/// Result of one environment transition as seen by the learner.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvStep {
    pub obs: Vec<f64>,
    pub reward: f64,
    /// Reached a terminal state (no bootstrap).
    pub terminated: bool,
    /// Cut off by the horizon (bootstrap from `obs`).
    pub truncated: bool,
}

/// Episodic environment with a factored discrete action space.
pub trait Environment {
    fn obs_dim(&self) -> usize;
    fn head_sizes(&self) -> Vec<usize>;
    /// Starts a new episode; `seed` selects the episode's randomised layout.
    fn reset(&mut self, seed: u64) -> Result<Vec<f64>>;
    fn step(&mut self, heads: &[usize]) -> Result<EnvStep>;
}

/// One row of the learning curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub update: usize,
    pub env_steps: usize,
    pub episodes: usize,
    /// Mean undiscounted episode return of the rollouts used in this update.
    pub mean_return: f64,
    pub mean_length: f64,
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub clip_fraction: f64,
    pub approx_kl: f64,
}

#[derive(Clone, Debug)]
pub struct TrainOutput {
    pub params: NetworkParams,
    pub curve: Vec<CurvePoint>,
}

/// Runs one episode with the stochastic policy, appending to `buffer`.
/// Returns (undiscounted return, length).
pub fn collect_episode<E: Environment, R: RngCore>(
    env: &mut E,
    params: &NetworkParams,
    episode_seed: u64,
    reward_scale: f64,
    rng: &mut R,
    buffer: &mut RolloutBuffer,
) -> Result<(f64, usize)> {
    let head_sizes = env.head_sizes();
    let mut obs = env.reset(episode_seed)?;
    let mut ret = 0.0;
    let mut len = 0;
    loop {
        let out = params.forward(&obs)?;
        let action = sample_action(&out.logits, &head_sizes, rng);
        let step = env.step(&action.heads)?;
        ret += step.reward;
        len += 1;
        let boundary = if step.terminated {
            Boundary::Terminated
        } else if step.truncated {
            Boundary::Truncated { bootstrap: params.forward(&step.obs)?.value }
        } else {
            Boundary::Continue
        };
        buffer.push(Transition {
            obs: std::mem::replace(&mut obs, step.obs),
            heads: action.heads,
            log_prob: action.log_prob,
            value: out.value,
            reward: step.reward * reward_scale,
            boundary,
        });
        if !matches!(boundary, Boundary::Continue) {
            return Ok((ret, len));
        }
    }
}

pub fn train<E: Environment>(env: &mut E, config: &PpoConfig) -> Result<TrainOutput> {
    train_with_progress(env, config, |_| {})
}

/// Alternates rollouts and updates until `total_env_steps` is reached,
/// calling `progress` after every update.
pub fn train_with_progress<E: Environment>(
    env: &mut E,
    config: &PpoConfig,
    mut progress: impl FnMut(&CurvePoint),
) -> Result<TrainOutput> {
    config.validate()?;
    let mut master = ChaCha8Rng::seed_from_u64(config.seed);
    let shape = NetworkShape {
        obs_dim: env.obs_dim(),
        hidden: config.hidden_sizes.clone(),
        head_sizes: env.head_sizes(),
    };
    let mut params = NetworkParams::init(shape, &mut master, config.policy_init_gain);
    let mut optimizer = Adam::new(params.len());
    let mut action_rng = ChaCha8Rng::seed_from_u64(master.next_u64());
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(master.next_u64());
    let mut episode_rng = ChaCha8Rng::seed_from_u64(master.next_u64());

    let mut buffer = RolloutBuffer::default();
    let mut curve = Vec::new();
    let mut env_steps = 0;
    while env_steps < config.total_env_steps {
        buffer.clear();
        let mut returns = 0.0;
        let mut lengths = 0;
        for _ in 0..config.episodes_per_update {
            let seed = episode_rng.next_u64();
            let (ret, len) = collect_episode(
                env,
                &params,
                seed,
                config.reward_scale,
                &mut action_rng,
                &mut buffer,
            )?;
            returns += ret;
            lengths += len;
        }
        env_steps += lengths;
        let stats = ppo_update(&mut params, &mut optimizer, &buffer, config, &mut shuffle_rng)?;
        let n = config.episodes_per_update as f64;
        let point = CurvePoint {
            update: curve.len(),
            env_steps,
            episodes: config.episodes_per_update,
            mean_return: returns / n,
            mean_length: lengths as f64 / n,
            policy_loss: stats.policy_loss,
            value_loss: stats.value_loss,
            entropy: stats.entropy,
            clip_fraction: stats.clip_fraction,
            approx_kl: stats.approx_kl,
        };
        progress(&point);
        curve.push(point);
    }
    Ok(TrainOutput { params, curve })
}
