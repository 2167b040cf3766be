//! Seeded evaluation episodes and the `eval`/`train` experiment drivers.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::metrics::{EpisodeMetrics, Summary};
use super::trace::{emit_trajectory, write_learning_curve, write_step_trace};
use crate::env::{StepOutcome, WorldState};
use crate::error::{Error, Result};
use crate::policy::{ActorMode, GreedyPolicy, Policy, PpoPolicy, RandomPolicy};
use crate::ppo::{train_with_progress, Checkpoint, CurvePoint, TrainOutput};
use crate::sim::AuvEnv;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Greedy,
    Random,
    Ppo,
}

/// Policy name with an optional fleet size, e.g. `greedy`, `ppo-2auv`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    pub n_auvs: Option<usize>,
}

impl FromStr for PolicySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, n_auvs) = match s.split_once('-') {
            Some((name, suffix)) => {
                let n = suffix
                    .strip_suffix("auv")
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::Config(format!("bad fleet suffix in policy `{s}`")))?;
                (name.to_string(), Some(n))
            }
            None => (s.clone(), None),
        };
        let kind = match name.as_str() {
            "greedy" => PolicyKind::Greedy,
            "random" => PolicyKind::Random,
            "ppo" => PolicyKind::Ppo,
            _ => return Err(Error::Config(format!("unknown policy `{s}`"))),
        };
        Ok(Self { kind, n_auvs })
    }
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            PolicyKind::Greedy => "greedy",
            PolicyKind::Random => "random",
            PolicyKind::Ppo => "ppo",
        };
        match self.n_auvs {
            Some(n) => write!(f, "{name}-{n}auv"),
            None => f.write_str(name),
        }
    }
}

impl PolicySpec {
    /// Configuration with this spec's fleet size applied.
    pub fn apply(&self, config: &ExperimentConfig) -> ExperimentConfig {
        let mut c = config.clone();
        if let Some(n) = self.n_auvs {
            c.scenario.n_auvs = n;
        }
        c
    }
}

/// Builds a policy for `config`; PPO needs a checkpoint.
pub fn build_policy(
    spec: PolicySpec,
    config: &ExperimentConfig,
    checkpoint: Option<&Checkpoint>,
) -> Result<Box<dyn Policy>> {
    Ok(match spec.kind {
        PolicyKind::Greedy => Box::new(GreedyPolicy::new()),
        PolicyKind::Random => Box::new(RandomPolicy::new(config.eval.seed)),
        PolicyKind::Ppo => {
            let ckpt = checkpoint
                .ok_or_else(|| Error::Usage("the ppo policy needs --checkpoint".into()))?;
            let mode = if config.eval.stochastic_actor {
                ActorMode::Sample { seed: config.eval.seed }
            } else {
                ActorMode::Mode
            };
            Box::new(
                PpoPolicy::from_checkpoint(ckpt, &config.codec_spec()?, mode)?
                    .with_label(spec.to_string()),
            )
        }
    })
}

/// Layout seed of evaluation episode `index` (SplitMix64 of the pair).
pub fn episode_seed(base: u64, index: usize) -> u64 {
    let mut z = base.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct EpisodeRecord {
    /// Initial state followed by every post-step state.
    pub states: Vec<WorldState>,
    pub outcomes: Vec<StepOutcome>,
    pub metrics: EpisodeMetrics,
}

pub fn run_episode(env: &mut AuvEnv, policy: &mut dyn Policy, layout_seed: u64) -> Result<EpisodeRecord> {
    policy.reset(layout_seed);
    let mut states = vec![env.reset_state(layout_seed).clone()];
    let mut outcomes = Vec::new();
    let mut total_reward = 0.0;
    loop {
        let actions = policy.act(env.state(), env.params(), env.codec())?;
        let outcome = env.step_actions(&actions)?;
        total_reward += outcome.reward;
        states.push(outcome.next.clone());
        let done = outcome.done;
        outcomes.push(outcome);
        if done {
            break;
        }
    }
    let metrics = EpisodeMetrics::from_trace(&states, total_reward, env.params().reward.lambda_f)?;
    Ok(EpisodeRecord { states, outcomes, metrics })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvalReport {
    pub summary: Summary,
    pub layout_seeds: Vec<u64>,
    pub episodes: Vec<EpisodeMetrics>,
}

pub const EPISODE_COLUMNS: [&str; 13] = [
    "policy",
    "n_auvs",
    "n_nodes",
    "episode",
    "layout_seed",
    "mean_aoi",
    "final_jain",
    "total_bits",
    "propulsion_energy_j",
    "length",
    "all_docked",
    "objective",
    "total_reward",
];

pub(crate) fn episode_row(
    policy: &str,
    n_auvs: usize,
    n_nodes: usize,
    index: usize,
    seed: u64,
    m: &EpisodeMetrics,
) -> Vec<String> {
    vec![
        policy.to_string(),
        n_auvs.to_string(),
        n_nodes.to_string(),
        index.to_string(),
        seed.to_string(),
        m.mean_aoi.to_string(),
        m.final_jain.to_string(),
        m.total_bits.to_string(),
        m.propulsion_energy_j.to_string(),
        m.length.to_string(),
        u8::from(m.all_docked()).to_string(),
        m.objective.to_string(),
        m.total_reward.to_string(),
    ]
}

/// Runs `n_episodes` seeded episodes. With `out_dir`, writes `episodes.csv`,
/// `summary.json` and (if enabled) per-episode step and trajectory CSVs.
pub fn run_eval(
    config: &ExperimentConfig,
    policy: &mut dyn Policy,
    n_episodes: usize,
    seed: u64,
    out_dir: Option<&Path>,
) -> Result<EvalReport> {
    let mut env = AuvEnv::new(config.env_params(), &config.codec)?;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
    }
    let name = policy.name();
    let mut episodes = Vec::with_capacity(n_episodes);
    let mut layout_seeds = Vec::with_capacity(n_episodes);
    for i in 0..n_episodes {
        let layout_seed = episode_seed(seed, i);
        let record = run_episode(&mut env, policy, layout_seed)?;
        if let (Some(dir), true) = (out_dir, config.eval.write_traces) {
            write_step_trace(&dir.join(format!("steps_ep{i:03}.csv")), &record.outcomes)?;
            emit_trajectory(&dir.join(format!("trajectory_ep{i:03}.csv")), &record.states)?;
        }
        layout_seeds.push(layout_seed);
        episodes.push(record.metrics);
    }
    let n_auvs = config.scenario.n_auvs;
    let n_nodes = config.scenario.n_nodes;
    let summary = Summary::new(&name, n_auvs, n_nodes, &episodes);
    if let Some(dir) = out_dir {
        let mut w = csv::Writer::from_path(dir.join("episodes.csv"))?;
        w.write_record(EPISODE_COLUMNS)?;
        for (i, (m, s)) in episodes.iter().zip(&layout_seeds).enumerate() {
            w.write_record(episode_row(&name, n_auvs, n_nodes, i, *s, m))?;
        }
        w.flush()?;
        fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
    }
    Ok(EvalReport { summary, layout_seeds, episodes })
}

/// Trains PPO on the configured scenario. With `out_dir`, writes
/// `checkpoint.json`, `learning_curve.csv` and the resolved `config.toml`.
pub fn run_train(
    config: &ExperimentConfig,
    out_dir: Option<&Path>,
    progress: impl FnMut(&CurvePoint),
) -> Result<(Checkpoint, TrainOutput)> {
    config.validate()?;
    let mut env = AuvEnv::new(config.env_params(), &config.codec)?;
    let output = train_with_progress(&mut env, &config.ppo, progress)?;
    let ckpt = Checkpoint::new(env.codec().clone(), config.ppo.clone(), output.params.clone());
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        ckpt.save(&dir.join("checkpoint.json"))?;
        write_learning_curve(&dir.join("learning_curve.csv"), &output.curve)?;
        fs::write(dir.join("config.toml"), config.to_toml_string()?)?;
    }
    Ok((ckpt, output))
}

pub fn checkpoint_path(dir: &Path) -> PathBuf {
    dir.join("checkpoint.json")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_spec_parsing() {
        let p: PolicySpec = "ppo-2auv".parse().unwrap();
        assert_eq!(p, PolicySpec { kind: PolicyKind::Ppo, n_auvs: Some(2) });
        assert_eq!(p.to_string(), "ppo-2auv");
        let g: PolicySpec = "Greedy".parse().unwrap();
        assert_eq!(g, PolicySpec { kind: PolicyKind::Greedy, n_auvs: None });
        assert!("ppo-0auv".parse::<PolicySpec>().is_err());
        assert!("ppo-xauv".parse::<PolicySpec>().is_err());
        assert!("dqn".parse::<PolicySpec>().is_err());
    }

    #[test]
    fn episode_seeds_differ_and_repeat() {
        assert_eq!(episode_seed(5, 3), episode_seed(5, 3));
        assert_ne!(episode_seed(5, 3), episode_seed(5, 4));
        assert_ne!(episode_seed(5, 3), episode_seed(6, 3));
    }

    #[test]
    fn greedy_episode_metrics_are_consistent() {
        let cfg = ExperimentConfig::default().with_fleet(1, 3);
        let mut env = AuvEnv::new(cfg.env_params(), &cfg.codec).unwrap();
        let mut g = GreedyPolicy::new();
        let rec = run_episode(&mut env, &mut g, 11).unwrap();
        assert_eq!(rec.states.len(), rec.outcomes.len() + 1);
        assert_eq!(rec.metrics.length as usize, rec.outcomes.len());
        let reward: f64 = rec.outcomes.iter().map(|o| o.reward).sum();
        assert!((reward - rec.metrics.total_reward).abs() < 1e-9);
    }

    #[test]
    fn ppo_without_checkpoint_is_refused() {
        let cfg = ExperimentConfig::default();
        assert!(build_policy("ppo".parse().unwrap(), &cfg, None).is_err());
    }
}
