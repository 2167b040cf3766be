use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::acoustics::ChannelParams;
use crate::codec::{CodecParams, CodecSpec};
use crate::env::{EnvParams, MotionParams, RewardWeights, ScenarioParams};
use crate::error::{Error, Result};
use crate::ppo::PpoConfig;

/// Overrides `output_dir` when set.
pub const OUTPUT_ROOT_ENV: &str = "AUVSIM_OUTPUT_ROOT";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalParams {
    pub episodes: usize,
    /// Base seed of the per-episode node layouts.
    pub seed: u64,
    /// Sample from the PPO heads instead of taking the most likely action.
    pub stochastic_actor: bool,
    /// Write per-step and trajectory CSVs for every episode.
    pub write_traces: bool,
}

impl Default for EvalParams {
    fn default() -> Self {
        Self { episodes: 20, seed: 1000, stochastic_actor: false, write_traces: true }
    }
}

/// Complete experiment description, one TOML file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub output_dir: PathBuf,
    pub channel: ChannelParams,
    pub motion: MotionParams,
    pub reward: RewardWeights,
    pub scenario: ScenarioParams,
    pub codec: CodecParams,
    pub ppo: PpoConfig,
    pub eval: EvalParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("runs"),
            channel: ChannelParams::default(),
            motion: MotionParams::default(),
            reward: RewardWeights::default(),
            scenario: ScenarioParams::default(),
            codec: CodecParams::default(),
            ppo: PpoConfig::default(),
            eval: EvalParams::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.env_params().validate()?;
        CodecSpec::new(&self.env_params(), &self.codec)?;
        self.ppo.validate()?;
        if self.eval.episodes == 0 {
            return Err(Error::Config("eval.episodes must be at least 1".into()));
        }
        Ok(())
    }

    pub fn env_params(&self) -> EnvParams {
        EnvParams {
            channel: self.channel.clone(),
            motion: self.motion.clone(),
            reward: self.reward.clone(),
            scenario: self.scenario.clone(),
        }
    }

    pub fn codec_spec(&self) -> Result<CodecSpec> {
        CodecSpec::new(&self.env_params(), &self.codec)
    }

    pub fn with_fleet(mut self, n_auvs: usize, n_nodes: usize) -> Self {
        self.scenario.n_auvs = n_auvs;
        self.scenario.n_nodes = n_nodes;
        self
    }

    /// Output root after applying the environment override.
    pub fn output_root(&self) -> PathBuf {
        std::env::var_os(OUTPUT_ROOT_ENV).map(PathBuf::from).unwrap_or_else(|| self.output_dir.clone())
    }
}
