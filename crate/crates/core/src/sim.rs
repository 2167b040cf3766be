//! Episodic environment that couples the world dynamics with the codec.

use crate::codec::{ActionIndices, CodecParams, CodecSpec};
use crate::env::{step, EnvParams, StepOutcome, WorldState};
use crate::error::Result;
use crate::ppo::{EnvStep, Environment};

#[derive(Clone, Debug)]
pub struct AuvEnv {
    params: EnvParams,
    codec: CodecSpec,
    state: WorldState,
}

impl AuvEnv {
    pub fn new(params: EnvParams, codec: &CodecParams) -> Result<Self> {
        params.validate()?;
        let codec = CodecSpec::new(&params, codec)?;
        let state = WorldState::initial(&params, 0);
        Ok(Self { params, codec, state })
    }

    pub fn params(&self) -> &EnvParams {
        &self.params
    }

    pub fn codec(&self) -> &CodecSpec {
        &self.codec
    }

    pub fn state(&self) -> &WorldState {
        &self.state
    }

    /// New episode with node layout drawn from `layout_seed`.
    pub fn reset_state(&mut self, layout_seed: u64) -> &WorldState {
        self.state = WorldState::initial(&self.params, layout_seed);
        &self.state
    }

    /// Advances by one slot with discrete per-AUV actions.
    pub fn step_actions(&mut self, actions: &[ActionIndices]) -> Result<StepOutcome> {
        let controls = self.codec.decode_action(actions, &self.params.motion)?;
        let outcome = step(&self.state, &controls, &self.params)?;
        self.state = outcome.next.clone();
        Ok(outcome)
    }
}

impl Environment for AuvEnv {
    fn obs_dim(&self) -> usize {
        self.codec.obs_dim()
    }

    fn head_sizes(&self) -> Vec<usize> {
        self.codec.head_sizes()
    }

    fn reset(&mut self, seed: u64) -> Result<Vec<f64>> {
        self.reset_state(seed);
        self.codec.encode_state(&self.state)
    }

    fn step(&mut self, heads: &[usize]) -> Result<EnvStep> {
        let actions = self.codec.actions_from_heads(heads)?;
        let outcome = self.step_actions(&actions)?;
        Ok(EnvStep {
            obs: self.codec.encode_state(&outcome.next)?,
            reward: outcome.reward,
            terminated: outcome.next.all_docked(),
            truncated: outcome.done && !outcome.next.all_docked(),
        })
    }
}
