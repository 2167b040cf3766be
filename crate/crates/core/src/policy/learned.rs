use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Policy;
use crate::codec::{ActionIndices, CodecSpec};
use crate::env::{EnvParams, WorldState};
use crate::error::Result;
use crate::ppo::{mode_action, sample_action, Checkpoint, NetworkParams};

/// How the actor turns logits into actions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActorMode {
    /// Most likely index of every head.
    Mode,
    /// Seeded sampling from the categorical heads.
    Sample { seed: u64 },
}

/// PPO actor loaded from a checkpoint.
#[derive(Clone, Debug)]
pub struct PpoPolicy {
    network: NetworkParams,
    mode: ActorMode,
    rng: ChaCha8Rng,
    label: String,
}

impl PpoPolicy {
    pub fn new(network: NetworkParams, mode: ActorMode) -> Self {
        let seed = match mode {
            ActorMode::Sample { seed } => seed,
            ActorMode::Mode => 0,
        };
        Self { network, mode, rng: ChaCha8Rng::seed_from_u64(seed), label: "ppo".into() }
    }

    /// Actor from `ckpt`, after checking it matches `codec`.
    pub fn from_checkpoint(ckpt: &Checkpoint, codec: &CodecSpec, mode: ActorMode) -> Result<Self> {
        ckpt.check_compatible(codec)?;
        Ok(Self::new(ckpt.network.clone(), mode))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

impl Policy for PpoPolicy {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn reset(&mut self, episode_seed: u64) {
        if let ActorMode::Sample { seed } = self.mode {
            self.rng = ChaCha8Rng::seed_from_u64(seed ^ episode_seed.rotate_left(29));
        }
    }

    fn act(
        &mut self,
        state: &WorldState,
        _: &EnvParams,
        codec: &CodecSpec,
    ) -> Result<Vec<ActionIndices>> {
        let obs = codec.encode_state(state)?;
        let logits = self.network.forward(&obs)?.logits;
        let head_sizes = codec.head_sizes();
        let heads = match self.mode {
            ActorMode::Mode => mode_action(&logits, &head_sizes),
            ActorMode::Sample { .. } => sample_action(&logits, &head_sizes, &mut self.rng).heads,
        };
        codec.actions_from_heads(&heads)
    }
}
