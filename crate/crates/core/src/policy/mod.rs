//! Policies sharing one interface: the greedy time-aware baseline, a uniform
//! random reference, and the trained PPO actor.

mod greedy;
mod learned;
mod random;

pub use greedy::GreedyPolicy;
pub use learned::{ActorMode, PpoPolicy};
pub use random::{random_act, RandomPolicy};

use crate::codec::{ActionIndices, CodecSpec};
use crate::env::{EnvParams, WorldState};
use crate::error::Result;

pub trait Policy {
    fn name(&self) -> String;

    /// Called at the start of every episode.
    fn reset(&mut self, _episode_seed: u64) {}

    /// One discrete action per AUV for the current slot.
    fn act(
        &mut self,
        state: &WorldState,
        params: &EnvParams,
        codec: &CodecSpec,
    ) -> Result<Vec<ActionIndices>>;
}
