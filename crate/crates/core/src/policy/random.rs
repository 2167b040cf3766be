use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Policy;
use crate::codec::{ActionIndices, CodecSpec};
use crate::env::{EnvParams, WorldState};
use crate::error::Result;

/// Uniform draw over every head, one tuple per AUV.
pub fn random_act<R: Rng>(codec: &CodecSpec, rng: &mut R) -> Vec<ActionIndices> {
    (0..codec.n_auvs)
        .map(|_| ActionIndices {
            theta_idx: rng.gen_range(0..codec.k_theta),
            v_idx: rng.gen_range(0..codec.k_v),
            wet_node: rng.gen_range(0..codec.n_nodes),
            data_node: rng.gen_range(0..codec.n_nodes),
        })
        .collect()
}

/// Uniform-random reference policy, reseeded per episode.
#[derive(Clone, Debug)]
pub struct RandomPolicy {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomPolicy {
    pub fn new(seed: u64) -> Self {
        Self { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Policy for RandomPolicy {
    fn name(&self) -> String {
        "random".into()
    }

    fn reset(&mut self, episode_seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(self.seed ^ episode_seed.rotate_left(17));
    }

    fn act(&mut self, _: &WorldState, _: &EnvParams, codec: &CodecSpec) -> Result<Vec<ActionIndices>> {
        Ok(random_act(codec, &mut self.rng))
    }
}
