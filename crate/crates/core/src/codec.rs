//! Observation and action codec between [`WorldState`] and the flat vectors
//! seen by policies.
//!
//! Observation layout (version 1, see `schema/observation_v1.json`):
//!
//! | block              | size  | feature                                    |
//! |--------------------|-------|--------------------------------------------|
//! | per AUV `i`        | 5·N   | x, y mapped to [−1, 1]; sin θ; cos θ; v/v_max |
//! | AoI                | K     | A_k / A_max                                 |
//! | node energy        | K     | u/(1+u), u = log10(1 + e_k / 1 J)           |
//! | AUV–node distances | N·K   | ‖ℓ_k − ℓ_i‖ / arena diagonal, AUV-major     |
//!
//! Actions are factored into four categorical heads per AUV, in the order
//! heading, speed, energy-transfer node, data node.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::env::{ControlAction, EnvParams, MotionParams, WorldState};
use crate::error::{Error, Result};
use crate::geom::Rect;

pub const SCHEMA_VERSION: u32 = 1;
pub const SCHEMA_JSON: &str = include_str!("../schema/observation_v1.json");

/// Hex SHA-256 of the shipped schema file; stored in checkpoints.
pub fn schema_hash() -> String {
    let digest = Sha256::digest(SCHEMA_JSON.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Discretisation levels of the motion heads.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodecParams {
    pub k_theta: usize,
    pub k_v: usize,
}

impl Default for CodecParams {
    fn default() -> Self {
        Self { k_theta: 5, k_v: 5 }
    }
}

/// Scales applied when building observations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub arena: Rect,
    pub v_max: f64,
    pub a_max: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodecSpec {
    pub n_auvs: usize,
    pub n_nodes: usize,
    pub k_theta: usize,
    pub k_v: usize,
    pub normalization: Normalization,
}

/// Discrete action of one AUV. Node indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActionIndices {
    pub theta_idx: usize,
    pub v_idx: usize,
    pub wet_node: usize,
    pub data_node: usize,
}

impl ActionIndices {
    pub fn as_heads(&self) -> [usize; 4] {
        [self.theta_idx, self.v_idx, self.wet_node, self.data_node]
    }

    pub fn from_heads(h: &[usize]) -> Self {
        Self { theta_idx: h[0], v_idx: h[1], wet_node: h[2], data_node: h[3] }
    }
}

pub const HEADS_PER_AUV: usize = 4;

impl CodecSpec {
    pub fn new(params: &EnvParams, codec: &CodecParams) -> Result<Self> {
        if codec.k_theta < 2 || codec.k_v < 2 {
            return Err(Error::Config("k_theta and k_v need at least two levels".into()));
        }
        Ok(Self {
            n_auvs: params.scenario.n_auvs,
            n_nodes: params.scenario.n_nodes,
            k_theta: codec.k_theta,
            k_v: codec.k_v,
            normalization: Normalization {
                arena: params.motion.arena,
                v_max: params.motion.v_max,
                a_max: params.a_max(),
            },
        })
    }

    pub fn obs_dim(&self) -> usize {
        5 * self.n_auvs + 2 * self.n_nodes + self.n_auvs * self.n_nodes
    }

    /// Sizes of all categorical heads, `[K_θ, K_v, K, K]` repeated per AUV.
    pub fn head_sizes(&self) -> Vec<usize> {
        (0..self.n_auvs)
            .flat_map(|_| [self.k_theta, self.k_v, self.n_nodes, self.n_nodes])
            .collect()
    }

    /// Per-AUV action count `K_θ·K_v·K²`.
    pub fn per_auv_cardinality(&self) -> u128 {
        (self.k_theta * self.k_v * self.n_nodes * self.n_nodes) as u128
    }

    /// Size of the joint action space, `(K_θ·K_v·K²)^N`; `None` on overflow.
    pub fn joint_cardinality(&self) -> Option<u128> {
        self.per_auv_cardinality().checked_pow(self.n_auvs as u32)
    }

    fn check_state(&self, state: &WorldState) -> Result<()> {
        if state.n_auvs() != self.n_auvs || state.n_nodes() != self.n_nodes {
            return Err(Error::Codec(format!(
                "state has N={}, K={}; codec expects N={}, K={}",
                state.n_auvs(),
                state.n_nodes(),
                self.n_auvs,
                self.n_nodes
            )));
        }
        Ok(())
    }

    pub fn encode_state(&self, state: &WorldState) -> Result<Vec<f64>> {
        self.check_state(state)?;
        let norm = &self.normalization;
        let arena = norm.arena;
        let mut obs = Vec::with_capacity(self.obs_dim());
        for auv in &state.auvs {
            obs.push(2.0 * (auv.pos.x - arena.min.x) / arena.width() - 1.0);
            obs.push(2.0 * (auv.pos.y - arena.min.y) / arena.height() - 1.0);
            obs.push(auv.heading.sin());
            obs.push(auv.heading.cos());
            obs.push(auv.speed / norm.v_max);
        }
        obs.extend(state.nodes.iter().map(|n| f64::from(n.aoi) / f64::from(norm.a_max)));
        obs.extend(state.nodes.iter().map(|n| {
            let u = (1.0 + n.energy_j.max(0.0)).log10();
            u / (1.0 + u)
        }));
        let diag = arena.diagonal();
        for auv in &state.auvs {
            obs.extend(state.nodes.iter().map(|n| auv.pos.distance(n.pos) / diag));
        }
        debug_assert_eq!(obs.len(), self.obs_dim());
        Ok(obs)
    }

    fn level(idx: usize, levels: usize, max: f64) -> f64 {
        (2.0 * idx as f64 / (levels - 1) as f64 - 1.0) * max
    }

    pub fn heading_increment(&self, idx: usize, motion: &MotionParams) -> f64 {
        Self::level(idx, self.k_theta, motion.dtheta_max)
    }

    pub fn speed_increment(&self, idx: usize, motion: &MotionParams) -> f64 {
        Self::level(idx, self.k_v, motion.dv_max)
    }

    fn nearest_level(value: f64, levels: usize, max: f64) -> usize {
        let x = (value.clamp(-max, max) / max + 1.0) * (levels - 1) as f64 / 2.0;
        (x.round() as usize).min(levels - 1)
    }

    /// Grid index whose heading increment is closest to `dtheta`.
    pub fn heading_index_for(&self, dtheta: f64, motion: &MotionParams) -> usize {
        Self::nearest_level(dtheta, self.k_theta, motion.dtheta_max)
    }

    /// Grid index whose speed increment is closest to `dv`.
    pub fn speed_index_for(&self, dv: f64, motion: &MotionParams) -> usize {
        Self::nearest_level(dv, self.k_v, motion.dv_max)
    }

    pub fn check_action(&self, a: &ActionIndices) -> Result<()> {
        if a.theta_idx >= self.k_theta
            || a.v_idx >= self.k_v
            || a.wet_node >= self.n_nodes
            || a.data_node >= self.n_nodes
        {
            return Err(Error::Codec(format!("action index out of range: {a:?}")));
        }
        Ok(())
    }

    /// Maps one discrete action per AUV to physical increments and node picks.
    pub fn decode_action(
        &self,
        indices: &[ActionIndices],
        motion: &MotionParams,
    ) -> Result<Vec<ControlAction>> {
        if indices.len() != self.n_auvs {
            return Err(Error::Codec(format!(
                "expected {} per-AUV actions, got {}",
                self.n_auvs,
                indices.len()
            )));
        }
        indices
            .iter()
            .map(|a| {
                self.check_action(a)?;
                Ok(ControlAction {
                    dtheta: self.heading_increment(a.theta_idx, motion),
                    dv: self.speed_increment(a.v_idx, motion),
                    wet_node: a.wet_node,
                    data_node: a.data_node,
                })
            })
            .collect()
    }

    /// Splits a flat head-index vector (length 4·N) into per-AUV actions.
    pub fn actions_from_heads(&self, heads: &[usize]) -> Result<Vec<ActionIndices>> {
        if heads.len() != HEADS_PER_AUV * self.n_auvs {
            return Err(Error::Codec(format!(
                "expected {} head indices, got {}",
                HEADS_PER_AUV * self.n_auvs,
                heads.len()
            )));
        }
        heads.chunks(HEADS_PER_AUV).map(ActionIndices::from_heads).map(Ok).collect()
    }

    pub fn heads_from_actions(actions: &[ActionIndices]) -> Vec<usize> {
        actions.iter().flat_map(|a| a.as_heads()).collect()
    }
}
