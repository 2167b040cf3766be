use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::params::EnvParams;
use crate::geom::{wrap_angle, Vec2};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuvState {
    pub pos: Vec2,
    /// Heading, rad in (−π, π].
    pub heading: f64,
    /// Speed, m/s in [0, v_max].
    pub speed: f64,
    /// Remaining battery, J (floored at zero).
    pub battery_j: f64,
    /// Cumulative propulsion and hotel energy drawn so far, J.
    pub energy_used_j: f64,
    pub docked: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeState {
    pub pos: Vec2,
    /// Stored energy, J.
    pub energy_j: f64,
    /// Age of information in slots, in [1, A_max].
    pub aoi: u32,
    /// Deliveries accumulated towards the next AoI reset, in [0, K_reset).
    pub service_counter: u32,
    /// Number of AoI resets so far; the fairness index is computed from these.
    pub service_count: u32,
    /// Successful uplink deliveries so far.
    pub deliveries: u32,
    pub bits_collected: f64,
}

impl NodeState {
    pub fn new(pos: Vec2, energy_j: f64) -> Self {
        Self {
            pos,
            energy_j,
            aoi: 1,
            service_counter: 0,
            service_count: 0,
            deliveries: 0,
            bits_collected: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldState {
    pub auvs: Vec<AuvState>,
    pub nodes: Vec<NodeState>,
    /// Slots elapsed since the start of the episode.
    pub t: u32,
}

impl WorldState {
    /// Initial state: AUVs in launch formation, nodes uniform over the arena.
    pub fn initial(params: &EnvParams, layout_seed: u64) -> Self {
        let node_positions = random_node_layout(params, layout_seed);
        Self::with_nodes(params, &node_positions)
    }

    pub fn with_nodes(params: &EnvParams, node_positions: &[Vec2]) -> Self {
        let m = &params.motion;
        let s = &params.scenario;
        let auvs = s
            .launch_positions(m)
            .into_iter()
            .map(|pos| AuvState {
                pos,
                heading: wrap_angle(s.initial_heading.unwrap_or_else(|| (m.dock_center - pos).angle())),
                speed: s.initial_speed,
                battery_j: s.battery_j,
                energy_used_j: 0.0,
                docked: false,
            })
            .collect();
        let nodes = node_positions.iter().map(|&p| NodeState::new(p, s.node_energy_j)).collect();
        Self { auvs, nodes, t: 0 }
    }

    pub fn n_auvs(&self) -> usize {
        self.auvs.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn all_docked(&self) -> bool {
        self.auvs.iter().all(|a| a.docked)
    }

    pub fn mean_aoi(&self) -> f64 {
        self.nodes.iter().map(|n| f64::from(n.aoi)).sum::<f64>() / self.nodes.len() as f64
    }

    pub fn service_counts(&self) -> Vec<u32> {
        self.nodes.iter().map(|n| n.service_count).collect()
    }

    pub fn total_bits(&self) -> f64 {
        self.nodes.iter().map(|n| n.bits_collected).sum()
    }

    pub fn fleet_energy_used(&self) -> f64 {
        self.auvs.iter().map(|a| a.energy_used_j).sum()
    }
}

/// Node positions drawn uniformly over the arena from `seed`.
pub fn random_node_layout(params: &EnvParams, seed: u64) -> Vec<Vec2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arena = params.motion.arena;
    (0..params.scenario.n_nodes)
        .map(|_| {
            Vec2::new(
                rng.gen_range(arena.min.x..=arena.max.x),
                rng.gen_range(arena.min.y..=arena.max.y),
            )
        })
        .collect()
}
