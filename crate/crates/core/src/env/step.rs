//! One-slot transition of the multi-AUV world.
//!
//! Within a slot the order is fixed: motion, energy transfer, uplink, AoI
//! update, docking, reward, termination.

use serde::{Deserialize, Serialize};

use super::dynamics::{
    collision_penalty, jain_index, kinematic_step, margin_shaping, propulsion_energy, update_aoi,
};
use super::params::EnvParams;
use super::state::WorldState;
use crate::acoustics::{uplink_energy_at, wet_energy_at};
use crate::error::{Error, Result};

/// Physical control of one AUV for one slot.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlAction {
    /// Heading increment, rad.
    pub dtheta: f64,
    /// Speed increment, m/s.
    pub dv: f64,
    /// Node receiving acoustic energy (0-based).
    pub wet_node: usize,
    /// Node asked to upload data (0-based).
    pub data_node: usize,
}

/// Signed reward contributions; `reward == terms.sum()`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RewardTerms {
    pub goal: f64,
    pub aoi: f64,
    pub fairness: f64,
    pub boundary: f64,
    pub stall: f64,
    pub margin: f64,
    pub collision: f64,
    pub dock: f64,
}

impl RewardTerms {
    pub const NAMES: [&'static str; 8] =
        ["goal", "aoi", "fairness", "boundary", "stall", "margin", "collision", "dock"];

    pub fn values(&self) -> [f64; 8] {
        [
            self.goal,
            self.aoi,
            self.fairness,
            self.boundary,
            self.stall,
            self.margin,
            self.collision,
            self.dock,
        ]
    }

    pub fn sum(&self) -> f64 {
        self.values().iter().sum()
    }
}

/// What happened to one AUV during the slot.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AuvEvent {
    /// Whether the AUV was undocked at the start of the slot.
    pub active: bool,
    pub traveled_m: f64,
    pub propulsion_j: f64,
    pub boundary_hit: bool,
    pub stalled: bool,
    pub wet_node: usize,
    pub harvest_j: f64,
    pub data_node: usize,
    pub required_j: f64,
    pub delivered: bool,
    pub bits: f64,
    pub docked_now: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoneReason {
    AllDocked,
    Horizon,
}

impl DoneReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            DoneReason::AllDocked => "all_docked",
            DoneReason::Horizon => "horizon",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub next: WorldState,
    pub reward: f64,
    pub reward_terms: RewardTerms,
    pub events: Vec<AuvEvent>,
    pub done: bool,
    pub done_reason: Option<DoneReason>,
}

/// Whether `state` admits no further transitions.
pub fn is_terminal(state: &WorldState, params: &EnvParams) -> bool {
    state.all_docked() || state.t >= params.motion.t_max
}

/// Applies one slot of joint control to `state`.
pub fn step(state: &WorldState, actions: &[ControlAction], params: &EnvParams) -> Result<StepOutcome> {
    if is_terminal(state, params) {
        return Err(Error::Usage(format!("episode already terminated at slot {}", state.t)));
    }
    if actions.len() != state.n_auvs() {
        return Err(Error::Usage(format!(
            "expected {} actions, got {}",
            state.n_auvs(),
            actions.len()
        )));
    }
    let k = state.n_nodes();
    if let Some(a) = actions.iter().find(|a| a.wet_node >= k || a.data_node >= k) {
        return Err(Error::Usage(format!("node selection out of range for K={k}: {a:?}")));
    }

    let motion = &params.motion;
    let weights = &params.reward;
    let tau = motion.dt;
    let mut next = state.clone();
    let mut events = vec![AuvEvent::default(); state.n_auvs()];
    let mut terms = RewardTerms::default();

    // motion
    for (i, (auv, action)) in state.auvs.iter().zip(actions).enumerate() {
        let ev = &mut events[i];
        ev.wet_node = action.wet_node;
        ev.data_node = action.data_node;
        if auv.docked {
            continue;
        }
        ev.active = true;
        let (mut moved, _) = kinematic_step(auv, action.dtheta, action.dv, motion)?;
        if !motion.arena.contains(moved.pos) {
            moved.pos = motion.arena.clamp(moved.pos);
            ev.boundary_hit = true;
        }
        let traveled = moved.pos.distance(auv.pos);
        let energy = propulsion_energy(auv.speed, traveled, motion);
        moved.battery_j = (moved.battery_j - energy).max(0.0);
        moved.energy_used_j += energy;
        ev.traveled_m = traveled;
        ev.propulsion_j = energy;
        ev.stalled = traveled < weights.stall_eps;

        let before = auv.pos.distance(motion.dock_center);
        let after = moved.pos.distance(motion.dock_center);
        terms.goal += weights.alpha_g * (before - after);
        if ev.boundary_hit {
            terms.boundary -= weights.rho_bd;
        }
        if ev.stalled {
            terms.stall -= weights.rho_st;
        }
        next.auvs[i] = moved;
    }

    // acoustic energy transfer, concurrent with the uplink band
    for (i, ev) in events.iter_mut().enumerate() {
        if !ev.active {
            continue;
        }
        let node = &mut next.nodes[ev.wet_node];
        let d = next.auvs[i].pos.distance(node.pos).max(1.0);
        let harvested = wet_energy_at(d, tau, &params.channel)?;
        node.energy_j += harvested;
        ev.harvest_j = harvested;
    }

    // uplink, subject to node energy causality
    let mut delivered = vec![false; k];
    let mut margin_energy = Vec::with_capacity(state.n_auvs());
    let mut margin_required = Vec::with_capacity(state.n_auvs());
    for (i, ev) in events.iter_mut().enumerate() {
        if !ev.active {
            continue;
        }
        let node = &mut next.nodes[ev.data_node];
        let d = next.auvs[i].pos.distance(node.pos).max(1.0);
        let required = uplink_energy_at(d, tau, &params.channel)?;
        ev.required_j = required;
        margin_energy.push(node.energy_j);
        margin_required.push(required);
        if node.energy_j >= required {
            node.energy_j -= required;
            let bits = params.channel.rate_bps * tau;
            node.bits_collected += bits;
            node.deliveries += 1;
            ev.delivered = true;
            ev.bits = bits;
            delivered[ev.data_node] = true;
        }
    }
    terms.margin = margin_shaping(
        &margin_energy,
        &margin_required,
        weights.alpha_m,
        weights.margin_eps,
        state.n_auvs(),
    );

    let a_max = params.a_max();
    for (node, &hit) in next.nodes.iter_mut().zip(&delivered) {
        *node = update_aoi(node, hit, weights.k_reset, a_max);
    }

    // docking
    let mut newly_docked = 0usize;
    for (auv, ev) in next.auvs.iter_mut().zip(events.iter_mut()) {
        if ev.active && auv.pos.distance(motion.dock_center) <= motion.dock_radius {
            auv.docked = true;
            auv.speed = 0.0;
            ev.docked_now = true;
            newly_docked += 1;
        }
    }
    next.t = state.t + 1;

    terms.aoi = -weights.alpha_a * next.mean_aoi();
    terms.fairness = -weights.alpha_f * (1.0 - jain_index(&next.service_counts()));
    let positions: Vec<_> = next.auvs.iter().map(|a| a.pos).collect();
    let docked: Vec<_> = next.auvs.iter().map(|a| a.docked).collect();
    terms.collision = collision_penalty(&positions, &docked, motion, weights.alpha_c);
    terms.dock = weights.r_dock_first * newly_docked as f64;
    if next.all_docked() && newly_docked > 0 {
        terms.dock += weights.r_dock_all;
    }

    let done_reason = if next.all_docked() {
        Some(DoneReason::AllDocked)
    } else if next.t >= motion.t_max {
        Some(DoneReason::Horizon)
    } else {
        None
    };

    Ok(StepOutcome {
        next,
        reward: terms.sum(),
        reward_terms: terms,
        events,
        done: done_reason.is_some(),
        done_reason,
    })
}

/// Time-averaged evaluation objective over post-step states:
/// mean AoI plus the weighted fairness shortfall.
pub fn objective_value(trace: &[WorldState], lambda_f: f64) -> Result<f64> {
    if trace.is_empty() {
        return Err(Error::Usage("objective of an empty trace".into()));
    }
    let total: f64 = trace
        .iter()
        .map(|s| s.mean_aoi() + lambda_f * (1.0 - jain_index(&s.service_counts())))
        .sum();
    Ok(total / trace.len() as f64)
}
