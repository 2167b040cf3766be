//! The episodic multi-AUV world: parameters, state, per-slot models and the
//! transition function.

pub mod dynamics;
pub mod params;
pub mod state;
pub mod step;

pub use dynamics::{
    collision_penalty, jain_index, kinematic_step, margin_shaping, pair_collision_penalty,
    propulsion_energy, update_aoi,
};
pub use params::{EnvParams, MotionParams, RewardWeights, ScenarioParams};
pub use state::{random_node_layout, AuvState, NodeState, WorldState};
pub use step::{
    is_terminal, objective_value, step, AuvEvent, ControlAction, DoneReason, RewardTerms,
    StepOutcome,
};
