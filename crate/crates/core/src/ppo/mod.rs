//! Centralised actor–critic PPO written from scratch: a tanh MLP with one
//! categorical head per action component, GAE, and the clipped-surrogate
//! update.

pub mod buffer;
pub mod checkpoint;
pub mod config;
pub mod dist;
pub mod gae;
pub mod loss;
pub mod network;
pub mod train;
pub mod update;

pub use buffer::{RolloutBuffer, Transition};
pub use checkpoint::Checkpoint;
pub use config::PpoConfig;
pub use dist::{mode_action, sample_action, SampledAction};
pub use gae::{compute_gae, Boundary, Gae};
pub use loss::{ppo_loss, LossStats, TrainSample};
pub use network::{Forward, NetworkParams, NetworkShape};
pub use train::{train, train_with_progress, CurvePoint, EnvStep, Environment, TrainOutput};
pub use update::{ppo_update, Adam, UpdateStats};
