//! Multi-AUV underwater IoT simulator.
//!
//! AUVs recharge static sensor nodes by acoustic energy transfer and collect
//! their data over an acoustic uplink while steering towards a docking zone.
//! The crate contains the acoustic link budget, the episodic world, the
//! observation/action codec, a from-scratch centralised PPO learner, the
//! greedy and random baselines, and the experiment harness behind the
//! `auvsim` binary.

pub mod acoustics;
pub mod codec;
pub mod env;
pub mod error;
pub mod geom;
pub mod harness;
pub mod policy;
pub mod ppo;
pub mod sim;

pub use error::{Error, Result};
