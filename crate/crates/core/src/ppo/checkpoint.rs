use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::PpoConfig;
use super::network::NetworkParams;
use crate::codec::{schema_hash, CodecSpec, SCHEMA_VERSION};
use crate::error::{Error, Result};

pub const CHECKPOINT_FORMAT: u32 = 1;

/// Trained policy plus everything needed to check it against a scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub schema_version: u32,
    pub schema_hash: String,
    pub codec: CodecSpec,
    pub ppo: PpoConfig,
    pub network: NetworkParams,
}

impl Checkpoint {
    pub fn new(codec: CodecSpec, ppo: PpoConfig, network: NetworkParams) -> Self {
        Self {
            format_version: CHECKPOINT_FORMAT,
            schema_version: SCHEMA_VERSION,
            schema_hash: schema_hash(),
            codec,
            ppo,
            network,
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let ckpt: Checkpoint = serde_json::from_str(&fs::read_to_string(path)?)?;
        if ckpt.format_version != CHECKPOINT_FORMAT {
            return Err(Error::Checkpoint(format!(
                "unsupported checkpoint format {}",
                ckpt.format_version
            )));
        }
        ckpt.network.validate()?;
        Ok(ckpt)
    }

    /// Refuses checkpoints trained against a different observation layout or scenario shape.
    pub fn check_compatible(&self, codec: &CodecSpec) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION || self.schema_hash != schema_hash() {
            return Err(Error::Checkpoint(format!(
                "observation schema mismatch: checkpoint v{} ({}), runtime v{} ({})",
                self.schema_version,
                self.schema_hash,
                SCHEMA_VERSION,
                schema_hash()
            )));
        }
        if &self.codec != codec {
            return Err(Error::Checkpoint(format!(
                "codec mismatch: checkpoint N={} K={} K_theta={} K_v={}, scenario N={} K={} K_theta={} K_v={}",
                self.codec.n_auvs,
                self.codec.n_nodes,
                self.codec.k_theta,
                self.codec.k_v,
                codec.n_auvs,
                codec.n_nodes,
                codec.k_theta,
                codec.k_v
            )));
        }
        if self.network.shape.obs_dim != codec.obs_dim()
            || self.network.shape.head_sizes != codec.head_sizes()
        {
            return Err(Error::Checkpoint("network shape does not match the codec".into()));
        }
        Ok(())
    }
}
