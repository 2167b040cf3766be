use super::gae::{compute_gae, normalize, Boundary};
use super::loss::TrainSample;
use crate::error::{Error, Result};

/// One collected transition.
#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub obs: Vec<f64>,
    pub heads: Vec<usize>,
    pub log_prob: f64,
    pub value: f64,
    pub reward: f64,
    pub boundary: Boundary,
}

/// On-policy storage for whole episodes; emptied after every update.
#[derive(Clone, Debug, Default)]
pub struct RolloutBuffer {
    transitions: Vec<Transition>,
}

impl RolloutBuffer {
    pub fn with_capacity(capacity: usize) -> Self {
        Self { transitions: Vec::with_capacity(capacity) }
    }

    pub fn push(&mut self, t: Transition) {
        self.transitions.push(t);
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn clear(&mut self) {
        self.transitions.clear();
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Runs GAE over the stored episodes and returns samples with
    /// batch-normalised advantages.
    pub fn training_samples(&self, gamma: f64, lambda: f64) -> Result<Vec<TrainSample>> {
        if self.transitions.is_empty() {
            return Err(Error::Usage("rollout buffer is empty".into()));
        }
        let rewards: Vec<f64> = self.transitions.iter().map(|t| t.reward).collect();
        let values: Vec<f64> = self.transitions.iter().map(|t| t.value).collect();
        let boundaries: Vec<Boundary> = self.transitions.iter().map(|t| t.boundary).collect();
        let gae = compute_gae(&rewards, &values, &boundaries, gamma, lambda)?;
        let mut advantages = gae.advantages;
        normalize(&mut advantages);
        Ok(self
            .transitions
            .iter()
            .zip(advantages)
            .zip(gae.returns)
            .map(|((t, advantage), ret)| TrainSample {
                obs: t.obs.clone(),
                heads: t.heads.clone(),
                old_log_prob: t.log_prob,
                advantage,
                ret,
            })
            .collect())
    }
}
