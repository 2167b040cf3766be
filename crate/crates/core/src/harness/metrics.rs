use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::env::{jain_index, objective_value, WorldState};
use crate::error::{Error, Result};

/// Per-episode evaluation metrics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeMetrics {
    /// Mean AoI over nodes, averaged over the post-step slots of the episode.
    pub mean_aoi: f64,
    /// Jain index of the service counts at the end of the episode.
    pub final_jain: f64,
    pub total_bits: f64,
    /// Fleet propulsion and hotel energy, J.
    pub propulsion_energy_j: f64,
    pub docked: Vec<bool>,
    pub length: u32,
    /// Time-averaged mean AoI plus weighted fairness shortfall.
    pub objective: f64,
    /// Undiscounted sum of rewards.
    pub total_reward: f64,
}

impl EpisodeMetrics {
    /// Metrics of a trace that starts with the initial state.
    pub fn from_trace(trace: &[WorldState], total_reward: f64, lambda_f: f64) -> Result<Self> {
        let (last, post) = match trace.split_first() {
            Some((_, post)) if !post.is_empty() => (post.last().unwrap(), post),
            _ => return Err(Error::Usage("episode trace has no transitions".into())),
        };
        Ok(Self {
            mean_aoi: post.iter().map(WorldState::mean_aoi).sum::<f64>() / post.len() as f64,
            final_jain: jain_index(&last.service_counts()),
            total_bits: last.total_bits(),
            propulsion_energy_j: last.fleet_energy_used(),
            docked: last.auvs.iter().map(|a| a.docked).collect(),
            length: last.t,
            objective: objective_value(post, lambda_f)?,
            total_reward,
        })
    }

    pub fn all_docked(&self) -> bool {
        self.docked.iter().all(|&d| d)
    }
}

/// Mean and sample standard deviation of one metric.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Self {
        Self { mean: mean(values), std: sample_std(values) }
    }

    pub fn std_error(&self, n: usize) -> f64 {
        self.std / (n as f64).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub policy: String,
    pub n_auvs: usize,
    pub n_nodes: usize,
    pub episodes: usize,
    pub mean_aoi: MeanStd,
    pub final_jain: MeanStd,
    pub total_bits: MeanStd,
    pub propulsion_energy_j: MeanStd,
    pub length: MeanStd,
    pub objective: MeanStd,
    pub total_reward: MeanStd,
    /// Fraction of episodes in which every AUV docked.
    pub dock_rate: f64,
}

impl Summary {
    pub fn new(policy: &str, n_auvs: usize, n_nodes: usize, episodes: &[EpisodeMetrics]) -> Self {
        let col = |f: fn(&EpisodeMetrics) -> f64| MeanStd::of(&episodes.iter().map(f).collect::<Vec<_>>());
        Self {
            policy: policy.to_string(),
            n_auvs,
            n_nodes,
            episodes: episodes.len(),
            mean_aoi: col(|e| e.mean_aoi),
            final_jain: col(|e| e.final_jain),
            total_bits: col(|e| e.total_bits),
            propulsion_energy_j: col(|e| e.propulsion_energy_j),
            length: col(|e| f64::from(e.length)),
            objective: col(|e| e.objective),
            total_reward: col(|e| e.total_reward),
            dock_rate: episodes.iter().filter(|e| e.all_docked()).count() as f64
                / episodes.len().max(1) as f64,
        }
    }
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n − 1 denominator); 0 for fewer than two values.
pub fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

/// Paired two-sided t-test on `a − b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairedTest {
    pub mean_diff: f64,
    pub t: f64,
    pub p_value: f64,
}

pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<PairedTest> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::Usage("paired test needs two equal-length samples of size ≥ 2".into()));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let m = mean(&d);
    let se = sample_std(&d) / (d.len() as f64).sqrt();
    if se == 0.0 {
        let p_value = if m == 0.0 { 1.0 } else { 0.0 };
        return Ok(PairedTest { mean_diff: m, t: if m == 0.0 { 0.0 } else { m.signum() * f64::INFINITY }, p_value });
    }
    let t = m / se;
    let dist = StudentsT::new(0.0, 1.0, (d.len() - 1) as f64)
        .map_err(|e| Error::Usage(format!("t distribution: {e}")))?;
    Ok(PairedTest { mean_diff: m, t, p_value: 2.0 * (1.0 - dist.cdf(t.abs())) })
}
