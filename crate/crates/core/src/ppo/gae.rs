//! Generalised advantage estimation.

use crate::error::{Error, Result};

/// How a transition relates to the one after it in the buffer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundary {
    /// The next entry continues the same episode.
    Continue,
    /// The episode ended in a terminal state; the tail value is zero.
    Terminated,
    /// The episode was cut off; bootstrap from the value of the final state.
    Truncated { bootstrap: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gae {
    pub advantages: Vec<f64>,
    /// Value targets, `advantage + value`.
    pub returns: Vec<f64>,
}

/// GAE(γ, λ) over a buffer of whole episodes laid end to end.
pub fn compute_gae(
    rewards: &[f64],
    values: &[f64],
    boundaries: &[Boundary],
    gamma: f64,
    lambda: f64,
) -> Result<Gae> {
    let n = rewards.len();
    if values.len() != n || boundaries.len() != n {
        return Err(Error::Shape(format!(
            "GAE inputs differ in length: {n} rewards, {} values, {} boundaries",
            values.len(),
            boundaries.len()
        )));
    }
    if matches!(boundaries.last(), Some(Boundary::Continue)) {
        return Err(Error::Usage("last transition must close its episode".into()));
    }
    let mut advantages = vec![0.0; n];
    let mut next_adv = 0.0;
    for t in (0..n).rev() {
        let (next_value, carry) = match boundaries[t] {
            Boundary::Continue => (values[t + 1], 1.0),
            Boundary::Terminated => (0.0, 0.0),
            Boundary::Truncated { bootstrap } => (bootstrap, 0.0),
        };
        let delta = rewards[t] + gamma * next_value - values[t];
        next_adv = delta + gamma * lambda * carry * next_adv;
        advantages[t] = next_adv;
    }
    let returns = advantages.iter().zip(values).map(|(a, v)| a + v).collect();
    Ok(Gae { advantages, returns })
}

/// Shifts and scales to zero mean and unit standard deviation.
pub fn normalize(values: &mut [f64]) {
    if values.is_empty() {
        return;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let std = var.sqrt() + 1e-8;
    values.iter_mut().for_each(|v| *v = (*v - mean) / std);
}
