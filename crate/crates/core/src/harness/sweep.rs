//! Policy × network-size comparison with common layout seeds.

use std::fs;
use std::path::{Path, PathBuf};

use super::config::ExperimentConfig;
use super::eval::{build_policy, checkpoint_path, episode_row, run_eval, run_train, EvalReport, PolicyKind, PolicySpec, EPISODE_COLUMNS};
use crate::error::{Error, Result};
use crate::ppo::Checkpoint;

#[derive(Clone, Debug)]
pub struct SweepCell {
    pub policy: PolicySpec,
    pub n_nodes: usize,
    pub dir: PathBuf,
    pub report: EvalReport,
}

/// Directory of one sweep cell below `root`.
pub fn cell_dir(root: &Path, policy: PolicySpec, n_nodes: usize) -> PathBuf {
    root.join(format!("{policy}_k{n_nodes}"))
}

/// Evaluates every (policy, K) pair on the same layout seeds and writes the
/// tidy table `sweep.csv` (columns `EPISODE_COLUMNS`) under `root`.
///
/// PPO cells reuse `checkpoint.json` in their cell directory when present and
/// otherwise train one there first.
pub fn run_sweep(
    template: &ExperimentConfig,
    nodes: &[usize],
    policies: &[PolicySpec],
    root: &Path,
    mut log: impl FnMut(&str),
) -> Result<Vec<SweepCell>> {
    if nodes.is_empty() || policies.is_empty() {
        return Err(Error::Usage("sweep needs at least one node count and one policy".into()));
    }
    template.validate()?;
    fs::create_dir_all(root)?;
    let episodes = template.eval.episodes;
    let seed = template.eval.seed;

    let mut cells = Vec::with_capacity(nodes.len() * policies.len());
    for &k in nodes {
        for &spec in policies {
            let mut config = spec.apply(template);
            config.scenario.n_nodes = k;
            config.validate()?;
            let dir = cell_dir(root, spec, k);
            fs::create_dir_all(&dir)?;

            let ckpt = if spec.kind == PolicyKind::Ppo {
                let path = checkpoint_path(&dir);
                Some(if path.exists() {
                    log(&format!("{spec} K={k}: reusing {}", path.display()));
                    Checkpoint::load(&path)?
                } else {
                    log(&format!("{spec} K={k}: training"));
                    run_train(&config, Some(&dir), |_| {})?.0
                })
            } else {
                None
            };
            let mut policy = build_policy(spec, &config, ckpt.as_ref())?;
            let report = run_eval(&config, policy.as_mut(), episodes, seed, Some(&dir))?;
            log(&format!(
                "{spec} K={k}: mean AoI {:.4}, Jain {:.4}",
                report.summary.mean_aoi.mean, report.summary.final_jain.mean
            ));
            cells.push(SweepCell { policy: spec, n_nodes: k, dir, report });
        }
    }

    let mut w = csv::Writer::from_path(root.join("sweep.csv"))?;
    w.write_record(EPISODE_COLUMNS)?;
    for cell in &cells {
        let s = &cell.report.summary;
        for (i, (m, layout)) in cell.report.episodes.iter().zip(&cell.report.layout_seeds).enumerate() {
            w.write_record(episode_row(&cell.policy.to_string(), s.n_auvs, s.n_nodes, i, *layout, m))?;
        }
    }
    w.flush()?;
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_directories_are_distinct() {
        let root = Path::new("out");
        let a = cell_dir(root, "ppo-2auv".parse().unwrap(), 4);
        let b = cell_dir(root, "ppo".parse().unwrap(), 4);
        assert_ne!(a, b);
        assert_eq!(a, Path::new("out/ppo-2auv_k4"));
    }
}
