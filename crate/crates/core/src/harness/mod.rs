//! Experiment configuration, evaluation, sweeps and CSV output.

mod config;
mod eval;
mod metrics;
mod sweep;
mod trace;

pub use config::{EvalParams, ExperimentConfig, OUTPUT_ROOT_ENV};
pub use eval::{
    build_policy, checkpoint_path, episode_seed, run_episode, run_eval, run_train, EpisodeRecord,
    EvalReport, PolicyKind, PolicySpec, EPISODE_COLUMNS,
};
pub use metrics::{mean, paired_t_test, sample_std, EpisodeMetrics, MeanStd, PairedTest, Summary};
pub use sweep::{cell_dir, run_sweep, SweepCell};
pub use trace::{emit_trajectory, write_learning_curve, write_step_trace, CURVE_COLUMNS};
