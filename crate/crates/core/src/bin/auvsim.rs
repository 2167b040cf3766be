use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use auvsim::harness::{build_policy, run_eval, run_sweep, run_train, ExperimentConfig, PolicySpec};
use auvsim::ppo::Checkpoint;
use auvsim::{Error, Result};

#[derive(Parser)]
#[command(name = "auvsim", version, about = "Multi-AUV acoustic IoT simulator and PPO trainer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a PPO policy and write checkpoint.json and learning_curve.csv.
    Train {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory, relative to the output root.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a policy over seeded episodes.
    Eval {
        #[arg(long)]
        config: Option<PathBuf>,
        /// greedy, random or ppo, optionally with a fleet suffix such as ppo-2auv.
        #[arg(long)]
        policy: PolicySpec,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        episodes: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory, relative to the output root. Defaults to eval_<policy>.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate every policy for every node count on common seeds.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "4,7,10")]
        nodes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "greedy,ppo")]
        policies: Vec<PolicySpec>,
        #[arg(long, default_value = "sweep")]
        out: PathBuf,
    },
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => ExperimentConfig::load(p),
        None => Ok(ExperimentConfig::default()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train { config, out } => {
            let config = load_config(config.as_deref())?;
            let dir = config.output_root().join(out);
            let (_, output) = run_train(&config, Some(&dir), |p| {
                eprintln!(
                    "update {:>4}  steps {:>7}  return {:>9.3}  entropy {:.3}",
                    p.update, p.env_steps, p.mean_return, p.entropy
                );
            })?;
            println!("{}", serde_json::json!({
                "dir": dir,
                "updates": output.curve.len(),
                "final_mean_return": output.curve.last().map(|p| p.mean_return),
            }));
        }
        Command::Eval { config, policy, checkpoint, episodes, seed, out } => {
            let config = policy.apply(&load_config(config.as_deref())?);
            config.validate()?;
            let ckpt = checkpoint.as_deref().map(Checkpoint::load).transpose()?;
            let mut actor = build_policy(policy, &config, ckpt.as_ref())?;
            let dir = config.output_root().join(out.unwrap_or_else(|| format!("eval_{policy}").into()));
            let report = run_eval(
                &config,
                actor.as_mut(),
                episodes.unwrap_or(config.eval.episodes),
                seed.unwrap_or(config.eval.seed),
                Some(&dir),
            )?;
            println!("{}", serde_json::to_string(&report.summary)?);
        }
        Command::Sweep { config, nodes, policies, out } => {
            let config = load_config(config.as_deref())?;
            let dir = config.output_root().join(out);
            let cells = run_sweep(&config, &nodes, &policies, &dir, |m| eprintln!("{m}"))?;
            println!("{}", serde_json::json!({ "dir": dir, "cells": cells.len() }));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.render().to_string();
            eprintln!("{}", error_line(&Error::Usage(msg.trim().to_string())));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            ExitCode::FAILURE
        }
    }
}

fn error_line(e: &Error) -> String {
    serde_json::json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}
