//! CSV writers for per-step traces, trajectories and learning curves.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::env::{RewardTerms, StepOutcome, WorldState};
use crate::error::{Error, Result};
use crate::ppo::CurvePoint;

fn fmt(v: f64) -> String {
    format!("{v}")
}

/// One row per transition: fleet and node state after the slot, reward
/// breakdown and per-AUV events.
pub fn write_step_trace(path: &Path, outcomes: &[StepOutcome]) -> Result<()> {
    let first = outcomes.first().ok_or_else(|| Error::Usage("empty step trace".into()))?;
    let n = first.next.n_auvs();
    let k = first.next.n_nodes();
    let mut w = csv::Writer::from_path(path)?;

    let mut header = vec!["t".to_string()];
    for i in 0..n {
        for f in ["x", "y", "heading", "speed", "battery_j"] {
            header.push(format!("{f}_{i}"));
        }
    }
    for j in 0..k {
        header.push(format!("aoi_{j}"));
        header.push(format!("energy_j_{j}"));
    }
    header.push("reward".into());
    header.extend(RewardTerms::NAMES.iter().map(|s| format!("r_{s}")));
    for i in 0..n {
        for f in ["wet_node", "harvest_j", "data_node", "required_j", "delivered", "bits", "docked"] {
            header.push(format!("{f}_{i}"));
        }
    }
    header.push("done".into());
    header.push("done_reason".into());
    w.write_record(&header)?;

    for o in outcomes {
        let s = &o.next;
        let mut row = vec![s.t.to_string()];
        for a in &s.auvs {
            row.extend([fmt(a.pos.x), fmt(a.pos.y), fmt(a.heading), fmt(a.speed), fmt(a.battery_j)]);
        }
        for node in &s.nodes {
            row.push(node.aoi.to_string());
            row.push(fmt(node.energy_j));
        }
        row.push(fmt(o.reward));
        row.extend(o.reward_terms.values().iter().map(|&v| fmt(v)));
        for (ev, a) in o.events.iter().zip(&s.auvs) {
            row.extend([
                ev.wet_node.to_string(),
                fmt(ev.harvest_j),
                ev.data_node.to_string(),
                fmt(ev.required_j),
                u8::from(ev.delivered).to_string(),
                fmt(ev.bits),
                u8::from(a.docked).to_string(),
            ]);
        }
        row.push(u8::from(o.done).to_string());
        row.push(o.done_reason.map(|r| r.as_str()).unwrap_or("").to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Plot-ready trajectory: node geometry and collected data as `#` header
/// lines, then one row per slot including the initial state.
pub fn emit_trajectory(path: &Path, trace: &[WorldState]) -> Result<()> {
    let last = trace.last().ok_or_else(|| Error::Usage("empty trajectory".into()))?;
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "# n_auvs={} n_nodes={} length={}", last.n_auvs(), last.n_nodes(), last.t)?;
    for (j, node) in last.nodes.iter().enumerate() {
        writeln!(
            out,
            "# node {j} x={} y={} bits={} deliveries={} services={}",
            node.pos.x, node.pos.y, node.bits_collected, node.deliveries, node.service_count
        )?;
    }
    writeln!(out, "# total_bits={}", last.total_bits())?;

    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    for i in 0..last.n_auvs() {
        for f in ["x", "y", "heading", "speed", "docked"] {
            header.push(format!("{f}_{i}"));
        }
    }
    header.push("cumulative_bits".into());
    w.write_record(&header)?;
    for s in trace {
        let mut row = vec![s.t.to_string()];
        for a in &s.auvs {
            row.extend([
                fmt(a.pos.x),
                fmt(a.pos.y),
                fmt(a.heading),
                fmt(a.speed),
                u8::from(a.docked).to_string(),
            ]);
        }
        row.push(fmt(s.total_bits()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub const CURVE_COLUMNS: [&str; 10] = [
    "update",
    "env_steps",
    "episodes",
    "mean_return",
    "mean_length",
    "policy_loss",
    "value_loss",
    "entropy",
    "clip_fraction",
    "approx_kl",
];

pub fn write_learning_curve(path: &Path, curve: &[CurvePoint]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CURVE_COLUMNS)?;
    for p in curve {
        w.write_record([
            p.update.to_string(),
            p.env_steps.to_string(),
            p.episodes.to_string(),
            fmt(p.mean_return),
            fmt(p.mean_length),
            fmt(p.policy_loss),
            fmt(p.value_loss),
            fmt(p.entropy),
            fmt(p.clip_fraction),
            fmt(p.approx_kl),
        ])?;
    }
    w.flush()?;
    Ok(())
}
