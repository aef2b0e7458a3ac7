use mpnc::simnet::{run, Metrics};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, SweepPoint};
use crate::report::ResultRow;
use crate::HarnessError;

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_std(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => f64::NAN,
        1 => 0.0,
        n => {
            let m = mean(xs);
            (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        }
    }
}

/// Folds per-run metrics (in seed order) into one CSV row.
pub fn aggregate(point: &SweepPoint, decoding_window: usize, runs: &[Metrics]) -> ResultRow {
    let loss: Vec<f64> = runs.iter().map(|m| m.loss_probability).collect();
    let delivered: Vec<&Metrics> = runs.iter().filter(|m| m.delivered > 0).collect();
    let delay: Vec<f64> = delivered.iter().map(|m| m.mean_delay * 1e3).collect();
    let p95: Vec<f64> = delivered.iter().map(|m| m.p95_delay * 1e3).collect();
    ResultRow {
        scenario: point.scenario.clone(),
        mode: point.mode.name().into(),
        code_rate: point.rate.as_f64(),
        window: point.window,
        decoding_window,
        runs: runs.len() as u32,
        loss_mean: mean(&loss),
        loss_std: sample_std(&loss),
        delay_mean_ms: mean(&delay),
        delay_std_ms: sample_std(&delay),
        delay_p95_ms: mean(&p95),
    }
}

/// Runs one sweep point for seeds `seed..seed + runs`.
pub fn run_point(cfg: &ExperimentConfig, point: &SweepPoint) -> Result<ResultRow, HarnessError> {
    let sim = cfg.sim_config(point)?;
    let seeds: Vec<u64> = (0..cfg.runs as u64).map(|i| cfg.seed.wrapping_add(i)).collect();
    let metrics = seeds
        .par_iter()
        .map(|&seed| {
            run(&sim, seed).map_err(|source| HarnessError::Sim {
                scenario: point.scenario.clone(),
                mode: point.mode.name(),
                rate: point.rate.to_string(),
                window: point.window,
                seed,
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(aggregate(point, sim.decoding_window, &metrics))
}

/// Runs every sweep point. Rows come back in sweep order no matter which
/// runs finish first.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, HarnessError> {
    let points = cfg.points().map_err(|message| HarnessError::Config {
        origin: "<config>".into(),
        message,
    })?;
    for p in &points {
        let sim = cfg.sim_config(p)?;
        if !sim.is_admissible() {
            log::warn!(
                "{}: R={} cannot carry {:.0} pkt/s over the configured paths",
                p.scenario,
                p.rate,
                cfg.traffic.packet_rate()
            );
        }
    }
    points.par_iter().map(|p| run_point(cfg, p)).collect()
}
