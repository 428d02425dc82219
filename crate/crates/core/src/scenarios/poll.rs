use serde::{Deserialize, Serialize};

use super::config::PollCurveConfig;
use crate::electorate::winning_probability;
use crate::error::Result;
use crate::montecarlo::with_workers;

/// One row of the win-probability sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PollRow {
    pub support: f64,
    pub sigma: f64,
    pub estimate: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PollCurveSummary {
    pub tau: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub rows: Vec<PollRow>,
}

impl PollCurveSummary {
    pub fn row(&self, support: f64, sigma: f64) -> Option<&PollRow> {
        self.rows
            .iter()
            .find(|r| (r.support - support).abs() < 1e-12 && (r.sigma - sigma).abs() < 1e-12)
    }
}

/// Estimates the win probability for every `(sigma, support)` pair. All grid
/// points share the same seed, so neighbouring estimates use common random numbers.
pub fn run_poll_curve(cfg: &PollCurveConfig, workers: usize) -> Result<PollCurveSummary> {
    cfg.validate()?;
    let rows = with_workers(workers, || {
        let mut rows = Vec::with_capacity(cfg.sigmas.len() * cfg.supports.len());
        for &sigma in &cfg.sigmas {
            for &support in &cfg.supports {
                let w = winning_probability(support, sigma, cfg.tau, cfg.n_paths, cfg.seed)?;
                rows.push(PollRow {
                    support,
                    sigma,
                    estimate: w.estimate,
                    stderr: w.stderr,
                });
            }
        }
        Ok(rows)
    })?;
    Ok(PollCurveSummary {
        tau: cfg.tau,
        n_paths: cfg.n_paths,
        seed: cfg.seed,
        rows,
    })
}
