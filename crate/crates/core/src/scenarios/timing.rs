use serde::{Deserialize, Serialize};

use super::config::{ScenarioConfig, TimingSearchConfig};
use crate::error::Result;
use crate::info_flow::{generate_path, BeliefTracker, Disinfo};
use crate::montecarlo::run_paths;
use crate::rng::derive_stream;
use crate::stats::mean_and_stderr;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnsetObjective {
    pub onset: f64,
    /// Fraction of paths ending with `pi(truth) < 1/2`.
    pub wrong_fraction: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingSearchResult {
    pub amplitude: f64,
    pub decay: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub best_onset: f64,
    pub best_wrong_fraction: f64,
    /// Wrong-decision rate without any disinformation.
    pub baseline_wrong_fraction: f64,
    pub curve: Vec<OnsetObjective>,
}

fn wrong_flags(cfg: &ScenarioConfig, workers: usize) -> Result<Vec<f64>> {
    let steps = cfg.steps()?;
    let model = cfg.model();
    let assumption = cfg.assumption();
    run_paths(cfg.n_paths, workers, |i| {
        let mut stream = derive_stream(cfg.seed, i as u64);
        let path = generate_path(&model, &cfg.alternatives, cfg.horizon, cfg.dt, &mut stream)?;
        let mut tracker = BeliefTracker::new(cfg.filter, &cfg.prior, &cfg.alternatives)?;
        for k in 0..steps {
            let sigma = assumption.sigma.value_at(k as f64 * cfg.dt);
            tracker.step(sigma, cfg.dt, path.values[k + 1] - path.values[k]);
        }
        Ok(if tracker.probs()[cfg.truth] < 0.5 { 1.0 } else { 0.0 })
    })
}

/// Evaluates the wrong-decision rate for a pulse released at each grid onset.
/// Path `i` reuses stream `i` at every onset, so the curve is driven by common
/// random numbers. The best onset is the earliest one attaining the maximum.
pub fn disinfo_timing_search(cfg: &TimingSearchConfig, workers: usize) -> Result<TimingSearchResult> {
    cfg.validate()?;
    let baseline = mean_and_stderr(&wrong_flags(&cfg.base, workers)?).0;
    let mut curve = Vec::with_capacity(cfg.onsets.len());
    for &onset in &cfg.onsets {
        let mut run = cfg.base.clone();
        run.disinfo = Disinfo::Pulse {
            onset,
            amplitude: cfg.amplitude,
            decay: cfg.decay,
        };
        let (wrong_fraction, stderr) = mean_and_stderr(&wrong_flags(&run, workers)?);
        curve.push(OnsetObjective {
            onset,
            wrong_fraction,
            stderr,
        });
    }
    let best = curve
        .iter()
        .fold(None::<&OnsetObjective>, |best, c| match best {
            Some(b) if b.wrong_fraction >= c.wrong_fraction => Some(b),
            _ => Some(c),
        })
        .copied()
        .expect("onset grid is non-empty");
    Ok(TimingSearchResult {
        amplitude: cfg.amplitude,
        decay: cfg.decay,
        n_paths: cfg.base.n_paths,
        seed: cfg.base.seed,
        best_onset: best.onset,
        best_wrong_fraction: best.wrong_fraction,
        baseline_wrong_fraction: baseline,
        curve,
    })
}
