use serde::{Deserialize, Serialize};

use super::config::{ScenarioConfig, ScenarioKind};
use super::regime::RegimeDetector;
use crate::error::Result;
use crate::geometry::separation_unchecked;
use crate::info_flow::{generate_path, BeliefTracker};
use crate::montecarlo::run_paths;
use crate::rng::derive_stream;
use crate::signal::{entropy, statistics_unchecked};
use crate::stats::{fraction, mean_and_stderr, median_finite_or_none, Quantiles};

/// Upper bound on time points kept per path for the summary curves.
pub const CURVE_POINTS: usize = 200;
/// Upper bound on time points per path in the sample CSV.
pub const SAMPLE_POINTS: usize = 2000;
/// Number of leading paths written to the sample CSV.
pub const SAMPLE_PATHS: usize = 8;

const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstPassage {
    /// Fraction of paths on which `pi(truth)` exceeded one half at some grid time.
    pub crossed_fraction: f64,
    /// Median first time above one half, counting never as infinity.
    pub median_time: Option<f64>,
    pub mean_time_given_crossed: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeSwitchStats {
    pub mean: f64,
    pub max: u32,
    pub fraction_with_switch: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationSummary {
    pub initial_min: f64,
    pub initial_max: f64,
    /// Median first time the separation fell to half its initial value;
    /// `None` when fewer than half of the paths got there within the horizon.
    pub median_halving_time: Option<f64>,
    pub halved_fraction: f64,
    pub checkpoint: Option<f64>,
    /// Fraction of paths whose separation at the checkpoint exceeds the initial one.
    pub upward_fraction_at_checkpoint: Option<f64>,
    pub terminal: Quantiles,
}

/// Time-gridded statistics across paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeCurves {
    pub t: Vec<f64>,
    /// Quantiles of `pi(truth)`.
    pub truth_quantiles: Vec<Quantiles>,
    /// Fraction of paths with `pi(truth) > 1/2`.
    pub escape_fraction: Vec<f64>,
    pub mean_entropy: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation_median: Option<Vec<f64>>,
}

/// Aggregated result of one scenario run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub id: String,
    pub scenario: ScenarioKind,
    pub n_paths: usize,
    pub seed: u64,
    pub horizon: f64,
    pub dt: f64,
    pub truth: usize,
    /// Conditional mean of the signal under the prior.
    pub initial_mean: f64,
    pub initial_entropy: f64,
    /// Distribution of `pi(truth)` at the horizon.
    pub terminal: Quantiles,
    pub terminal_mean: f64,
    pub terminal_stderr: f64,
    /// Fraction of paths with `pi(truth) > 1/2` at the horizon.
    pub escape_fraction: f64,
    pub convergence_threshold: f64,
    /// Fraction with `pi(truth) > threshold` at the horizon.
    pub converged_fraction: f64,
    /// Fraction with `pi(truth) < 1 - threshold` at the horizon.
    pub diverted_fraction: f64,
    pub terminal_mean_entropy: f64,
    pub first_passage: FirstPassage,
    pub regime_switches: RegimeSwitchStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation: Option<SeparationSummary>,
    pub kushner_clamps: u64,
    /// Steps where a belief left the simplex or revived a zero.
    pub invariant_violations: u64,
    /// Largest probability ever seen on an alternative the prior excluded.
    pub max_excluded_mass: f64,
    pub curves: TimeCurves,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoint {
    pub t: f64,
    pub xi: f64,
    pub mean: f64,
    pub probs: Vec<f64>,
    /// Second decision maker's belief and the separation, for separation runs.
    pub second: Option<(Vec<f64>, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    pub path: usize,
    pub points: Vec<SamplePoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub summary: RunSummary,
    pub samples: Vec<SamplePath>,
}

struct PathOutcome {
    terminal: f64,
    truth_curve: Vec<f64>,
    entropy_curve: Vec<f64>,
    separation_curve: Vec<f64>,
    first_passage: f64,
    switches: u32,
    clamps: u64,
    violations: u64,
    excluded_mass: f64,
    separation: Option<SeparationOutcome>,
    sample: Option<SamplePath>,
}

struct SeparationOutcome {
    initial: f64,
    terminal: f64,
    halving_time: f64,
    at_checkpoint: Option<f64>,
}

fn stride_for(steps: usize, points: usize) -> usize {
    steps.div_ceil(points).max(1)
}

fn is_recorded(k: usize, stride: usize, steps: usize) -> bool {
    k.is_multiple_of(stride) || k == steps
}

fn check_belief(probs: &[f64], zero_mask: &[bool]) -> bool {
    let mass: f64 = probs.iter().sum();
    (mass - 1.0).abs() <= MASS_TOLERANCE
        && probs.iter().all(|p| (0.0..=1.0).contains(p))
        && probs.iter().zip(zero_mask).all(|(p, z)| !z || *p == 0.0)
}

fn simulate_path(cfg: &ScenarioConfig, index: usize, steps: usize) -> Result<PathOutcome> {
    let alts = &cfg.alternatives;
    let values = alts.values();
    let model = cfg.model();
    let assumption = cfg.assumption();
    let mut stream = derive_stream(cfg.seed, index as u64);
    let path = generate_path(&model, alts, cfg.horizon, cfg.dt, &mut stream)?;

    let mut tracker = BeliefTracker::new(cfg.filter, &cfg.prior, alts)?;
    let mut second = cfg
        .second_prior
        .as_ref()
        .map(|q| BeliefTracker::new(cfg.filter, q, alts))
        .transpose()?;
    let zero_mask: Vec<bool> = cfg.prior.probs().iter().map(|&p| p == 0.0).collect();
    let second_zero_mask: Vec<bool> = cfg
        .second_prior
        .as_ref()
        .map(|q| q.probs().iter().map(|&p| p == 0.0).collect())
        .unwrap_or_default();

    let curve_stride = stride_for(steps, CURVE_POINTS);
    let sample_stride = stride_for(steps, SAMPLE_POINTS);
    let keep_sample = index < SAMPLE_PATHS;
    let checkpoint_step = cfg.checkpoint.map(|c| (c / cfg.dt).round() as usize);

    let mut detector = RegimeDetector::new();
    let mut truth_curve = Vec::new();
    let mut entropy_curve = Vec::new();
    let mut separation_curve = Vec::new();
    let mut points = Vec::new();
    let mut first_passage = f64::INFINITY;
    let mut violations = 0u64;
    let mut excluded_mass = 0.0f64;
    let mut separation = second.as_ref().map(|s| {
        let initial = separation_unchecked(tracker.probs(), s.probs());
        SeparationOutcome {
            initial,
            terminal: initial,
            halving_time: f64::INFINITY,
            at_checkpoint: None,
        }
    });

    for k in 0..=steps {
        let t = k as f64 * cfg.dt;
        if k > 0 {
            let t_prev = (k - 1) as f64 * cfg.dt;
            let sigma = assumption.sigma.value_at(t_prev);
            let d_xi = path.values[k] - path.values[k - 1];
            tracker.step(sigma, cfg.dt, d_xi);
            if let Some(s) = second.as_mut() {
                s.step(sigma, cfg.dt, d_xi);
            }
        }
        let probs = tracker.probs();
        if !check_belief(probs, &zero_mask) {
            violations += 1;
        }
        for (p, _) in probs.iter().zip(&zero_mask).filter(|(_, z)| **z) {
            excluded_mass = excluded_mass.max(*p);
        }
        detector.observe(probs);
        let truth_p = probs[cfg.truth];
        if first_passage.is_infinite() && truth_p > 0.5 {
            first_passage = t;
        }
        let mut delta = None;
        if let (Some(s), Some(sep)) = (second.as_ref(), separation.as_mut()) {
            if !check_belief(s.probs(), &second_zero_mask) {
                violations += 1;
            }
            let d = separation_unchecked(probs, s.probs());
            if sep.halving_time.is_infinite() && d <= 0.5 * sep.initial {
                sep.halving_time = t;
            }
            if checkpoint_step == Some(k) {
                sep.at_checkpoint = Some(d);
            }
            sep.terminal = d;
            delta = Some(d);
        }
        if is_recorded(k, curve_stride, steps) {
            truth_curve.push(truth_p);
            entropy_curve.push(entropy(probs));
            if let Some(d) = delta {
                separation_curve.push(d);
            }
        }
        if keep_sample && is_recorded(k, sample_stride, steps) {
            points.push(SamplePoint {
                t,
                xi: path.values[k],
                mean: statistics_unchecked(probs, values).mean,
                probs: probs.to_vec(),
                second: second.as_ref().zip(delta).map(|(s, d)| (s.probs().to_vec(), d)),
            });
        }
    }

    Ok(PathOutcome {
        terminal: tracker.probs()[cfg.truth],
        truth_curve,
        entropy_curve,
        separation_curve,
        first_passage,
        switches: detector.switches(),
        clamps: tracker.clamps() + second.as_ref().map_or(0, BeliefTracker::clamps),
        violations,
        excluded_mass,
        separation,
        sample: keep_sample.then_some(SamplePath { path: index, points }),
    })
}

/// Runs every path of `cfg` on `workers` threads and aggregates the results.
/// Scenario contracts are not checked here; see [`super::run_scenario`].
pub fn run_monte_carlo(cfg: &ScenarioConfig, workers: usize) -> Result<RunOutput> {
    cfg.validate()?;
    let steps = cfg.steps()?;
    let outcomes = run_paths(cfg.n_paths, workers, |i| simulate_path(cfg, i, steps))?;
    Ok(aggregate(cfg, steps, outcomes))
}

fn aggregate(cfg: &ScenarioConfig, steps: usize, outcomes: Vec<PathOutcome>) -> RunOutput {
    let thr = cfg.convergence_threshold;
    let terminal: Vec<f64> = outcomes.iter().map(|o| o.terminal).collect();
    let (terminal_mean, terminal_stderr) = mean_and_stderr(&terminal);
    let prior_stats = statistics_unchecked(cfg.prior.probs(), cfg.alternatives.values());

    let curve_stride = stride_for(steps, CURVE_POINTS);
    let t: Vec<f64> = (0..=steps)
        .filter(|&k| is_recorded(k, curve_stride, steps))
        .map(|k| k as f64 * cfg.dt)
        .collect();
    let column =
        |j: usize, pick: fn(&PathOutcome) -> &Vec<f64>| -> Vec<f64> { outcomes.iter().map(|o| pick(o)[j]).collect() };
    let mut truth_quantiles = Vec::with_capacity(t.len());
    let mut escape_curve = Vec::with_capacity(t.len());
    let mut mean_entropy = Vec::with_capacity(t.len());
    let mut separation_median = cfg.second_prior.as_ref().map(|_| Vec::with_capacity(t.len()));
    for j in 0..t.len() {
        let truth = column(j, |o| &o.truth_curve);
        truth_quantiles.push(Quantiles::of(&truth));
        escape_curve.push(fraction(truth.iter().map(|&p| p > 0.5)));
        mean_entropy.push(mean_and_stderr(&column(j, |o| &o.entropy_curve)).0);
        if let Some(curve) = separation_median.as_mut() {
            curve.push(Quantiles::of(&column(j, |o| &o.separation_curve)).q50);
        }
    }

    let passages: Vec<f64> = outcomes.iter().map(|o| o.first_passage).collect();
    let crossed: Vec<f64> = passages.iter().copied().filter(|p| p.is_finite()).collect();
    let first_passage = FirstPassage {
        crossed_fraction: fraction(passages.iter().map(|p| p.is_finite())),
        median_time: median_finite_or_none(&passages),
        mean_time_given_crossed: (!crossed.is_empty()).then(|| mean_and_stderr(&crossed).0),
    };

    let switches: Vec<f64> = outcomes.iter().map(|o| o.switches as f64).collect();
    let regime_switches = RegimeSwitchStats {
        mean: mean_and_stderr(&switches).0,
        max: outcomes.iter().map(|o| o.switches).max().unwrap_or(0),
        fraction_with_switch: fraction(outcomes.iter().map(|o| o.switches > 0)),
    };

    let separation = cfg.second_prior.as_ref().map(|_| {
        let seps: Vec<&SeparationOutcome> = outcomes.iter().filter_map(|o| o.separation.as_ref()).collect();
        let initial: Vec<f64> = seps.iter().map(|s| s.initial).collect();
        let halving: Vec<f64> = seps.iter().map(|s| s.halving_time).collect();
        let terminal: Vec<f64> = seps.iter().map(|s| s.terminal).collect();
        SeparationSummary {
            initial_min: initial.iter().copied().fold(f64::INFINITY, f64::min),
            initial_max: initial.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            median_halving_time: median_finite_or_none(&halving),
            halved_fraction: fraction(halving.iter().map(|h| h.is_finite())),
            checkpoint: cfg.checkpoint,
            upward_fraction_at_checkpoint: cfg
                .checkpoint
                .map(|_| fraction(seps.iter().map(|s| s.at_checkpoint.is_some_and(|d| d > s.initial)))),
            terminal: Quantiles::of(&terminal),
        }
    });

    let summary = RunSummary {
        id: cfg.id.clone(),
        scenario: cfg.scenario,
        n_paths: cfg.n_paths,
        seed: cfg.seed,
        horizon: cfg.horizon,
        dt: cfg.dt,
        truth: cfg.truth,
        initial_mean: prior_stats.mean,
        initial_entropy: prior_stats.entropy,
        terminal: Quantiles::of(&terminal),
        terminal_mean,
        terminal_stderr,
        escape_fraction: fraction(terminal.iter().map(|&p| p > 0.5)),
        convergence_threshold: thr,
        converged_fraction: fraction(terminal.iter().map(|&p| p > thr)),
        diverted_fraction: fraction(terminal.iter().map(|&p| p < 1.0 - thr)),
        terminal_mean_entropy: mean_entropy.last().copied().unwrap_or(prior_stats.entropy),
        first_passage,
        regime_switches,
        separation,
        kushner_clamps: outcomes.iter().map(|o| o.clamps).sum(),
        invariant_violations: outcomes.iter().map(|o| o.violations).sum(),
        max_excluded_mass: outcomes.iter().map(|o| o.excluded_mass).fold(0.0, f64::max),
        curves: TimeCurves {
            t,
            truth_quantiles,
            escape_fraction: escape_curve,
            mean_entropy,
            separation_median,
        },
    };
    let samples = outcomes.into_iter().filter_map(|o| o.sample).collect();
    RunOutput { summary, samples }
}
