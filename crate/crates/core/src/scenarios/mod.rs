//! Reproductions of the belief-dynamics experiments.
//!
//! Each `run_*` entry point checks that its config matches the experiment it
//! names and then hands it to the shared Monte Carlo runner. Configs of kind
//! `custom` skip the contract check.

mod config;
pub mod figures;
mod poll;
pub mod regime;
mod runner;
mod timing;

pub use config::{
    Experiment, Overrides, PollCurveConfig, ScenarioConfig, ScenarioKind, ScenarioSet, TimingSearchConfig,
};
pub use poll::{run_poll_curve, PollCurveSummary, PollRow};
pub use runner::{
    run_monte_carlo, FirstPassage, RegimeSwitchStats, RunOutput, RunSummary, SamplePath, SamplePoint,
    SeparationSummary, TimeCurves, CURVE_POINTS, SAMPLE_PATHS, SAMPLE_POINTS,
};
pub use timing::{disinfo_timing_search, OnsetObjective, TimingSearchResult};

use crate::error::{Error, Result};
use crate::info_flow::{Disinfo, NoiseKind};
use crate::signal::{belief_statistics, AlternativeSet};

fn contract(cfg: &ScenarioConfig, ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Contract(format!("{} ({:?}): {what}", cfg.id, cfg.scenario)))
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9
}

fn is_binary(alts: &AlternativeSet) -> bool {
    alts.values() == [0.0, 1.0]
}

fn has_constant_sigma(cfg: &ScenarioConfig, sigma: f64) -> bool {
    cfg.sigma.as_constant() == Some(sigma) && cfg.assumed_sigma.as_ref().is_none_or(|s| *s == cfg.sigma)
}

fn has_unit_noise(cfg: &ScenarioConfig) -> bool {
    cfg.noise_scale.as_constant() == Some(1.0) && cfg.noise == NoiseKind::Brownian
}

/// Binary `{0, 1}`, truth 1, unit rate, two-year horizon, undisturbed assumption.
fn check_tenacious_base(cfg: &ScenarioConfig) -> Result<()> {
    contract(cfg, is_binary(&cfg.alternatives), "alternatives must be {0, 1}")?;
    contract(cfg, cfg.truth == 1, "the true alternative must be X = 1")?;
    contract(
        cfg,
        has_constant_sigma(cfg, 1.0),
        "signal rate must be 1, known to the decision maker",
    )?;
    contract(cfg, close(cfg.horizon, 2.0), "horizon must be 2 years")?;
    contract(
        cfg,
        cfg.prior.probs()[0] >= 0.5,
        "prior must lean towards the wrong alternative X = 0",
    )?;
    contract(cfg, cfg.disinfo == Disinfo::None, "no disinformation")
}

/// Checks `cfg` against the setup of the experiment it claims to be.
pub fn check_contract(cfg: &ScenarioConfig) -> Result<()> {
    match cfg.scenario {
        ScenarioKind::Custom => Ok(()),
        ScenarioKind::FakeNews => {
            contract(cfg, is_binary(&cfg.alternatives), "alternatives must be {0, 1}")?;
            contract(cfg, cfg.prior.probs() == [0.5, 0.5], "prior must be 50-50")?;
            contract(cfg, cfg.truth == 1, "the true alternative must be X = 1")?;
            contract(cfg, has_constant_sigma(cfg, 1.0), "signal rate must be 1")?;
            contract(cfg, has_unit_noise(cfg), "noise must be unit Brownian motion")?;
            contract(
                cfg,
                matches!(cfg.disinfo, Disinfo::None | Disinfo::ConstantRate { .. }),
                "disinformation must be none or constant-rate",
            )
        }
        ScenarioKind::Tenacious => {
            check_tenacious_base(cfg)?;
            contract(cfg, has_unit_noise(cfg), "noise must be unit Brownian motion")
        }
        ScenarioKind::NoiseBoost => {
            check_tenacious_base(cfg)?;
            contract(cfg, cfg.noise == NoiseKind::Brownian, "noise must be Brownian motion")
        }
        ScenarioKind::Separation => {
            contract(cfg, cfg.second_prior.is_some(), "a second prior is required")?;
            contract(
                cfg,
                cfg.alternatives.values() == [1.0, 2.0, 3.0, 4.0, 5.0],
                "alternatives must be 1..5",
            )?;
            contract(cfg, cfg.sigma.as_constant().is_some(), "signal rate must be constant")?;
            contract(cfg, has_unit_noise(cfg), "noise must be unit Brownian motion")?;
            contract(cfg, cfg.disinfo == Disinfo::None, "no disinformation")
        }
        ScenarioKind::AlternativeFact => {
            contract(
                cfg,
                cfg.alternatives.values() == [1.0, 2.0, 3.0],
                "alternatives must be {1, 2, 3}",
            )?;
            contract(cfg, cfg.truth == 1, "the true alternative must be X = 2")?;
            contract(cfg, has_constant_sigma(cfg, 2.0), "signal rate must be 2")?;
            contract(cfg, has_unit_noise(cfg), "noise must be unit Brownian motion")?;
            contract(cfg, cfg.disinfo == Disinfo::None, "no disinformation")?;
            let mean = belief_statistics(&cfg.prior, &cfg.alternatives)?.mean;
            contract(cfg, close(mean, 2.0), "prior mean must be 2")
        }
    }
}

/// Checks the scenario contract and runs the Monte Carlo.
pub fn run_scenario(cfg: &ScenarioConfig, workers: usize) -> Result<RunOutput> {
    cfg.validate()?;
    check_contract(cfg)?;
    run_monte_carlo(cfg, workers)
}

fn run_as(kind: ScenarioKind, cfg: &ScenarioConfig, workers: usize) -> Result<RunSummary> {
    if cfg.scenario != kind {
        return Err(Error::Contract(format!(
            "{}: expected a {kind:?} config, got {:?}",
            cfg.id, cfg.scenario
        )));
    }
    run_scenario(cfg, workers).map(|o| o.summary)
}

/// Honest or disinformation-driven learning from a 50-50 prior.
pub fn run_fake_news(cfg: &ScenarioConfig, workers: usize) -> Result<RunSummary> {
    run_as(ScenarioKind::FakeNews, cfg, workers)
}

/// Learning from a prior concentrated on the wrong alternative.
pub fn run_tenacious(cfg: &ScenarioConfig, workers: usize) -> Result<RunSummary> {
    run_as(ScenarioKind::Tenacious, cfg, workers)
}

/// Two decision makers with different priors watching the same path.
pub fn run_separation(cfg: &ScenarioConfig, workers: usize) -> Result<RunSummary> {
    run_as(ScenarioKind::Separation, cfg, workers)
}

/// Three alternatives with the truth given little or no prior weight.
pub fn run_alternative_fact(cfg: &ScenarioConfig, workers: usize) -> Result<RunSummary> {
    run_as(ScenarioKind::AlternativeFact, cfg, workers)
}

/// Tenacious setup with amplified actual noise the decision maker does not know about.
pub fn run_noise_boost(cfg: &ScenarioConfig, workers: usize) -> Result<RunSummary> {
    run_as(ScenarioKind::NoiseBoost, cfg, workers)
}

/// Result of running any [`Experiment`].
#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentOutput {
    Scenarios { name: String, runs: Vec<RunOutput> },
    PollCurve(PollCurveSummary),
    TimingSearch(TimingSearchResult),
}

/// Runs an experiment on `workers` threads. Every scenario contract is checked
/// before the first path is simulated.
pub fn run_experiment(exp: &Experiment, workers: usize) -> Result<ExperimentOutput> {
    exp.validate()?;
    match exp {
        Experiment::Scenarios(set) => {
            set.runs.iter().try_for_each(check_contract)?;
            let runs = set
                .runs
                .iter()
                .map(|cfg| run_monte_carlo(cfg, workers))
                .collect::<Result<_>>()?;
            Ok(ExperimentOutput::Scenarios {
                name: set.name.clone(),
                runs,
            })
        }
        Experiment::PollCurve(cfg) => run_poll_curve(cfg, workers).map(ExperimentOutput::PollCurve),
        Experiment::TimingSearch(cfg) => disinfo_timing_search(cfg, workers).map(ExperimentOutput::TimingSearch),
    }
}
