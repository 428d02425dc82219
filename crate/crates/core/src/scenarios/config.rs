use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info_flow::{grid_steps, Disinfo, FilterAssumption, FilterKind, InformationModel, NoiseKind, Schedule};
use crate::signal::{AlternativeSet, Belief};

/// Which experiment a scenario reproduces. Everything except `custom`
/// enforces that experiment's setup before running.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    #[default]
    Custom,
    FakeNews,
    Tenacious,
    Separation,
    AlternativeFact,
    NoiseBoost,
}

fn unit_schedule() -> Schedule {
    Schedule::constant(1.0)
}

fn default_threshold() -> f64 {
    0.9
}

/// One Monte Carlo run: an actual information model, the decision maker's
/// prior(s) and assumed rate, and the sampling budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub id: String,
    #[serde(default)]
    pub scenario: ScenarioKind,
    pub alternatives: AlternativeSet,
    pub prior: Belief,
    /// Second decision maker watching the same path (separation runs).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_prior: Option<Belief>,
    pub truth: usize,
    pub horizon: f64,
    pub dt: f64,
    pub sigma: Schedule,
    /// Rate the decision maker assumes; defaults to the actual rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assumed_sigma: Option<Schedule>,
    #[serde(default = "unit_schedule")]
    pub noise_scale: Schedule,
    #[serde(default)]
    pub noise: NoiseKind,
    #[serde(default)]
    pub disinfo: Disinfo,
    #[serde(default)]
    pub filter: FilterKind,
    pub n_paths: usize,
    pub seed: u64,
    /// `pi(truth)` above this counts as converged, below `1 - threshold` as diverted.
    #[serde(default = "default_threshold")]
    pub convergence_threshold: f64,
    /// Time at which the separation is compared with its initial value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoint: Option<f64>,
}

impl ScenarioConfig {
    pub fn model(&self) -> InformationModel {
        InformationModel {
            truth: self.truth,
            sigma: self.sigma.clone(),
            noise_scale: self.noise_scale.clone(),
            disinfo: self.disinfo,
            noise: self.noise,
        }
    }

    pub fn assumption(&self) -> FilterAssumption {
        FilterAssumption::new(self.assumed_sigma.clone().unwrap_or_else(|| self.sigma.clone()))
    }

    pub fn steps(&self) -> Result<usize> {
        grid_steps(self.horizon, self.dt)
    }

    /// Structural checks shared by every scenario kind.
    pub fn validate(&self) -> Result<()> {
        self.alternatives.validate()?;
        let n = self.alternatives.len();
        if self.prior.len() != n {
            return Err(Error::Config(format!(
                "{}: prior has {} entries for {n} alternatives",
                self.id,
                self.prior.len()
            )));
        }
        if let Some(q) = &self.second_prior {
            if q.len() != n {
                return Err(Error::Config(format!(
                    "{}: second prior has {} entries for {n} alternatives",
                    self.id,
                    q.len()
                )));
            }
        }
        self.model().validate(&self.alternatives)?;
        self.steps()?;
        if self.n_paths == 0 {
            return Err(Error::Config(format!("{}: n_paths must be at least 1", self.id)));
        }
        if !(self.convergence_threshold > 0.5 && self.convergence_threshold < 1.0) {
            return Err(Error::Config(format!(
                "{}: convergence threshold must lie in (0.5, 1)",
                self.id
            )));
        }
        if let Some(c) = self.checkpoint {
            if !(c > 0.0 && c <= self.horizon) {
                return Err(Error::Config(format!(
                    "{}: checkpoint must lie in (0, horizon]",
                    self.id
                )));
            }
        }
        if self.scenario == ScenarioKind::Separation && self.second_prior.is_none() {
            return Err(Error::Contract(format!(
                "{}: separation runs need a second prior",
                self.id
            )));
        }
        Ok(())
    }
}

/// Sweep of win-probability estimates over today's support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PollCurveConfig {
    pub supports: Vec<f64>,
    pub sigmas: Vec<f64>,
    /// Years until the election.
    pub tau: f64,
    pub n_paths: usize,
    pub seed: u64,
}

impl PollCurveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.supports.is_empty() || self.sigmas.is_empty() {
            return Err(Error::Config(
                "poll curve needs at least one support and one sigma".into(),
            ));
        }
        if self.supports.iter().any(|s| !(*s > 0.0 && *s < 1.0)) {
            return Err(Error::Config("supports must lie in (0, 1)".into()));
        }
        if self.sigmas.iter().any(|s| !(*s >= 0.0) || !s.is_finite()) {
            return Err(Error::Config("sigmas must be non-negative".into()));
        }
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(Error::Config("tau must be positive".into()));
        }
        if self.n_paths == 0 {
            return Err(Error::Config("n_paths must be at least 1".into()));
        }
        Ok(())
    }
}

/// Grid search over the release time of a single disinformation pulse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingSearchConfig {
    /// Honest scenario the pulse is injected into; its own disinfo must be `none`.
    pub base: ScenarioConfig,
    pub amplitude: f64,
    pub decay: f64,
    pub onsets: Vec<f64>,
}

impl TimingSearchConfig {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.base.disinfo != Disinfo::None {
            return Err(Error::Config(
                "timing search base scenario must not carry its own disinformation".into(),
            ));
        }
        if self.onsets.is_empty() {
            return Err(Error::Config("onset grid is empty".into()));
        }
        if self.onsets.iter().any(|t| !(*t >= 0.0 && *t < self.base.horizon)) {
            return Err(Error::Config("onsets must lie in [0, horizon)".into()));
        }
        Disinfo::Pulse {
            onset: 0.0,
            amplitude: self.amplitude,
            decay: self.decay,
        }
        .validate()
    }
}

/// A set of scenario runs reported together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSet {
    pub name: String,
    pub runs: Vec<ScenarioConfig>,
}

/// Anything the CLI can run from a config document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Experiment {
    Scenarios(ScenarioSet),
    PollCurve(PollCurveConfig),
    TimingSearch(TimingSearchConfig),
}

/// Command-line overrides applied to every run in an experiment.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub n_paths: Option<usize>,
    pub dt: Option<f64>,
}

impl Experiment {
    pub fn name(&self) -> String {
        match self {
            Experiment::Scenarios(set) => set.name.clone(),
            Experiment::PollCurve(_) => "poll-curve".into(),
            Experiment::TimingSearch(_) => "timing-search".into(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let exp: Experiment = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        exp.validate()?;
        Ok(exp)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("experiment configs always serialize")
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Experiment::Scenarios(set) => {
                if set.runs.is_empty() {
                    return Err(Error::Config("scenario set has no runs".into()));
                }
                set.runs.iter().try_for_each(ScenarioConfig::validate)
            }
            Experiment::PollCurve(c) => c.validate(),
            Experiment::TimingSearch(c) => c.validate(),
        }
    }

    /// Seed used for the manifest: the first run's seed.
    pub fn seed(&self) -> u64 {
        match self {
            Experiment::Scenarios(set) => set.runs.first().map_or(0, |r| r.seed),
            Experiment::PollCurve(c) => c.seed,
            Experiment::TimingSearch(c) => c.base.seed,
        }
    }

    pub fn apply(&mut self, o: Overrides) {
        let patch = |run: &mut ScenarioConfig| {
            if let Some(s) = o.seed {
                run.seed = s;
            }
            if let Some(n) = o.n_paths {
                run.n_paths = n;
            }
            if let Some(dt) = o.dt {
                run.dt = dt;
            }
        };
        match self {
            Experiment::Scenarios(set) => set.runs.iter_mut().for_each(patch),
            Experiment::TimingSearch(c) => patch(&mut c.base),
            Experiment::PollCurve(c) => {
                if let Some(s) = o.seed {
                    c.seed = s;
                }
                if let Some(n) = o.n_paths {
                    c.n_paths = n;
                }
            }
        }
    }
}
