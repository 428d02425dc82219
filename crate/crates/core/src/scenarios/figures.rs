//! Built-in experiment configs.

use super::config::{Experiment, PollCurveConfig, ScenarioConfig, ScenarioKind, ScenarioSet, TimingSearchConfig};
use crate::error::{Error, Result};
use crate::info_flow::{Disinfo, FilterKind, NoiseKind, Schedule, Segment};
use crate::signal::{AlternativeSet, Belief};

pub const DEFAULT_SEED: u64 = 1;
/// Default step for horizons up to ten years.
pub const DEFAULT_DT: f64 = 1.0 / 250.0;
/// Step for the 200-year separation run.
pub const LONG_RUN_DT: f64 = 1.0 / 50.0;

fn binary_run(id: &str, scenario: ScenarioKind, wrong_prior: f64, horizon: f64, n_paths: usize) -> ScenarioConfig {
    ScenarioConfig {
        id: id.into(),
        scenario,
        alternatives: AlternativeSet::binary(),
        prior: Belief::binary(1.0 - wrong_prior).expect("valid binary prior"),
        second_prior: None,
        truth: 1,
        horizon,
        dt: DEFAULT_DT,
        sigma: Schedule::constant(1.0),
        assumed_sigma: None,
        noise_scale: Schedule::constant(1.0),
        noise: NoiseKind::Brownian,
        disinfo: Disinfo::None,
        filter: FilterKind::Exact,
        n_paths,
        seed: DEFAULT_SEED,
        convergence_threshold: 0.9,
        checkpoint: None,
    }
}

/// 50-50 binary learning over ten years; `rate` adds constant disinformation from t = 0.6.
pub fn fake_news(rate: Option<f64>) -> ScenarioConfig {
    let id = if rate.is_some() {
        "fake-news-disinfo"
    } else {
        "fake-news-honest"
    };
    let mut cfg = binary_run(id, ScenarioKind::FakeNews, 0.5, 10.0, 1000);
    if let Some(rate) = rate {
        cfg.disinfo = Disinfo::ConstantRate { onset: 0.6, rate };
    }
    cfg
}

/// Two-year binary learning with `wrong_prior` on the false alternative.
pub fn tenacious(wrong_prior: f64) -> ScenarioConfig {
    let id = format!("tenacious-{}", percent(wrong_prior));
    binary_run(&id, ScenarioKind::Tenacious, wrong_prior, 2.0, 1000)
}

/// Tenacious setup with the actual noise amplified by `a`.
pub fn noise_boost(a: f64) -> ScenarioConfig {
    let mut cfg = binary_run(&format!("noise-boost-{a}"), ScenarioKind::NoiseBoost, 0.99, 2.0, 10_000);
    cfg.noise_scale = Schedule::constant(a);
    cfg
}

/// Noise amplified by `a` for the first year, then back to normal.
pub fn noise_annealing(a: f64) -> ScenarioConfig {
    let mut cfg = noise_boost(a);
    cfg.id = format!("noise-anneal-{a}");
    cfg.noise_scale = Schedule::piecewise(vec![Segment { from: 0.0, value: a }, Segment { from: 1.0, value: 1.0 }])
        .expect("valid annealing schedule");
    cfg
}

/// Two decision makers on alternatives 1..5 at rate `sigma`.
pub fn separation(sigma: f64) -> ScenarioConfig {
    let long = sigma < 1.0;
    ScenarioConfig {
        id: format!("separation-{sigma}"),
        scenario: ScenarioKind::Separation,
        alternatives: AlternativeSet::integers(5).expect("five alternatives"),
        prior: Belief::new(vec![0.01, 0.96, 0.01, 0.01, 0.01]).expect("valid prior"),
        second_prior: Some(Belief::new(vec![0.01, 0.01, 0.96, 0.01, 0.01]).expect("valid prior")),
        truth: 3,
        horizon: if long { 200.0 } else { 10.0 },
        dt: if long { LONG_RUN_DT } else { DEFAULT_DT },
        sigma: Schedule::constant(sigma),
        assumed_sigma: None,
        noise_scale: Schedule::constant(1.0),
        noise: NoiseKind::Brownian,
        disinfo: Disinfo::None,
        filter: FilterKind::Exact,
        n_paths: 200,
        seed: DEFAULT_SEED,
        convergence_threshold: 0.9,
        checkpoint: long.then_some(40.0),
    }
}

/// Three alternatives with the truth X = 2 given `truth_weight` prior mass.
pub fn alternative_fact(truth_weight: f64) -> ScenarioConfig {
    let side = (1.0 - truth_weight) / 2.0;
    ScenarioConfig {
        id: format!("alternative-fact-{}", percent(truth_weight)),
        scenario: ScenarioKind::AlternativeFact,
        alternatives: AlternativeSet::integers(3).expect("three alternatives"),
        prior: Belief::new(vec![side, truth_weight, side]).expect("valid prior"),
        second_prior: None,
        truth: 1,
        horizon: 10.0,
        dt: DEFAULT_DT,
        sigma: Schedule::constant(2.0),
        assumed_sigma: None,
        noise_scale: Schedule::constant(1.0),
        noise: NoiseKind::Brownian,
        disinfo: Disinfo::None,
        filter: FilterKind::Exact,
        n_paths: 1000,
        seed: DEFAULT_SEED,
        convergence_threshold: 0.9,
        checkpoint: None,
    }
}

/// Win probability against today's support for a slow and a fast information rate.
pub fn poll_curve() -> PollCurveConfig {
    PollCurveConfig {
        supports: (1..=99).map(|k| k as f64 / 100.0).collect(),
        sigmas: vec![0.15, 0.95],
        tau: 1.0,
        n_paths: 10_000,
        seed: DEFAULT_SEED,
    }
}

/// Release-time search for a damped pulse against a 50-50 binary electorate.
pub fn timing_search() -> TimingSearchConfig {
    let base = binary_run("timing-base", ScenarioKind::Custom, 0.5, 2.0, 1000);
    TimingSearchConfig {
        base,
        amplitude: -3.0,
        decay: 1.0,
        onsets: (0..20).map(|k| k as f64 / 10.0).collect(),
    }
}

fn percent(p: f64) -> String {
    format!("{}", (p * 100.0).round() as i64)
}

/// The built-in experiment behind figure `n` (1 to 6).
pub fn figure(n: u8) -> Result<Experiment> {
    let set = |name: &str, runs: Vec<ScenarioConfig>| {
        Experiment::Scenarios(ScenarioSet {
            name: name.into(),
            runs,
        })
    };
    Ok(match n {
        1 => set("figure-1", vec![fake_news(None), fake_news(Some(-2.0))]),
        2 => Experiment::PollCurve(poll_curve()),
        3 => set("figure-3", vec![tenacious(0.99), tenacious(0.80)]),
        4 => set("figure-4", vec![separation(0.2), separation(2.2)]),
        5 => set("figure-5", vec![alternative_fact(0.10), alternative_fact(0.0)]),
        6 => set(
            "figure-6",
            vec![
                noise_boost(1.0),
                noise_boost(2.0),
                noise_boost(4.0),
                noise_annealing(4.0),
            ],
        ),
        _ => return Err(Error::Config(format!("no built-in figure {n}; choose 1 to 6"))),
    })
}
