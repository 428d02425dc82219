//! Simulation of Bayesian decision makers learning from a noisy information
//! process that may carry disinformation.
//!
//! The crate is layered bottom up:
//!
//! * [`signal`]: finite alternative sets, beliefs, the exact Bayes update and
//!   the Kushner equation.
//! * [`info_flow`]: generation of information paths and filtering along them.
//! * [`geometry`]: square-root embedding of beliefs and the Bhattacharyya angle.
//! * [`electorate`]: voters, polls and win probabilities.
//! * [`scenarios`]: Monte Carlo reproductions of the standard experiments.
//! * [`output`]: on-disk artifacts of a run.
//!
//! All randomness flows through [`rng::RandomStream`], addressed by a master
//! seed and a path index, so results do not depend on the worker count.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod electorate;
pub mod error;
pub mod geometry;
pub mod info_flow;
pub mod montecarlo;
pub mod output;
pub mod rng;
pub mod scenarios;
pub mod signal;
pub mod stats;

pub use error::{Error, Result};
pub use geometry::{bhattacharyya_angle, normalized_separation, sqrt_drift_and_gradient, SqrtState};
pub use info_flow::{
    filter_path, generate_path, kushner_filter_path, BeliefPath, Disinfo, FilterAssumption, FilterKind,
    InformationModel, NoiseKind, ObservationPath, Schedule, Segment,
};
pub use rng::{derive_stream, RandomStream};
pub use scenarios::{run_experiment, Experiment, ExperimentOutput, Overrides, RunSummary, ScenarioConfig};
pub use signal::{
    belief_statistics, incremental_update, kushner_step, path_posterior, single_shot_update, AlternativeSet, Belief,
};
