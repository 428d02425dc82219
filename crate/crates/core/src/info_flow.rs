//! Observation paths from the actual information model and their filtering
//! under the decision maker's assumed model.
//!
//! The actual model may carry disinformation drift and amplified noise; the
//! assumed model never does. [`filter_path`] only sees the observed values and
//! the assumed rate, so it cannot tell a manipulated path from an honest one.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_dims, Error, Result};
use crate::rng::RandomStream;
use crate::signal::{kushner_step_in_place, AlternativeSet, Belief, ExactFilter};

/// Slack used when comparing times that should sit on the grid.
const GRID_TOLERANCE: f64 = 1e-9;

/// Number of steps of size `dt` that fit in `horizon`, forgiving floating
/// point noise in the ratio.
pub fn grid_steps(horizon: f64, dt: f64) -> Result<usize> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::invalid(format!("horizon must be positive, got {horizon}")));
    }
    if !(dt > 0.0) || !dt.is_finite() || dt > horizon * (1.0 + GRID_TOLERANCE) {
        return Err(Error::invalid(format!("time step must lie in (0, horizon], got {dt}")));
    }
    let ratio = horizon / dt;
    let nearest = ratio.round();
    let steps = if (ratio - nearest).abs() < GRID_TOLERANCE * nearest.max(1.0) {
        nearest
    } else {
        ratio.floor()
    };
    Ok(steps as usize)
}

fn on_grid(t: f64, dt: f64) -> bool {
    let k = (t / dt).round();
    (t - k * dt).abs() <= GRID_TOLERANCE * dt.max(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub from: f64,
    pub value: f64,
}

/// Piecewise-constant function of time. The value on `[t_k, t_k+1)` applies
/// to step `k`.
///
/// In JSON a schedule is either a bare number (constant) or a list of
/// `{"from": t, "value": v}` segments starting at `from = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRepr", into = "Vec<Segment>")]
pub struct Schedule {
    segments: Vec<Segment>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScheduleRepr {
    Constant(f64),
    Segments(Vec<Segment>),
}

impl TryFrom<ScheduleRepr> for Schedule {
    type Error = Error;

    fn try_from(repr: ScheduleRepr) -> Result<Self> {
        match repr {
            ScheduleRepr::Constant(v) => Schedule::piecewise(vec![Segment { from: 0.0, value: v }]),
            ScheduleRepr::Segments(s) => Schedule::piecewise(s),
        }
    }
}

impl From<Schedule> for Vec<Segment> {
    fn from(s: Schedule) -> Self {
        s.segments
    }
}

impl Schedule {
    pub fn constant(value: f64) -> Self {
        Self {
            segments: vec![Segment { from: 0.0, value }],
        }
    }

    pub fn piecewise(segments: Vec<Segment>) -> Result<Self> {
        match segments.first() {
            Some(first) if first.from == 0.0 => {}
            _ => return Err(Error::invalid("a schedule must start with a segment at time 0")),
        }
        if segments.iter().any(|s| !s.value.is_finite() || !s.from.is_finite()) {
            return Err(Error::invalid("schedule entries must be finite"));
        }
        if segments.windows(2).any(|w| w[1].from <= w[0].from) {
            return Err(Error::invalid("schedule breakpoints must be strictly increasing"));
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn value_at(&self, t: f64) -> f64 {
        let slack = GRID_TOLERANCE * t.abs().max(1.0);
        self.segments
            .iter()
            .take_while(|s| s.from <= t + slack)
            .last()
            .map_or(self.segments[0].value, |s| s.value)
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self.segments.as_slice() {
            [only] => Some(only.value),
            _ => None,
        }
    }

    pub fn min_value(&self) -> f64 {
        self.segments.iter().map(|s| s.value).fold(f64::INFINITY, f64::min)
    }

    fn check_grid(&self, dt: f64, what: &str) -> Result<()> {
        for s in &self.segments[1..] {
            if !on_grid(s.from, dt) {
                return Err(Error::invalid(format!(
                    "{what} breakpoint at t = {} is not on the time grid (dt = {dt})",
                    s.from
                )));
            }
        }
        Ok(())
    }
}

/// Bias injected into the noise, unknown to the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Disinfo {
    #[default]
    None,
    /// Drift `rate` per year from `onset` on.
    ConstantRate { onset: f64, rate: f64 },
    /// Drift `amplitude * s * exp(-decay * s)` with `s = t - onset`: a single
    /// release that builds up and then fades.
    Pulse { onset: f64, amplitude: f64, decay: f64 },
}

impl Disinfo {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Disinfo::None => Ok(()),
            Disinfo::ConstantRate { onset, rate } => {
                if !(onset >= 0.0) || !onset.is_finite() || !rate.is_finite() {
                    return Err(Error::invalid(
                        "constant-rate disinformation needs onset >= 0 and a finite rate",
                    ));
                }
                Ok(())
            }
            Disinfo::Pulse {
                onset,
                amplitude,
                decay,
            } => {
                if !(onset >= 0.0)
                    || !onset.is_finite()
                    || !amplitude.is_finite()
                    || !(decay >= 0.0)
                    || !decay.is_finite()
                {
                    return Err(Error::invalid(
                        "pulse disinformation needs onset >= 0, finite amplitude and decay >= 0",
                    ));
                }
                Ok(())
            }
        }
    }

    /// Drift rate at time `t`.
    pub fn rate_at(&self, t: f64) -> f64 {
        match *self {
            Disinfo::None => 0.0,
            Disinfo::ConstantRate { onset, rate } => {
                if t >= onset {
                    rate
                } else {
                    0.0
                }
            }
            Disinfo::Pulse {
                onset,
                amplitude,
                decay,
            } => {
                let s = t - onset;
                if s >= 0.0 {
                    amplitude * s * (-decay * s).exp()
                } else {
                    0.0
                }
            }
        }
    }

    /// Integrated drift over `[0, t]`.
    pub fn cumulative(&self, t: f64) -> f64 {
        match *self {
            Disinfo::None => 0.0,
            Disinfo::ConstantRate { onset, rate } => rate * (t - onset).max(0.0),
            Disinfo::Pulse {
                onset,
                amplitude,
                decay,
            } => {
                let s = (t - onset).max(0.0);
                if decay == 0.0 {
                    0.5 * amplitude * s * s
                } else {
                    let ls = decay * s;
                    // 1 - e^{-x}(1 + x), written to keep precision for small x
                    let shape = -(-ls).exp_m1() - ls * (-ls).exp();
                    amplitude * shape / (decay * decay)
                }
            }
        }
    }

    pub fn increment(&self, t0: f64, t1: f64) -> f64 {
        match self {
            Disinfo::None => 0.0,
            _ => self.cumulative(t1) - self.cumulative(t0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    #[default]
    Brownian,
    /// Brownian bridge pinned to zero at the final grid time.
    Bridge,
}

/// The actual generative model of the information process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InformationModel {
    /// Index of the true alternative.
    pub truth: usize,
    pub sigma: Schedule,
    #[serde(default = "unit_schedule")]
    pub noise_scale: Schedule,
    #[serde(default)]
    pub disinfo: Disinfo,
    #[serde(default)]
    pub noise: NoiseKind,
}

fn unit_schedule() -> Schedule {
    Schedule::constant(1.0)
}

impl InformationModel {
    /// Honest model: constant rate, unit Brownian noise, no disinformation.
    pub fn honest(truth: usize, sigma: f64) -> Self {
        Self {
            truth,
            sigma: Schedule::constant(sigma),
            noise_scale: unit_schedule(),
            disinfo: Disinfo::None,
            noise: NoiseKind::Brownian,
        }
    }

    pub fn validate(&self, alts: &AlternativeSet) -> Result<()> {
        if self.truth >= alts.len() {
            return Err(Error::invalid(format!(
                "truth index {} out of range for {} alternatives",
                self.truth,
                alts.len()
            )));
        }
        if self.sigma.min_value() < 0.0 {
            return Err(Error::invalid("signal rate must be non-negative"));
        }
        if !(self.noise_scale.min_value() > 0.0) {
            return Err(Error::invalid("noise scale must be positive everywhere"));
        }
        self.disinfo.validate()
    }
}

/// What the decision maker believes about the information process: a signal
/// rate, unit noise and no disinformation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterAssumption {
    pub sigma: Schedule,
}

impl FilterAssumption {
    pub fn new(sigma: Schedule) -> Self {
        Self { sigma }
    }

    /// Assumes the actual signal rate.
    pub fn matching(model: &InformationModel) -> Self {
        Self {
            sigma: model.sigma.clone(),
        }
    }
}

/// Observed values `xi_k` at grid times `k * dt`, with `xi_0 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationPath {
    pub dt: f64,
    pub values: Vec<f64>,
    /// Model the path was generated from. Filtering never reads it.
    pub generated_by: InformationModel,
    pub seed: u64,
    pub stream_index: u64,
}

impl ObservationPath {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn horizon(&self) -> f64 {
        self.time(self.values.len().saturating_sub(1))
    }

    pub fn increments(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.windows(2).map(|w| w[1] - w[0])
    }

    /// The same path with every value multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    /// `t,xi` with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,xi")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(out, "{:.16e},{:.16e}", self.time(k), v)?;
        }
        Ok(())
    }
}

/// Beliefs along an observation path, index-aligned with it.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefPath {
    pub dt: f64,
    pub beliefs: Vec<Belief>,
}

impl BeliefPath {
    pub fn len(&self) -> usize {
        self.beliefs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beliefs.is_empty()
    }

    pub fn last(&self) -> &Belief {
        self.beliefs.last().expect("belief path is never empty")
    }

    /// `t,p1,...,pn` with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let n = self.beliefs.first().map_or(0, Belief::len);
        let header: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
        writeln!(out, "t,{}", header.join(","))?;
        for (k, b) in self.beliefs.iter().enumerate() {
            write!(out, "{:.16e}", k as f64 * self.dt)?;
            for p in b.probs() {
                write!(out, ",{p:.16e}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Increments of a standard Brownian bridge on the grid `0, dt, ..., N dt`,
/// pinned to zero at `N dt`.
pub fn bridge_increments(horizon: f64, dt: f64, stream: &mut RandomStream) -> Result<Vec<f64>> {
    let steps = grid_steps(horizon, dt)?;
    let sqrt_dt = dt.sqrt();
    let mut increments: Vec<f64> = (0..steps).map(|_| sqrt_dt * stream.standard_normal()).collect();
    pin_bridge(&mut increments);
    Ok(increments)
}

fn pin_bridge(increments: &mut [f64]) {
    let steps = increments.len();
    if steps == 0 {
        return;
    }
    let endpoint: f64 = increments.iter().sum();
    let share = endpoint / steps as f64;
    for inc in increments.iter_mut() {
        *inc -= share;
    }
    // absorb the rounding residue so the bridge lands on exactly zero
    let residue: f64 = increments[..steps - 1].iter().sum();
    increments[steps - 1] = -residue;
}

/// Simulates the observed process `d xi = sigma(t) x_truth dt + a(t) dW + df(t)`.
pub fn generate_path(
    model: &InformationModel,
    alts: &AlternativeSet,
    horizon: f64,
    dt: f64,
    stream: &mut RandomStream,
) -> Result<ObservationPath> {
    model.validate(alts)?;
    let steps = grid_steps(horizon, dt)?;
    model.sigma.check_grid(dt, "signal rate")?;
    model.noise_scale.check_grid(dt, "noise scale")?;
    let seed = stream.seed();
    let stream_index = stream.index();

    let sqrt_dt = dt.sqrt();
    let mut noise: Vec<f64> = (0..steps).map(|_| sqrt_dt * stream.standard_normal()).collect();
    if model.noise == NoiseKind::Bridge {
        pin_bridge(&mut noise);
    }

    let x = alts.values()[model.truth];
    let mut values = Vec::with_capacity(steps + 1);
    let mut xi = 0.0;
    values.push(xi);
    for (k, dw) in noise.into_iter().enumerate() {
        let t0 = k as f64 * dt;
        let t1 = (k + 1) as f64 * dt;
        let mut inc = model.sigma.value_at(t0) * x * dt + model.noise_scale.value_at(t0) * dw;
        let drift = model.disinfo.increment(t0, t1);
        if drift != 0.0 {
            inc += drift;
        }
        xi += inc;
        values.push(xi);
    }
    Ok(ObservationPath {
        dt,
        values,
        generated_by: model.clone(),
        seed,
        stream_index,
    })
}

/// Belief update rule used while walking a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    /// Exact Bayes posterior.
    #[default]
    Exact,
    /// Euler discretization of the Kushner equation, clamped and renormalized.
    Kushner,
}

/// Incremental belief tracker shared by the path filters and the scenario runner.
#[derive(Debug, Clone)]
pub struct BeliefTracker {
    inner: TrackerState,
    clamps: u64,
}

#[derive(Debug, Clone)]
enum TrackerState {
    Exact(ExactFilter),
    Kushner { probs: Vec<f64>, values: Vec<f64> },
}

impl BeliefTracker {
    pub fn new(kind: FilterKind, prior: &Belief, alts: &AlternativeSet) -> Result<Self> {
        ensure_dims(alts.len(), prior.len())?;
        let inner = match kind {
            FilterKind::Exact => TrackerState::Exact(ExactFilter::new(prior, alts)?),
            FilterKind::Kushner => TrackerState::Kushner {
                probs: prior.probs().to_vec(),
                values: alts.values().to_vec(),
            },
        };
        Ok(Self { inner, clamps: 0 })
    }

    pub fn step(&mut self, sigma: f64, dt: f64, d_xi: f64) {
        match &mut self.inner {
            TrackerState::Exact(f) => f.step(sigma, dt, d_xi),
            TrackerState::Kushner { probs, values } => {
                self.clamps += kushner_step_in_place(probs, values, sigma, dt, d_xi) as u64;
            }
        }
    }

    pub fn probs(&self) -> &[f64] {
        match &self.inner {
            TrackerState::Exact(f) => f.probs(),
            TrackerState::Kushner { probs, .. } => probs,
        }
    }

    pub fn clamps(&self) -> u64 {
        self.clamps
    }
}

fn walk(
    path: &ObservationPath,
    prior: &Belief,
    alts: &AlternativeSet,
    assumption: &FilterAssumption,
    kind: FilterKind,
) -> Result<(BeliefPath, u64)> {
    if path.is_empty() {
        return Err(Error::invalid("observation path is empty"));
    }
    assumption.sigma.check_grid(path.dt, "assumed signal rate")?;
    let mut tracker = BeliefTracker::new(kind, prior, alts)?;
    let mut beliefs = Vec::with_capacity(path.len());
    beliefs.push(prior.clone());
    for (k, d_xi) in path.increments().enumerate() {
        tracker.step(assumption.sigma.value_at(path.time(k)), path.dt, d_xi);
        beliefs.push(Belief::new(tracker.probs().to_vec())?);
    }
    Ok((BeliefPath { dt: path.dt, beliefs }, tracker.clamps()))
}

/// Exact Bayes filter of `path` under the assumed model.
pub fn filter_path(
    path: &ObservationPath,
    prior: &Belief,
    alts: &AlternativeSet,
    assumption: &FilterAssumption,
) -> Result<BeliefPath> {
    walk(path, prior, alts, assumption, FilterKind::Exact).map(|(p, _)| p)
}

/// Kushner-equation filter of `path`; also returns the number of clamped components.
pub fn kushner_filter_path(
    path: &ObservationPath,
    prior: &Belief,
    alts: &AlternativeSet,
    assumption: &FilterAssumption,
) -> Result<(BeliefPath, u64)> {
    walk(path, prior, alts, assumption, FilterKind::Kushner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;

    #[test]
    fn grid_steps_forgives_rounding() {
        assert_eq!(grid_steps(10.0, 1.0 / 250.0).unwrap(), 2500);
        assert_eq!(grid_steps(200.0, 1.0 / 50.0).unwrap(), 10_000);
        assert_eq!(grid_steps(1.0, 0.3).unwrap(), 3);
        assert_eq!(grid_steps(1.0, 1.0).unwrap(), 1);
        assert!(grid_steps(0.0, 0.1).is_err());
        assert!(grid_steps(1.0, 0.0).is_err());
        assert!(grid_steps(1.0, 2.0).is_err());
        assert!(grid_steps(-1.0, 0.1).is_err());
    }

    #[test]
    fn schedule_lookup_and_serde() {
        let s: Schedule = serde_json::from_str(r#"[{"from":0,"value":1},{"from":0.6,"value":3}]"#).unwrap();
        assert_eq!(s.value_at(0.0), 1.0);
        assert_eq!(s.value_at(0.599), 1.0);
        assert_eq!(s.value_at(150.0 * 0.004), 3.0);
        let c: Schedule = serde_json::from_str("2.5").unwrap();
        assert_eq!(c.as_constant(), Some(2.5));
        assert!(serde_json::from_str::<Schedule>(r#"[{"from":1,"value":1}]"#).is_err());
        assert!(serde_json::from_str::<Schedule>(r#"[{"from":0,"value":1,"typo":2}]"#).is_err());
        let back: Schedule = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn disinfo_integrals() {
        let c = Disinfo::ConstantRate { onset: 0.6, rate: -2.0 };
        assert_eq!(c.cumulative(0.5), 0.0);
        assert!((c.cumulative(2.0) + 2.8).abs() < 1e-12);
        let p = Disinfo::Pulse {
            onset: 1.0,
            amplitude: 3.0,
            decay: 2.0,
        };
        assert_eq!(p.cumulative(0.9), 0.0);
        // midpoint-rule quadrature of the pulse shape
        let n = 200_000;
        let (a, b) = (1.0, 2.5);
        let h = (b - a) / n as f64;
        let quad: f64 = (0..n).map(|i| p.rate_at(a + (i as f64 + 0.5) * h) * h).sum();
        assert!((p.cumulative(2.5) - quad).abs() < 1e-9);
        let flat = Disinfo::Pulse {
            onset: 0.0,
            amplitude: 3.0,
            decay: 0.0,
        };
        assert!((flat.cumulative(2.0) - 6.0).abs() < 1e-15);
        assert_eq!(Disinfo::None.increment(0.0, 5.0), 0.0);
    }

    #[test]
    fn disinfo_serde_rejects_unknown_fields() {
        let d: Disinfo = serde_json::from_str(r#"{"kind":"constant_rate","onset":0.6,"rate":-2}"#).unwrap();
        assert_eq!(d, Disinfo::ConstantRate { onset: 0.6, rate: -2.0 });
        assert!(serde_json::from_str::<Disinfo>(r#"{"kind":"constant_rate","onset":0.6,"rat":-2}"#).is_err());
        assert!(serde_json::from_str::<Disinfo>(r#"{"kind":"sometimes"}"#).is_err());
    }

    #[test]
    fn path_shape() {
        let alts = AlternativeSet::binary();
        let model = InformationModel::honest(1, 1.0);
        let path = generate_path(&model, &alts, 1.0, 0.01, &mut derive_stream(3, 4)).unwrap();
        assert_eq!(path.len(), 101);
        assert_eq!(path.values[0], 0.0);
        assert_eq!((path.seed, path.stream_index), (3, 4));
        assert!(generate_path(&model, &alts, 1.0, 0.0, &mut derive_stream(3, 4)).is_err());
        assert!(generate_path(&model, &alts, 0.0, 0.01, &mut derive_stream(3, 4)).is_err());
        let bad = InformationModel::honest(2, 1.0);
        assert!(generate_path(&bad, &alts, 1.0, 0.01, &mut derive_stream(3, 4)).is_err());
    }

    #[test]
    fn zero_rate_disinfo_is_a_no_op() {
        let alts = AlternativeSet::binary();
        let honest = InformationModel::honest(1, 1.0);
        let mut flat = honest.clone();
        flat.disinfo = Disinfo::ConstantRate { onset: 0.6, rate: 0.0 };
        let a = generate_path(&honest, &alts, 2.0, 0.004, &mut derive_stream(11, 0)).unwrap();
        let b = generate_path(&flat, &alts, 2.0, 0.004, &mut derive_stream(11, 0)).unwrap();
        assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn bridge_is_pinned() {
        for seed in 0..20 {
            let inc = bridge_increments(3.0, 0.01, &mut derive_stream(seed, 0)).unwrap();
            assert_eq!(inc.len(), 300);
            assert!(inc.iter().sum::<f64>().abs() < 1e-12);
        }
        let model = InformationModel {
            noise: NoiseKind::Bridge,
            ..InformationModel::honest(0, 0.0)
        };
        let path = generate_path(&model, &AlternativeSet::binary(), 1.0, 0.01, &mut derive_stream(1, 1)).unwrap();
        assert!(path.values.last().unwrap().abs() < 1e-12);
    }

    #[test]
    fn off_grid_breakpoint_is_rejected() {
        let alts = AlternativeSet::binary();
        let mut model = InformationModel::honest(1, 1.0);
        model.sigma = Schedule::piecewise(vec![
            Segment { from: 0.0, value: 1.0 },
            Segment {
                from: 0.0125,
                value: 2.0,
            },
        ])
        .unwrap();
        assert!(generate_path(&model, &alts, 1.0, 0.01, &mut derive_stream(0, 0)).is_err());
        let path = generate_path(
            &InformationModel::honest(1, 1.0),
            &alts,
            1.0,
            0.01,
            &mut derive_stream(0, 0),
        )
        .unwrap();
        let assumption = FilterAssumption::new(model.sigma.clone());
        assert!(filter_path(&path, &Belief::binary(0.5).unwrap(), &alts, &assumption).is_err());
    }

    #[test]
    fn csv_headers() {
        let alts = AlternativeSet::binary();
        let model = InformationModel::honest(1, 1.0);
        let path = generate_path(&model, &alts, 0.02, 0.01, &mut derive_stream(0, 0)).unwrap();
        let mut buf = Vec::new();
        path.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,xi"));
        assert_eq!(lines.next(), Some("0.0000000000000000e0,0.0000000000000000e0"));
        let beliefs = filter_path(
            &path,
            &Belief::binary(0.5).unwrap(),
            &alts,
            &FilterAssumption::matching(&model),
        )
        .unwrap();
        let mut buf = Vec::new();
        beliefs.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,p1,p2\n"));
        assert_eq!(text.lines().count(), 4);
        let row: Vec<f64> = text
            .lines()
            .nth(3)
            .unwrap()
            .split(',')
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(row[2], beliefs.last().probs()[1]);
    }
}
