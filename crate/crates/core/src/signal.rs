//! Belief states over a finite set of alternatives and the Bayesian update
//! rules that move them.
//!
//! Every update is carried out in the log domain against the largest
//! exponent, so long horizons with large signal rates never overflow. An
//! alternative with probability exactly zero is skipped entirely and stays at
//! zero.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_dims, Error, Result};

/// Tolerance accepted on the total mass of a user-supplied probability vector.
const INPUT_MASS_TOLERANCE: f64 = 1e-9;

/// The finite signal alphabet: the numerical values the unknown quantity may take.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlternativeSet {
    values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

impl AlternativeSet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let set = Self { values, names: None };
        set.validate()?;
        Ok(set)
    }

    pub fn with_names(values: Vec<f64>, names: Vec<String>) -> Result<Self> {
        let set = Self {
            values,
            names: Some(names),
        };
        set.validate()?;
        Ok(set)
    }

    /// `{0, 1}`.
    pub fn binary() -> Self {
        Self {
            values: vec![0.0, 1.0],
            names: None,
        }
    }

    /// `{1, 2, ..., n}`.
    pub fn integers(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|v| v as f64).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.len() < 2 {
            return Err(Error::invalid("an alternative set needs at least two values"));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("alternative values must be finite"));
        }
        for (i, a) in self.values.iter().enumerate() {
            if self.values[i + 1..].contains(a) {
                return Err(Error::invalid(format!("alternative value {a} is repeated")));
            }
        }
        if let Some(names) = &self.names {
            ensure_dims(self.values.len(), names.len())?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }
}

/// A probability assignment over the alternatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Belief {
    probs: Vec<f64>,
}

impl TryFrom<Vec<f64>> for Belief {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Belief::new(probs)
    }
}

impl From<Belief> for Vec<f64> {
    fn from(b: Belief) -> Self {
        b.probs
    }
}

impl Belief {
    /// Validates `probs`. The mass must be within 1e-9 of one; anything
    /// further off than 1e-12 is renormalized. Beliefs that already pass the
    /// tighter check are kept bit for bit, so serialization round-trips.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::invalid("a belief needs at least two probabilities"));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0 || *p > 1.0) {
            return Err(Error::invalid("probabilities must lie in [0, 1]"));
        }
        let mass: f64 = probs.iter().sum();
        if (mass - 1.0).abs() > INPUT_MASS_TOLERANCE {
            return Err(Error::invalid(format!("probabilities sum to {mass}, not 1")));
        }
        if (mass - 1.0).abs() <= 1e-12 {
            return Ok(Self { probs });
        }
        let probs = probs.into_iter().map(|p| p / mass).collect();
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    /// Binary belief `(1 - p, p)` on `{0, 1}`: `p` is the weight on the second alternative.
    pub fn binary(p: f64) -> Result<Self> {
        Self::new(vec![1.0 - p, p])
    }

    /// Point mass on alternative `k`.
    pub fn degenerate(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::invalid(format!("index {k} out of range for {n} alternatives")));
        }
        let mut probs = vec![0.0; n];
        probs[k] = 1.0;
        Self::new(probs)
    }

    /// Builds a belief from unnormalized log weights; `-inf` entries become exact zeros.
    pub fn from_log_weights(log_weights: &[f64]) -> Result<Self> {
        let mut probs = vec![0.0; log_weights.len()];
        normalize_log_weights(log_weights, &mut probs)?;
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.probs.contains(&1.0)
    }

    /// Posterior proportional to `prob_i * exp(log_lik(i))`.
    pub fn reweighted(&self, mut log_lik: impl FnMut(usize) -> f64) -> Result<Self> {
        let log_weights: Vec<f64> = self
            .probs
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                if p > 0.0 {
                    p.ln() + log_lik(i)
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect();
        Self::from_log_weights(&log_weights)
    }

    fn check_against(&self, alts: &AlternativeSet) -> Result<()> {
        ensure_dims(alts.len(), self.len())
    }
}

/// Writes `exp(lw_i - max)` normalized into `out`; returns an error if no
/// weight is finite.
pub(crate) fn normalize_log_weights(log_weights: &[f64], out: &mut [f64]) -> Result<()> {
    let max = log_weights
        .iter()
        .copied()
        .filter(|w| !w.is_nan())
        .fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::invalid("belief has no finite log weight"));
    }
    let mut total = 0.0;
    for (o, &w) in out.iter_mut().zip(log_weights) {
        *o = if w == f64::NEG_INFINITY { 0.0 } else { (w - max).exp() };
        total += *o;
    }
    for o in out.iter_mut() {
        *o /= total;
    }
    Ok(())
}

/// Conditional mean, variance and entropy of a belief.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeliefStatistics {
    pub mean: f64,
    pub variance: f64,
    /// Shannon entropy in nats.
    pub entropy: f64,
}

pub fn belief_statistics(belief: &Belief, alts: &AlternativeSet) -> Result<BeliefStatistics> {
    belief.check_against(alts)?;
    Ok(statistics_unchecked(belief.probs(), alts.values()))
}

pub(crate) fn statistics_unchecked(probs: &[f64], values: &[f64]) -> BeliefStatistics {
    let mean: f64 = probs.iter().zip(values).map(|(p, x)| p * x).sum();
    let variance = probs.iter().zip(values).map(|(p, x)| p * (x - mean) * (x - mean)).sum();
    BeliefStatistics {
        mean,
        variance,
        entropy: entropy(probs),
    }
}

/// Natural-log Shannon entropy with `0 ln 0 = 0`.
pub fn entropy(probs: &[f64]) -> f64 {
    let h: f64 = probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum();
    h.max(0.0)
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::invalid(format!("{name} must be finite, got {v}")));
    }
    Ok(())
}

/// One-off Bayes update for a single observation `xi = sigma * X + eps`,
/// with `eps ~ N(0, nu^2)`.
pub fn single_shot_update(prior: &Belief, alts: &AlternativeSet, sigma: f64, nu: f64, xi: f64) -> Result<Belief> {
    prior.check_against(alts)?;
    check_finite("xi", xi)?;
    check_finite("sigma", sigma)?;
    if sigma < 0.0 {
        return Err(Error::invalid("sigma must be non-negative"));
    }
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::invalid(format!("noise level nu must be positive, got {nu}")));
    }
    let values = alts.values();
    let two_nu_sq = 2.0 * nu * nu;
    prior.reweighted(|i| {
        let r = xi - sigma * values[i];
        -r * r / two_nu_sq
    })
}

/// Log-likelihood of the observed path summary `(t, xi_t)` under
/// `xi_t = sigma * X * t + W_t`, dropping terms common to all alternatives.
#[inline]
pub(crate) fn path_log_likelihood(x: f64, sigma: f64, t: f64, xi: f64) -> f64 {
    sigma * x * xi - 0.5 * sigma * sigma * x * x * t
}

/// Closed-form posterior after observing `xi_t` up to time `t` with a
/// constant signal rate.
pub fn path_posterior(prior: &Belief, alts: &AlternativeSet, sigma: f64, t: f64, xi_t: f64) -> Result<Belief> {
    prior.check_against(alts)?;
    check_finite("sigma", sigma)?;
    check_finite("xi", xi_t)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("time must be non-negative, got {t}")));
    }
    if t == 0.0 {
        return Ok(prior.clone());
    }
    let values = alts.values();
    prior.reweighted(|i| path_log_likelihood(values[i], sigma, t, xi_t))
}

/// Bayes step for an observation increment `d_xi ~ N(sigma * x * dt, dt)`.
pub fn incremental_update(
    belief: &Belief,
    alts: &AlternativeSet,
    sigma_assumed: f64,
    dt: f64,
    d_xi: f64,
) -> Result<Belief> {
    belief.check_against(alts)?;
    check_finite("sigma", sigma_assumed)?;
    check_finite("d_xi", d_xi)?;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid(format!("time step must be positive, got {dt}")));
    }
    let values = alts.values();
    belief.reweighted(|i| path_log_likelihood(values[i], sigma_assumed, dt, d_xi))
}

/// Outcome of one Euler step of the Kushner equation.
#[derive(Debug, Clone, PartialEq)]
pub struct KushnerStep {
    pub belief: Belief,
    /// Number of components that went negative and were clamped to zero.
    pub clamped: usize,
}

/// Euler step of `d pi_i = sigma pi_i (x_i - xbar)(d xi - sigma xbar dt)`.
pub fn kushner_step(belief: &Belief, alts: &AlternativeSet, sigma: f64, dt: f64, d_xi: f64) -> Result<KushnerStep> {
    belief.check_against(alts)?;
    check_finite("sigma", sigma)?;
    check_finite("d_xi", d_xi)?;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid(format!("time step must be positive, got {dt}")));
    }
    let mut probs = belief.probs().to_vec();
    let clamped = kushner_step_in_place(&mut probs, alts.values(), sigma, dt, d_xi);
    Ok(KushnerStep {
        belief: Belief { probs },
        clamped,
    })
}

pub(crate) fn kushner_step_in_place(probs: &mut [f64], values: &[f64], sigma: f64, dt: f64, d_xi: f64) -> usize {
    let mean: f64 = probs.iter().zip(values).map(|(p, x)| p * x).sum();
    let innovation = d_xi - sigma * mean * dt;
    let mut clamped = 0;
    for (p, x) in probs.iter_mut().zip(values) {
        *p += sigma * *p * (x - mean) * innovation;
        if *p < 0.0 {
            *p = 0.0;
            clamped += 1;
        }
    }
    let total: f64 = probs.iter().sum();
    for p in probs.iter_mut() {
        *p /= total;
    }
    clamped
}

/// Order-of-magnitude time for the variance of the belief to halve:
/// `1 / (sigma^2 * variance)`.
pub fn halving_timescale(sigma: f64, variance: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(Error::invalid(format!("variance must be positive, got {variance}")));
    }
    Ok(1.0 / (sigma * sigma * variance))
}

/// Running exact filter for a finite-valued signal seen through Brownian noise.
///
/// Tracks the sufficient statistics `sum sigma_k d xi_k` and
/// `sum sigma_k^2 dt_k`; for a constant rate this is `path_posterior`, and in
/// general it equals composing `incremental_update` over the same steps.
#[derive(Debug, Clone)]
pub struct ExactFilter {
    log_prior: Vec<f64>,
    values: Vec<f64>,
    drive: f64,
    energy: f64,
    scratch: Vec<f64>,
    probs: Vec<f64>,
}

impl ExactFilter {
    pub fn new(prior: &Belief, alts: &AlternativeSet) -> Result<Self> {
        prior.check_against(alts)?;
        let log_prior = prior
            .probs()
            .iter()
            .map(|&p| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY })
            .collect();
        Ok(Self {
            log_prior,
            values: alts.values().to_vec(),
            drive: 0.0,
            energy: 0.0,
            scratch: vec![0.0; prior.len()],
            probs: prior.probs().to_vec(),
        })
    }

    pub fn step(&mut self, sigma: f64, dt: f64, d_xi: f64) {
        self.drive += sigma * d_xi;
        self.energy += sigma * sigma * dt;
        for ((s, lp), x) in self.scratch.iter_mut().zip(&self.log_prior).zip(&self.values) {
            *s = lp + x * self.drive - 0.5 * x * x * self.energy;
        }
        // At least one prior weight is positive, so normalization cannot fail.
        normalize_log_weights(&self.scratch, &mut self.probs).expect("finite log weight");
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn belief(&self) -> Belief {
        Belief {
            probs: self.probs.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary_prior() -> Belief {
        Belief::binary(0.5).unwrap()
    }

    #[test]
    fn worked_single_shot_example() {
        let post = single_shot_update(&binary_prior(), &AlternativeSet::binary(), 1.0, 0.2, 0.73).unwrap();
        assert!((post.probs()[0] - 0.0032).abs() < 5e-4, "{:?}", post);
        let closed = 0.5 / (0.5 + 0.5 * ((0.73 - 0.5) / 0.04f64).exp());
        assert!((post.probs()[0] - closed).abs() < 1e-15);
    }

    #[test]
    fn deceived_single_shot_example() {
        let post = single_shot_update(&binary_prior(), &AlternativeSet::binary(), 1.0, 0.2, 0.637).unwrap();
        assert!((post.probs()[0] - 0.032).abs() < 5e-3, "{:?}", post);
    }

    #[test]
    fn single_shot_fixed_points() {
        let alts = AlternativeSet::binary();
        let sure = Belief::degenerate(2, 0).unwrap();
        assert_eq!(single_shot_update(&sure, &alts, 1.0, 0.2, 3.7).unwrap(), sure);
        for nu in [0.01, 0.2, 5.0] {
            let post = single_shot_update(&binary_prior(), &alts, 1.0, nu, 0.5).unwrap();
            assert_eq!(post.probs(), &[0.5, 0.5]);
        }
    }

    #[test]
    fn single_shot_rejects_bad_parameters() {
        let alts = AlternativeSet::binary();
        assert!(single_shot_update(&binary_prior(), &alts, 1.0, 0.0, 0.5).is_err());
        assert!(single_shot_update(&binary_prior(), &alts, 1.0, -1.0, 0.5).is_err());
        assert!(single_shot_update(&binary_prior(), &alts, 1.0, 0.2, f64::NAN).is_err());
        assert!(single_shot_update(&binary_prior(), &alts, 1.0, 0.2, f64::INFINITY).is_err());
    }

    #[test]
    fn path_posterior_closed_form() {
        let post = path_posterior(&binary_prior(), &AlternativeSet::binary(), 1.0, 1.0, 0.73).unwrap();
        let expected = 1.0 / (1.0 + (-0.23f64).exp());
        assert!((post.probs()[1] - expected).abs() < 1e-15);
        assert!((post.probs()[1] - 0.5572).abs() < 1e-4);
    }

    #[test]
    fn path_posterior_at_time_zero_is_prior() {
        let prior = Belief::new(vec![0.2, 0.3, 0.5]).unwrap();
        let alts = AlternativeSet::integers(3).unwrap();
        assert_eq!(path_posterior(&prior, &alts, 2.0, 0.0, 17.0).unwrap(), prior);
        let tiny = path_posterior(&prior, &alts, 2.0, 1e-300, 1e-300).unwrap();
        for (a, b) in tiny.probs().iter().zip(prior.probs()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(path_posterior(&prior, &alts, 2.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn path_posterior_survives_huge_exponents() {
        let prior = Belief::new(vec![0.01, 0.96, 0.01, 0.01, 0.01]).unwrap();
        let alts = AlternativeSet::integers(5).unwrap();
        // sigma = 2.2 over 200 years: naive exponents reach ~1e5.
        let post = path_posterior(&prior, &alts, 2.2, 200.0, 2.2 * 4.0 * 200.0).unwrap();
        assert!(post.probs().iter().all(|p| p.is_finite()));
        assert!(post.probs()[3] > 0.999_999);
    }

    #[test]
    fn incremental_trivial_cases() {
        let alts = AlternativeSet::binary();
        let sure = Belief::degenerate(2, 0).unwrap();
        assert_eq!(incremental_update(&sure, &alts, 1.0, 0.01, 0.4).unwrap(), sure);
        let b = Belief::binary(0.3).unwrap();
        let same = incremental_update(&b, &alts, 0.0, 0.01, 123.0).unwrap();
        assert_eq!(same, b);
        assert!(incremental_update(&b, &alts, 1.0, 0.0, 0.1).is_err());
        assert!(incremental_update(&b, &alts, 1.0, -0.1, 0.1).is_err());
    }

    #[test]
    fn hundred_increments_match_closed_form() {
        let alts = AlternativeSet::binary();
        let mut b = binary_prior();
        let increments: Vec<f64> = (0..100).map(|k| 0.0073 + 0.01 * ((k as f64) * 0.7).sin()).collect();
        let total: f64 = increments.iter().sum();
        for d in &increments {
            b = incremental_update(&b, &alts, 1.0, 0.01, *d).unwrap();
        }
        let direct = path_posterior(&binary_prior(), &alts, 1.0, 1.0, total).unwrap();
        assert!((b.probs()[1] - direct.probs()[1]).abs() < 1e-10);
    }

    #[test]
    fn kushner_step_examples() {
        let alts = AlternativeSet::binary();
        let b = binary_prior();
        let step = kushner_step(&b, &alts, 1.0, 0.01, 0.02).unwrap();
        assert!((step.belief.probs()[1] - 0.50375).abs() < 1e-15);
        assert_eq!(step.clamped, 0);

        let sure = Belief::degenerate(2, 1).unwrap();
        assert_eq!(kushner_step(&sure, &alts, 1.0, 0.01, -5.0).unwrap().belief, sure);

        // zero innovation: d_xi = sigma * mean * dt
        let b = Belief::binary(0.3).unwrap();
        let step = kushner_step(&b, &alts, 2.0, 0.01, 2.0 * 0.3 * 0.01).unwrap();
        for (a, e) in step.belief.probs().iter().zip(b.probs()) {
            assert!((a - e).abs() < 1e-15);
        }
    }

    #[test]
    fn kushner_step_clamps_overshoot() {
        let alts = AlternativeSet::binary();
        let b = Belief::binary(0.5).unwrap();
        let step = kushner_step(&b, &alts, 1.0, 0.01, -30.0).unwrap();
        assert_eq!(step.clamped, 1);
        assert_eq!(step.belief.probs(), &[1.0, 0.0]);
    }

    #[test]
    fn statistics_examples() {
        let bin = AlternativeSet::binary();
        let s = belief_statistics(&Belief::degenerate(2, 0).unwrap(), &bin).unwrap();
        assert_eq!((s.mean, s.variance, s.entropy), (0.0, 0.0, 0.0));
        let s = belief_statistics(&binary_prior(), &bin).unwrap();
        assert_eq!(s.mean, 0.5);
        assert_eq!(s.variance, 0.25);
        assert!((s.entropy - 2f64.ln()).abs() < 1e-15);
        let tri = AlternativeSet::integers(3).unwrap();
        let s = belief_statistics(&Belief::new(vec![0.45, 0.10, 0.45]).unwrap(), &tri).unwrap();
        assert!((s.mean - 2.0).abs() < 1e-15);
        assert!((s.variance - 0.9).abs() < 1e-15);
    }

    #[test]
    fn halving_timescale_examples() {
        let tight = belief_statistics(&Belief::binary(0.01).unwrap(), &AlternativeSet::binary())
            .unwrap()
            .variance;
        assert!((tight - 0.0099).abs() < 1e-15);
        let t = halving_timescale(1.0, tight).unwrap();
        assert!((t - 101.0101).abs() < 1e-3);
        let ratio = halving_timescale(1.0, 0.3).unwrap() / halving_timescale(2.0, 0.3).unwrap();
        assert!((ratio - 4.0).abs() < 1e-12);
        let ratio = halving_timescale(0.2, 0.3).unwrap() / halving_timescale(2.2, 0.3).unwrap();
        assert!((ratio - 121.0).abs() < 1e-9);
        assert!(halving_timescale(0.0, 1.0).is_err());
        assert!(halving_timescale(1.0, 0.0).is_err());
        assert!(halving_timescale(-1.0, 1.0).is_err());
    }

    #[test]
    fn belief_validation() {
        assert!(Belief::new(vec![0.5]).is_err());
        assert!(Belief::new(vec![0.5, 0.6]).is_err());
        assert!(Belief::new(vec![-0.1, 1.1]).is_err());
        assert!(Belief::new(vec![f64::NAN, 1.0]).is_err());
        assert!(AlternativeSet::new(vec![1.0, 1.0]).is_err());
        assert!(AlternativeSet::new(vec![1.0]).is_err());
        assert!(AlternativeSet::with_names(vec![0.0, 1.0], vec!["a".into()]).is_err());
        let b: Belief = serde_json::from_str("[0.25, 0.75]").unwrap();
        assert_eq!(b.probs(), &[0.25, 0.75]);
        assert!(serde_json::from_str::<Belief>("[0.25, 0.7]").is_err());
    }

    #[test]
    fn exact_filter_matches_closed_form() {
        let alts = AlternativeSet::integers(3).unwrap();
        let prior = Belief::new(vec![0.45, 0.1, 0.45]).unwrap();
        let mut f = ExactFilter::new(&prior, &alts).unwrap();
        let mut xi = 0.0;
        for k in 0..400 {
            let d = 0.02 + 0.05 * ((k as f64) * 1.3).cos();
            xi += d;
            f.step(2.0, 0.0025, d);
        }
        let direct = path_posterior(&prior, &alts, 2.0, 1.0, xi).unwrap();
        for (a, b) in f.probs().iter().zip(direct.probs()) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
