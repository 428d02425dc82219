//! Voters, the linear scoring rule, polls and election win probabilities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_dims, Error, Result};
use crate::rng::{derive_stream, RandomStream};
use crate::signal::{path_posterior, AlternativeSet, Belief};

/// A voter's factor weights. The sign gives the preferred direction on an
/// issue and the magnitude its importance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoterProfile {
    pub weights: Vec<f64>,
}

impl VoterProfile {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("a voter profile needs at least one factor"));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("voter weights must be finite"));
        }
        Ok(Self { weights })
    }
}

/// Current conditional means `m[l][k]` of candidate `l`'s position on factor `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorBeliefs {
    means: Vec<Vec<f64>>,
}

impl FactorBeliefs {
    pub fn new(means: Vec<Vec<f64>>) -> Result<Self> {
        let factors = means.first().map_or(0, Vec::len);
        if means.is_empty() || factors == 0 {
            return Err(Error::invalid(
                "factor beliefs need at least one candidate and one factor",
            ));
        }
        for row in &means {
            ensure_dims(factors, row.len())?;
            if row.iter().any(|m| !m.is_finite()) {
                return Err(Error::invalid("factor means must be finite"));
            }
        }
        Ok(Self { means })
    }

    /// Means taken from per-candidate, per-factor beliefs over `alts`.
    pub fn from_beliefs(beliefs: &[Vec<Belief>], alts: &AlternativeSet) -> Result<Self> {
        let means = beliefs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|b| crate::signal::belief_statistics(b, alts).map(|s| s.mean))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(means)
    }

    pub fn candidates(&self) -> usize {
        self.means.len()
    }

    pub fn factors(&self) -> usize {
        self.means[0].len()
    }

    pub fn means(&self) -> &[Vec<f64>] {
        &self.means
    }
}

/// `S_l = sum_k w_k m[l][k]`.
pub fn candidate_score(profile: &VoterProfile, beliefs: &FactorBeliefs, candidate: usize) -> Result<f64> {
    ensure_dims(beliefs.factors(), profile.weights.len())?;
    let row = beliefs
        .means
        .get(candidate)
        .ok_or_else(|| Error::invalid(format!("no candidate with index {candidate}")))?;
    Ok(profile.weights.iter().zip(row).map(|(w, m)| w * m).sum())
}

/// Index of the highest score; ties go to the lowest index.
pub fn preferred_candidate(scores: &[f64]) -> Result<usize> {
    if scores.is_empty() {
        return Err(Error::invalid("no scores to choose from"));
    }
    let mut best = 0;
    for (i, s) in scores.iter().enumerate().skip(1) {
        if *s > scores[best] {
            best = i;
        }
    }
    Ok(best)
}

fn vote(profile: &VoterProfile, beliefs: &FactorBeliefs) -> Result<usize> {
    let scores = (0..beliefs.candidates())
        .map(|l| candidate_score(profile, beliefs, l))
        .collect::<Result<Vec<_>>>()?;
    preferred_candidate(&scores)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureComponent {
    pub mean: f64,
    pub sd: f64,
    pub weight: f64,
}

/// Per-factor Gaussian mixtures from which voter weights are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightDistributionSpec {
    pub factors: Vec<Vec<MixtureComponent>>,
}

impl WeightDistributionSpec {
    pub fn validate(&self) -> Result<()> {
        if self.factors.is_empty() {
            return Err(Error::invalid("weight distribution needs at least one factor"));
        }
        for (k, mix) in self.factors.iter().enumerate() {
            if mix.is_empty() {
                return Err(Error::invalid(format!("factor {k} has no mixture components")));
            }
            if mix
                .iter()
                .any(|c| !c.mean.is_finite() || !(c.sd >= 0.0) || !c.sd.is_finite() || !(c.weight >= 0.0))
            {
                return Err(Error::invalid(format!("factor {k} has an invalid mixture component")));
            }
            let total: f64 = mix.iter().map(|c| c.weight).sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::invalid(format!("factor {k} mixture weights sum to {total}")));
            }
        }
        Ok(())
    }

    fn draw(&self, stream: &mut RandomStream) -> VoterProfile {
        let weights = self
            .factors
            .iter()
            .map(|mix| {
                let u = stream.uniform();
                let mut acc = 0.0;
                let mut chosen = mix[mix.len() - 1];
                for c in mix {
                    acc += c.weight;
                    if u < acc {
                        chosen = *c;
                        break;
                    }
                }
                chosen.mean + chosen.sd * stream.standard_normal()
            })
            .collect();
        VoterProfile { weights }
    }
}

/// `n` independent voters drawn from `spec`.
pub fn sample_voters(spec: &WeightDistributionSpec, n: usize, stream: &mut RandomStream) -> Result<Vec<VoterProfile>> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::invalid("electorate size must be at least 1"));
    }
    Ok((0..n).map(|_| spec.draw(stream)).collect())
}

/// Share of voters preferring each candidate.
pub fn poll(voters: &[VoterProfile], beliefs: &FactorBeliefs) -> Result<Vec<f64>> {
    if voters.is_empty() {
        return Err(Error::invalid("cannot poll an empty electorate"));
    }
    let mut counts = vec![0usize; beliefs.candidates()];
    for v in voters {
        counts[vote(v, beliefs)?] += 1;
    }
    let n = voters.len() as f64;
    Ok(counts.into_iter().map(|c| c as f64 / n).collect())
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WinEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

/// Probability that the candidate polling at `support` today is ahead after
/// `tau` years of information at rate `sigma`.
///
/// Support is read as the shared posterior on a single binary factor. Each
/// path draws the truth from that posterior, observes `xi_tau` and applies the
/// exact filter; a posterior of exactly one half counts as half a win. Path
/// `i` uses stream `i` of `seed`, and the wins are tallied in half-units so
/// the result does not depend on how rayon splits the work.
pub fn winning_probability(support: f64, sigma: f64, tau: f64, n_paths: usize, seed: u64) -> Result<WinEstimate> {
    if !(support > 0.0 && support < 1.0) {
        return Err(Error::invalid(format!("support must lie in (0, 1), got {support}")));
    }
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::invalid(format!("sigma must be non-negative, got {sigma}")));
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::invalid(format!("time to election must be positive, got {tau}")));
    }
    if n_paths == 0 {
        return Err(Error::invalid("need at least one path"));
    }
    let alts = AlternativeSet::binary();
    let prior = Belief::binary(support)?;
    let halves: Vec<u64> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut stream = derive_stream(seed, i);
            let truth = if stream.uniform() < support { 1.0 } else { 0.0 };
            let xi = sigma * truth * tau + tau.sqrt() * stream.standard_normal();
            let p = path_posterior(&prior, &alts, sigma, tau, xi)?.probs()[1];
            Ok(if p > 0.5 {
                2
            } else if p == 0.5 {
                1
            } else {
                0
            })
        })
        .collect::<Result<_>>()?;
    let n = n_paths as f64;
    let sum: u64 = halves.iter().sum();
    let sum_sq: u64 = halves.iter().map(|h| h * h).sum();
    let estimate = sum as f64 / (2.0 * n);
    let second = sum_sq as f64 / (4.0 * n);
    let var = if n_paths > 1 {
        ((second - estimate * estimate) * n / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(WinEstimate {
        estimate,
        stderr: (var / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn score_examples() {
        let one = FactorBeliefs::new(vec![vec![0.6], vec![0.4]]).unwrap();
        let v = VoterProfile::new(vec![1.0]).unwrap();
        assert_eq!(candidate_score(&v, &one, 0).unwrap(), 0.6);
        assert_eq!(candidate_score(&v, &one, 1).unwrap(), 0.4);
        let zero = VoterProfile::new(vec![0.0]).unwrap();
        assert_eq!(candidate_score(&zero, &one, 0).unwrap(), 0.0);
        assert_eq!(candidate_score(&zero, &one, 1).unwrap(), 0.0);

        let two = FactorBeliefs::new(vec![vec![0.5, 0.8], vec![0.9, 0.1]]).unwrap();
        let v = VoterProfile::new(vec![2.0, -1.0]).unwrap();
        let a = candidate_score(&v, &two, 0).unwrap();
        let b = candidate_score(&v, &two, 1).unwrap();
        assert!((a - 0.2).abs() < 1e-15 && (b - 1.7).abs() < 1e-15);
        assert_eq!(preferred_candidate(&[a, b]).unwrap(), 1);
        assert!(candidate_score(&VoterProfile::new(vec![1.0]).unwrap(), &two, 0).is_err());
        assert!(candidate_score(&v, &two, 2).is_err());
    }

    #[test]
    fn preference_and_ties() {
        assert_eq!(preferred_candidate(&[0.6, 0.4]).unwrap(), 0);
        assert_eq!(preferred_candidate(&[0.0, 0.0]).unwrap(), 0);
        assert_eq!(preferred_candidate(&[0.2, 1.7]).unwrap(), 1);
        assert!(preferred_candidate(&[]).is_err());
    }

    #[test]
    fn identical_and_opposite_voters() {
        let beliefs = FactorBeliefs::new(vec![vec![0.6], vec![0.4]]).unwrap();
        let same = vec![VoterProfile::new(vec![1.0]).unwrap(); 5];
        assert_eq!(poll(&same, &beliefs).unwrap(), vec![1.0, 0.0]);
        let opposite = vec![
            VoterProfile::new(vec![1.0]).unwrap(),
            VoterProfile::new(vec![-1.0]).unwrap(),
        ];
        assert_eq!(poll(&opposite, &beliefs).unwrap(), vec![0.5, 0.5]);
        assert!(poll(&[], &beliefs).is_err());
    }

    #[test]
    fn spec_validation() {
        let bad = WeightDistributionSpec {
            factors: vec![vec![MixtureComponent {
                mean: 0.0,
                sd: 1.0,
                weight: 0.7,
            }]],
        };
        assert!(bad.validate().is_err());
        let neg = WeightDistributionSpec {
            factors: vec![vec![MixtureComponent {
                mean: 0.0,
                sd: -1.0,
                weight: 1.0,
            }]],
        };
        assert!(neg.validate().is_err());
        assert!(WeightDistributionSpec { factors: vec![] }.validate().is_err());
    }

    #[test]
    fn sigma_zero_never_moves() {
        let w = winning_probability(0.52, 0.0, 1.0, 2000, 3).unwrap();
        assert_eq!(w.estimate, 1.0);
        assert_eq!(w.stderr, 0.0);
        let w = winning_probability(0.48, 0.0, 1.0, 2000, 3).unwrap();
        assert_eq!(w.estimate, 0.0);
    }

    #[test]
    fn win_probability_rejects_bad_inputs() {
        assert!(winning_probability(0.0, 1.0, 1.0, 10, 0).is_err());
        assert!(winning_probability(1.0, 1.0, 1.0, 10, 0).is_err());
        assert!(winning_probability(0.5, 1.0, 0.0, 10, 0).is_err());
        assert!(winning_probability(0.5, -1.0, 1.0, 10, 0).is_err());
        assert!(winning_probability(0.5, 1.0, 1.0, 0, 0).is_err());
    }
}
