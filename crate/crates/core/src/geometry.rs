//! Square-root geometry of belief states.
//!
//! Mapping `pi_i -> psi_i = sqrt(pi_i)` puts beliefs on the positive orthant
//! of the unit sphere. The spherical distance there is the Bhattacharyya
//! angle, and the drift of Bayesian learning becomes a gradient flow that
//! lowers the variance of the signal.

use std::f64::consts::FRAC_PI_2;

use crate::error::{ensure_dims, Error, Result};
use crate::signal::{AlternativeSet, Belief};

/// Square roots of a belief's probabilities; a unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SqrtState {
    components: Vec<f64>,
}

impl SqrtState {
    pub fn from_belief(belief: &Belief) -> Self {
        Self {
            components: belief.probs().iter().map(|p| p.sqrt()).collect(),
        }
    }

    /// Accepts any non-negative vector with unit norm (within 1e-12).
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::invalid("square-root components must be finite and non-negative"));
        }
        let norm_sq: f64 = components.iter().map(|c| c * c).sum();
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("square-root state has squared norm {norm_sq}")));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn to_belief(&self) -> Result<Belief> {
        Belief::new(self.components.iter().map(|c| c * c).collect())
    }
}

fn affinity(p: &Belief, q: &Belief) -> Result<f64> {
    ensure_dims(p.len(), q.len())?;
    Ok(p.probs().iter().zip(q.probs()).map(|(a, b)| (a * b).sqrt()).sum())
}

/// `acos(sum_i sqrt(p_i q_i))`, in `[0, pi/2]`.
pub fn bhattacharyya_angle(p: &Belief, q: &Belief) -> Result<f64> {
    Ok(affinity(p, q)?.clamp(-1.0, 1.0).acos())
}

/// The Bhattacharyya angle rescaled to `[0, 1]`.
pub fn normalized_separation(p: &Belief, q: &Belief) -> Result<f64> {
    Ok(bhattacharyya_angle(p, q)? / FRAC_PI_2)
}

pub(crate) fn separation_unchecked(p: &[f64], q: &[f64]) -> f64 {
    let bc: f64 = p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum();
    bc.clamp(-1.0, 1.0).acos() / FRAC_PI_2
}

/// Variance of the signal under the belief encoded by `psi`:
/// `V = sum psi^2 x^2 - (sum psi^2 x)^2`.
pub fn sqrt_variance(psi: &[f64], values: &[f64]) -> f64 {
    let m1: f64 = psi.iter().zip(values).map(|(p, x)| p * p * x).sum();
    let m2: f64 = psi.iter().zip(values).map(|(p, x)| p * p * x * x).sum();
    m2 - m1 * m1
}

fn project_tangent(psi: &[f64], v: &mut [f64]) {
    let along: f64 = psi.iter().zip(v.iter()).map(|(p, w)| p * w).sum();
    for (w, p) in v.iter_mut().zip(psi) {
        *w -= along * p;
    }
}

/// Tangential drift of the square-root state under Bayesian learning,
/// together with `-(sigma^2 / 16)` times the spherical gradient of the
/// signal variance. The two vectors coincide.
///
/// The drift is obtained by applying Ito's rule to `psi_i = sqrt(pi_i)` with
/// `pi` following the Kushner equation, which gives
/// `-(sigma^2 / 8) psi_i (x_i - xbar)^2` before projecting onto the tangent
/// space of the sphere. The gradient is the Euclidean gradient of `V`
/// projected the same way.
pub fn sqrt_drift_and_gradient(psi: &SqrtState, alts: &AlternativeSet, sigma: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let psi = psi.components();
    let values = alts.values();
    ensure_dims(values.len(), psi.len())?;
    let mean: f64 = psi.iter().zip(values).map(|(p, x)| p * p * x).sum();
    let s2 = sigma * sigma;

    let mut drift: Vec<f64> = psi
        .iter()
        .zip(values)
        .map(|(p, x)| -s2 / 8.0 * p * (x - mean) * (x - mean))
        .collect();
    project_tangent(psi, &mut drift);

    let mut grad: Vec<f64> = psi
        .iter()
        .zip(values)
        .map(|(p, x)| 2.0 * p * x * x - 4.0 * mean * p * x)
        .collect();
    project_tangent(psi, &mut grad);
    for g in grad.iter_mut() {
        *g *= -s2 / 16.0;
    }
    Ok((drift, grad))
}
