//! Shared helpers for the acceptance checks: a small pass/fail reporter and
//! reference formulas written independently of the library.

use std::time::Instant;

/// Collects one verdict per numbered criterion and prints it as it arrives.
#[derive(Debug, Default)]
pub struct Report {
    failed: Vec<u32>,
    count: usize,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs `check`, which returns whether the criterion holds plus a detail line.
    pub fn criterion(&mut self, number: u32, title: &str, check: impl FnOnce() -> (bool, String)) {
        let start = Instant::now();
        let (ok, detail) = check();
        let secs = start.elapsed().as_secs_f64();
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("{verdict} {number:>2} {title}: {detail} [{secs:.2}s]");
        self.count += 1;
        if !ok {
            self.failed.push(number);
        }
    }

    pub fn failed(&self) -> &[u32] {
        &self.failed
    }

    /// Prints the tally and exits non-zero when anything failed.
    pub fn finish(self) {
        println!(
            "acceptance: {} of {} criteria passed",
            self.count - self.failed.len(),
            self.count
        );
        if !self.failed.is_empty() {
            println!("failed criteria: {:?}", self.failed);
            std::process::exit(1);
        }
    }
}

/// Posterior of a two-point signal `{0, 1}` after one observation
/// `xi = X + eps`, `eps ~ N(0, nu^2)`, written as plain Bayes.
pub fn two_point_posterior(p0: f64, nu: f64, xi: f64) -> f64 {
    let density = |x: f64| (-(xi - x).powi(2) / (2.0 * nu * nu)).exp();
    let w0 = p0 * density(0.0);
    let w1 = (1.0 - p0) * density(1.0);
    w0 / (w0 + w1)
}

/// `-(sigma^2 / 16)` times the gradient of `V(psi) = sum psi^2 x^2 - (sum psi^2 x)^2`
/// on the unit sphere: the Euclidean gradient minus its radial part.
pub fn scaled_sphere_gradient(psi: &[f64], x: &[f64], sigma: f64) -> Vec<f64> {
    let mean: f64 = psi.iter().zip(x).map(|(p, v)| p * p * v).sum();
    let euclid: Vec<f64> = psi
        .iter()
        .zip(x)
        .map(|(p, v)| 2.0 * p * v * v - 4.0 * mean * p * v)
        .collect();
    let radial: f64 = psi.iter().zip(&euclid).map(|(p, g)| p * g).sum();
    psi.iter()
        .zip(&euclid)
        .map(|(p, g)| -(sigma * sigma / 16.0) * (g - radial * p))
        .collect()
}

/// Posterior on `X = 1` for the binary signal after observing `xi_t` at time `t`.
pub fn binary_path_posterior(p1: f64, sigma: f64, t: f64, xi: f64) -> f64 {
    let odds = (1.0 - p1) / p1 * (-(sigma * xi - 0.5 * sigma * sigma * t)).exp();
    1.0 / (1.0 + odds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_posterior_is_symmetric() {
        assert!((two_point_posterior(0.5, 0.3, 0.5) - 0.5).abs() < 1e-15);
        let a = two_point_posterior(0.5, 0.3, 0.2);
        let b = two_point_posterior(0.5, 0.3, 0.8);
        assert!((a + b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sphere_gradient_is_tangent() {
        let psi = [0.6, 0.8, 0.0];
        let g = scaled_sphere_gradient(&psi, &[0.0, 1.0, 2.0], 1.0);
        let dot: f64 = psi.iter().zip(&g).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-15);
    }

    #[test]
    fn binary_posterior_at_the_origin_is_the_prior() {
        assert!((binary_path_posterior(0.3, 1.0, 0.0, 0.0) - 0.3).abs() < 1e-15);
    }
}
