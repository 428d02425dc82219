/// Probability above which a belief is said to sit near an alternative.
pub const ENTER_REGIME: f64 = 0.8;
/// Probability below which a belief has left that alternative's neighbourhood.
pub const EXIT_REGIME: f64 = 0.6;

/// Hysteresis detector for hops between near-certain states.
///
/// A belief enters the regime of alternative `k` once `pi_k > 0.8` and leaves
/// it once `pi_k < 0.6`. Entering a regime other than the last one visited
/// counts as a switch; returning to the same one does not.
#[derive(Debug, Clone, Default)]
pub struct RegimeDetector {
    current: Option<usize>,
    last: Option<usize>,
    switches: u32,
}

impl RegimeDetector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn observe(&mut self, probs: &[f64]) {
        if let Some(k) = self.current {
            if probs[k] < EXIT_REGIME {
                self.current = None;
            }
        }
        if self.current.is_none() {
            if let Some(k) = probs.iter().position(|&p| p > ENTER_REGIME) {
                if self.last.is_some_and(|l| l != k) {
                    self.switches += 1;
                }
                self.current = Some(k);
                self.last = Some(k);
            }
        }
    }

    pub fn switches(&self) -> u32 {
        self.switches
    }

    pub fn current(&self) -> Option<usize> {
        self.current
    }
}
