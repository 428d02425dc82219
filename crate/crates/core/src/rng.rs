//! Counter-based random streams.
//!
//! A stream is addressed by `(master seed, stream index)` and positioned by a
//! counter, so any worker can open the stream for path `i` without touching
//! the streams of other paths. The keystream is ChaCha8: the master seed is
//! expanded into the 256-bit key, the stream index selects the ChaCha stream
//! (nonce) and the counter is the block/word position.
//!
//! Gaussian variates come from the ziggurat sampler of `rand_distr`
//! (`StandardNormal`), which keeps no state between draws. The output is
//! therefore a pure function of `(seed, index, counter)`; the crate version is
//! pinned because the bit pattern of each draw depends on its tables.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, StandardNormal};

const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    index: u64,
    rng: ChaCha8Rng,
}

/// Opens stream `index` of `master_seed` at counter zero.
pub fn derive_stream(master_seed: u64, index: u64) -> RandomStream {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    RandomStream {
        seed: master_seed,
        index,
        rng,
    }
}

impl RandomStream {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Position in the keystream, in 32-bit words.
    pub fn counter(&self) -> u128 {
        self.rng.get_word_pos()
    }

    /// Moves the stream to an absolute counter position.
    pub fn seek(&mut self, counter: u128) {
        self.rng.set_word_pos(counter);
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn normal(&mut self, mean: f64, sd: f64) -> f64 {
        mean + sd * self.standard_normal()
    }
}
