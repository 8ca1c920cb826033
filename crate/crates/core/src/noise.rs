//! Seeded noise source shared by every stochastic routine in the crate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

/// Identification of the generator, recorded in run metadata so outputs can
/// be reproduced per build.
pub const GENERATOR_ID: &str =
    "ChaCha20Rng::seed_from_u64 (rand_chacha 0.9) + StandardNormal ziggurat (rand_distr 0.5)";

/// Deterministic stream of uniform and standard normal draws.
#[derive(Debug, Clone)]
pub struct Noise {
    rng: ChaCha20Rng,
}

impl Noise {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random::<bool>()
    }

    pub fn rng(&mut self) -> &mut ChaCha20Rng {
        &mut self.rng
    }
}
