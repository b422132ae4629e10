//! Seeded Bernoulli sampling with a 3σ normal envelope.
//!
//! All randomness comes from ChaCha20 keyed by a 64-bit seed. Independent
//! experiments (sweep rows, repeated runs) use distinct stream ids of the
//! same seed, so results do not depend on scheduling.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};

/// Multiplier of the normal half-width `z·√(p̂(1−p̂)/n)`.
pub const CI_SIGMAS: f64 = 3.0;

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Empirical frequency of `n` Bernoulli trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frequency {
    pub successes: u64,
    pub n: u64,
}

impl Frequency {
    pub fn estimate(&self) -> f64 {
        self.successes as f64 / self.n as f64
    }

    pub fn ci_halfwidth(&self) -> f64 {
        let p = self.estimate();
        CI_SIGMAS * (p * (1.0 - p) / self.n as f64).sqrt()
    }

    pub fn covers(&self, p: f64) -> bool {
        (self.estimate() - p).abs() <= self.ci_halfwidth()
    }
}

/// Runs `n` independent trials with success probability `p`.
pub fn bernoulli_frequency<R: Rng + ?Sized>(p: f64, n: u64, rng: &mut R) -> Result<Frequency> {
    if n == 0 {
        return Err(Error::InvalidArgument {
            name: "samples",
            value: 0.0,
            reason: "at least one sample is required",
        });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument {
            name: "probability",
            value: p,
            reason: "must lie in [0, 1]",
        });
    }
    let successes = (0..n).filter(|_| rng.random::<f64>() < p).count() as u64;
    Ok(Frequency { successes, n })
}
