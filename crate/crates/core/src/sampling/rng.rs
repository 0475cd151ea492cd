use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

/// Name of the generator behind every [`RandomSource`].
pub const ALGORITHM: &str = "chacha20";

/// Seed plus stream id for a ChaCha20 generator.
///
/// The 64-bit seed is expanded with `seed_from_u64` and the stream id picks
/// one of 2⁶⁴ independent keystreams, so a given `(seed, stream)` pair yields
/// the same sequence on every platform and under any degree of parallelism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomSource {
    pub seed: u64,
    pub stream: u64,
}

impl RandomSource {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Stream id for Monte Carlo trial `trial` of hypothesis `hypothesis`, role
/// `role` (simulation, embedding, tester, ...). Distinct triples give
/// distinct ids for `role < 16` and `trial < 2⁴⁴`.
pub fn trial_stream(hypothesis: u32, trial: u64, role: u8) -> u64 {
    debug_assert!(role < 16 && trial < (1 << 44));
    ((hypothesis as u64) << 48) | (trial << 4) | role as u64
}
