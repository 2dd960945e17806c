use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{DistanceEvaluator, EvalError};
use crate::cube::{CubeState, StateKey};

/// `max(0, f_d(s) + e_s)` with `e_s ~ N(0, sigma^2)` fixed per
/// `(seed, state)`, so repeated evaluations agree. The solved state stays 0.
#[derive(Clone)]
pub struct NoisyDistance {
    inner: Arc<dyn DistanceEvaluator>,
    sigma: f64,
    seed: u64,
}

impl NoisyDistance {
    pub fn new(
        inner: Arc<dyn DistanceEvaluator>,
        sigma: f64,
        seed: u64,
    ) -> Result<Self, EvalError> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(EvalError::Contract(format!(
                "sigma must be >= 0, got {sigma}"
            )));
        }
        Ok(Self { inner, sigma, seed })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// The additive error drawn for `key`, before clamping.
    pub fn noise(&self, key: StateKey) -> f64 {
        if self.sigma == 0.0 {
            return 0.0;
        }
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&self.seed.to_le_bytes());
        seed[8..24].copy_from_slice(&key.as_u128().to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(seed);
        let z: f64 = StandardNormal.sample(&mut rng);
        self.sigma * z
    }
}

impl DistanceEvaluator for NoisyDistance {
    fn distance(&self, s: &CubeState) -> Result<f64, EvalError> {
        if s.is_solved() {
            return Ok(0.0);
        }
        let base = self.inner.distance(s)?;
        Ok((base + self.noise(s.canonical_key())).max(0.0))
    }
}
