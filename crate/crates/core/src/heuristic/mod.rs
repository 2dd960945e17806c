//! Distance (`f_d`) and action-probability (`f_p`) evaluators.
//!
//! The default distance oracle is an exact breadth-first [`DistanceTable`].
//! Policies can be uniform, derived from a distance evaluator by a
//! Boltzmann softmax, or computed by a loaded [`MlpModel`].

mod mlp;
mod noise;
mod policy;
mod table;

use std::fmt;

use thiserror::Error;

use crate::cube::CubeState;

pub use mlp::{Activation, Layer, MlpDistance, MlpError, MlpModel, INPUT_ENCODING};
pub use noise::NoisyDistance;
pub use policy::{BoltzmannPolicy, MlpPolicy, UniformPolicy, DEFAULT_TEMPERATURE};
pub use table::{
    DistanceTable, TableDistance, TableError, DEFAULT_ENTRY_BUDGET, DEFAULT_TABLE_DEPTH,
    TABLE_MAGIC, TABLE_VERSION,
};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    /// The state lies beyond the table radius. Consumers that need a number
    /// use `max_depth + 1`, see [`EvalError::fallback_distance`].
    #[error("state is beyond the distance table radius {max_depth}")]
    OutOfRange { max_depth: u8 },
    #[error("evaluator contract violated: {0}")]
    Contract(String),
}

impl EvalError {
    pub fn fallback_distance(&self) -> Option<f64> {
        match self {
            EvalError::OutOfRange { max_depth } => Some(f64::from(*max_depth) + 1.0),
            EvalError::Contract(_) => None,
        }
    }
}

/// `f_d`: estimated moves from a state to solved. Must return exactly 0 for
/// the solved state.
pub trait DistanceEvaluator: Send + Sync {
    fn distance(&self, s: &CubeState) -> Result<f64, EvalError>;
}

/// `f_p`: a probability for each of the twelve actions, in `Move::ALL` order.
pub trait PolicyEvaluator: Send + Sync {
    fn policy(&self, s: &CubeState) -> Result<ProbVector12, EvalError>;
}

impl<T: DistanceEvaluator + ?Sized> DistanceEvaluator for std::sync::Arc<T> {
    fn distance(&self, s: &CubeState) -> Result<f64, EvalError> {
        (**self).distance(s)
    }
}

impl<T: PolicyEvaluator + ?Sized> PolicyEvaluator for std::sync::Arc<T> {
    fn policy(&self, s: &CubeState) -> Result<ProbVector12, EvalError> {
        (**self).policy(s)
    }
}

/// Tolerance on the sum of a [`ProbVector12`].
pub const PROB_SUM_TOLERANCE: f64 = 1e-9;

/// A distribution over the twelve actions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbVector12([f64; 12]);

impl ProbVector12 {
    pub fn uniform() -> Self {
        Self([1.0 / 12.0; 12])
    }

    /// Checks non-negativity, finiteness and the unit sum.
    pub fn new(values: [f64; 12]) -> Result<Self, EvalError> {
        if values.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(EvalError::Contract(format!(
                "probability vector has negative or non-finite entries: {values:?}"
            )));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOLERANCE {
            return Err(EvalError::Contract(format!(
                "probability vector sums to {sum}"
            )));
        }
        Ok(Self(values))
    }

    /// Normalized softmax of `logits`.
    pub fn softmax(logits: [f64; 12]) -> Self {
        let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut out = logits.map(|l| (l - max).exp());
        let sum: f64 = out.iter().sum();
        for p in &mut out {
            *p /= sum;
        }
        Self(out)
    }

    pub fn as_array(&self) -> &[f64; 12] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Index of the largest entry; the lowest index wins ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for i in 1..12 {
            if self.0[i] > self.0[best] {
                best = i;
            }
        }
        best
    }
}

impl fmt::Display for ProbVector12 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (m, p)) in crate::cube::Move::ALL.iter().zip(&self.0).enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}:{p:.4}")?;
        }
        Ok(())
    }
}
