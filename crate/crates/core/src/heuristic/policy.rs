use std::sync::Arc;

use super::{
    Activation, DistanceEvaluator, EvalError, MlpModel, PolicyEvaluator, ProbVector12,
    INPUT_ENCODING,
};
use crate::cube::{encode_onehot, CubeState};

/// Softmax temperature used when none is configured.
pub const DEFAULT_TEMPERATURE: f64 = 0.5;

/// Every action equally likely.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformPolicy;

impl PolicyEvaluator for UniformPolicy {
    fn policy(&self, _s: &CubeState) -> Result<ProbVector12, EvalError> {
        Ok(ProbVector12::uniform())
    }
}

/// Softmax of `-f_d(neighbor) / temperature` over the twelve successors.
///
/// Neighbors outside an exact table's radius count as `max_depth + 1`.
#[derive(Clone)]
pub struct BoltzmannPolicy {
    distance: Arc<dyn DistanceEvaluator>,
    temperature: f64,
}

impl BoltzmannPolicy {
    pub fn new(distance: Arc<dyn DistanceEvaluator>, temperature: f64) -> Result<Self, EvalError> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(EvalError::Contract(format!(
                "temperature must be positive and finite, got {temperature}"
            )));
        }
        Ok(Self {
            distance,
            temperature,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }
}

impl PolicyEvaluator for BoltzmannPolicy {
    fn policy(&self, s: &CubeState) -> Result<ProbVector12, EvalError> {
        let mut logits = [0.0; 12];
        for (slot, (_, n)) in logits.iter_mut().zip(s.neighbors()) {
            let d = match self.distance.distance(&n) {
                Ok(d) => d,
                Err(e) => e.fallback_distance().ok_or(e)?,
            };
            *slot = -d / self.temperature;
        }
        Ok(ProbVector12::softmax(logits))
    }
}

/// `f_p(s) = forward(model, onehot(s))`.
#[derive(Clone, Debug)]
pub struct MlpPolicy {
    model: MlpModel,
}

impl MlpPolicy {
    pub fn new(model: MlpModel) -> Result<Self, EvalError> {
        if model.input_encoding() != INPUT_ENCODING {
            return Err(EvalError::Contract(format!(
                "policy model must use {INPUT_ENCODING:?}, got {:?}",
                model.input_encoding()
            )));
        }
        if model.output_width() != 12 {
            return Err(EvalError::Contract(format!(
                "policy model must have 12 outputs, got {}",
                model.output_width()
            )));
        }
        if model.final_activation() != Activation::Softmax {
            return Err(EvalError::Contract(
                "policy model must end in softmax".into(),
            ));
        }
        Ok(Self { model })
    }

    pub fn model(&self) -> &MlpModel {
        &self.model
    }
}

impl PolicyEvaluator for MlpPolicy {
    fn policy(&self, s: &CubeState) -> Result<ProbVector12, EvalError> {
        let out = self
            .model
            .forward(&encode_onehot(s))
            .map_err(|e| EvalError::Contract(e.to_string()))?;
        let arr: [f64; 12] = out.try_into().expect("validated width");
        ProbVector12::new(arr)
    }
}
