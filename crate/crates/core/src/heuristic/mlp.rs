//! Feed-forward network inference with a JSON weight file.
//!
//! ```json
//! {
//!   "input_encoding": "onehot-face54",
//!   "layers": [
//!     { "in": 324, "out": 12, "weights": [...], "bias": [...], "activation": "softmax" }
//!   ]
//! }
//! ```
//!
//! `weights` is the `in x out` matrix flattened row-major, so output `j`
//! of a layer is `bias[j] + sum_i x[i] * weights[i * out + j]`.

use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{DistanceEvaluator, EvalError};
use crate::cube::{encode_onehot, CubeState, ONEHOT_LEN};

/// The only encoding tag accepted in weight files.
pub const INPUT_ENCODING: &str = "onehot-face54";

/// Encoding tag of models built in memory over arbitrary inputs.
const RAW_ENCODING: &str = "raw";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Linear,
    Softmax,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    #[serde(rename = "in")]
    pub input: usize,
    #[serde(rename = "out")]
    pub output: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

#[derive(Debug, Error)]
pub enum MlpError {
    #[error("weight file parse error: {0}")]
    Parse(String),
    #[error("layer {layer}: {field}: {message}")]
    Validation {
        layer: usize,
        field: &'static str,
        message: String,
    },
    #[error("model: {0}")]
    Model(String),
    #[error("dimension mismatch: expected input of width {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    input_encoding: String,
    layers: Vec<Layer>,
}

impl MlpModel {
    /// In-memory model over raw input vectors; structure is validated but
    /// the input width is free.
    pub fn new(layers: Vec<Layer>) -> Result<Self, MlpError> {
        let m = Self {
            input_encoding: RAW_ENCODING.into(),
            layers,
        };
        m.validate_structure()?;
        Ok(m)
    }

    /// Model over the one-hot sticker encoding; first layer must take 324
    /// inputs.
    pub fn onehot(layers: Vec<Layer>) -> Result<Self, MlpError> {
        let m = Self {
            input_encoding: INPUT_ENCODING.into(),
            layers,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn load<R: Read>(source: R) -> Result<Self, MlpError> {
        let m: Self =
            serde_json::from_reader(source).map_err(|e| MlpError::Parse(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn from_json_str(s: &str) -> Result<Self, MlpError> {
        Self::load(s.as_bytes())
    }

    pub fn load_path(path: impl AsRef<std::path::Path>) -> Result<Self, MlpError> {
        let f = std::fs::File::open(path.as_ref())
            .map_err(|e| MlpError::Parse(format!("{}: {e}", path.as_ref().display())))?;
        Self::load(std::io::BufReader::new(f))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn input_encoding(&self) -> &str {
        &self.input_encoding
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn input_width(&self) -> usize {
        self.layers[0].input
    }

    pub fn output_width(&self) -> usize {
        self.layers.last().expect("non-empty").output
    }

    pub fn final_activation(&self) -> Activation {
        self.layers.last().expect("non-empty").activation
    }

    fn validate(&self) -> Result<(), MlpError> {
        if self.input_encoding != INPUT_ENCODING {
            return Err(MlpError::Model(format!(
                "input_encoding must be {INPUT_ENCODING:?}, got {:?}",
                self.input_encoding
            )));
        }
        self.validate_structure()?;
        if self.layers[0].input != ONEHOT_LEN {
            return Err(MlpError::Validation {
                layer: 0,
                field: "in",
                message: format!(
                    "width mismatch: first layer takes {} inputs, encoding has {ONEHOT_LEN}",
                    self.layers[0].input
                ),
            });
        }
        Ok(())
    }

    fn validate_structure(&self) -> Result<(), MlpError> {
        if self.layers.is_empty() {
            return Err(MlpError::Model("no layers".into()));
        }
        let last = self.layers.len() - 1;
        for (i, l) in self.layers.iter().enumerate() {
            let err = |field, message: String| MlpError::Validation {
                layer: i,
                field,
                message,
            };
            if l.input == 0 || l.output == 0 {
                return Err(err("in", "layer widths must be positive".into()));
            }
            if i > 0 && self.layers[i - 1].output != l.input {
                return Err(err(
                    "in",
                    format!(
                        "width mismatch: previous layer outputs {}, this layer takes {}",
                        self.layers[i - 1].output,
                        l.input
                    ),
                ));
            }
            if l.weights.len() != l.input * l.output {
                return Err(err(
                    "weights",
                    format!(
                        "expected {} x {} = {} values, got {}",
                        l.input,
                        l.output,
                        l.input * l.output,
                        l.weights.len()
                    ),
                ));
            }
            if l.bias.len() != l.output {
                return Err(err(
                    "bias",
                    format!("expected {} values, got {}", l.output, l.bias.len()),
                ));
            }
            if l.weights.iter().chain(&l.bias).any(|v| !v.is_finite()) {
                return Err(err("weights", "non-finite value".into()));
            }
            if l.activation == Activation::Softmax && i != last {
                return Err(err(
                    "activation",
                    "softmax is only allowed on the final layer".into(),
                ));
            }
        }
        Ok(())
    }

    /// Affine map then activation, layer by layer.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>, MlpError> {
        if x.len() != self.input_width() {
            return Err(MlpError::Dimension {
                expected: self.input_width(),
                got: x.len(),
            });
        }
        let mut cur = x.to_vec();
        for l in &self.layers {
            let mut next = l.bias.clone();
            for (i, &xi) in cur.iter().enumerate() {
                if xi == 0.0 {
                    continue;
                }
                let row = &l.weights[i * l.output..(i + 1) * l.output];
                for (acc, w) in next.iter_mut().zip(row) {
                    *acc += xi * w;
                }
            }
            match l.activation {
                Activation::Linear => {}
                Activation::Relu => next.iter_mut().for_each(|v| *v = v.max(0.0)),
                Activation::Softmax => softmax_in_place(&mut next),
            }
            cur = next;
        }
        Ok(cur)
    }
}

fn softmax_in_place(v: &mut [f64]) {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for x in v.iter_mut() {
        *x = (*x - max).exp();
        sum += *x;
    }
    for x in v.iter_mut() {
        *x /= sum;
    }
}

/// Scalar distance head: one output, linear or relu, over the one-hot
/// encoding. The solved state is pinned to 0.
#[derive(Clone, Debug)]
pub struct MlpDistance {
    model: MlpModel,
}

impl MlpDistance {
    pub fn new(model: MlpModel) -> Result<Self, EvalError> {
        if model.input_encoding() != INPUT_ENCODING {
            return Err(EvalError::Contract(format!(
                "distance model must use {INPUT_ENCODING:?}"
            )));
        }
        if model.output_width() != 1 || model.final_activation() == Activation::Softmax {
            return Err(EvalError::Contract(
                "distance model needs one linear or relu output".into(),
            ));
        }
        Ok(Self { model })
    }
}

impl DistanceEvaluator for MlpDistance {
    fn distance(&self, s: &CubeState) -> Result<f64, EvalError> {
        if s.is_solved() {
            return Ok(0.0);
        }
        let out = self
            .model
            .forward(&encode_onehot(s))
            .map_err(|e| EvalError::Contract(e.to_string()))?;
        Ok(out[0])
    }
}
