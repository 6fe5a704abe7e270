//! Misclassification error of the schemes' fixed estimators, a simulation
//! oracle, and a logistic readout for vector features.

mod closed;
mod logistic;
mod simulate;

use serde::{Deserialize, Serialize};

use crate::point::{Params, Scheme};

pub use closed::{err_det_quant, err_soft, err_soft_at, err_soft_bound, err_two_level, err_unified};
pub use logistic::{eval_logistic, train_logistic, Logistic, LogisticOptions};
pub use simulate::{mc_error, MC_SHARDS};

/// `Pr(Ŷ ≠ Y)` reached at leakage `rate` (nats).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorPoint {
    pub rate: f64,
    pub error: f64,
    pub scheme: Scheme,
    pub params: Params,
    /// Present for simulated points.
    pub stderr: Option<f64>,
}

impl ErrorPoint {
    pub fn new(rate: f64, error: f64, scheme: Scheme, params: Params) -> Self {
        ErrorPoint {
            rate,
            error,
            scheme,
            params,
            stderr: None,
        }
    }

    /// `0 ≤ error ≤ ½ + 3·stderr`.
    pub fn is_plausible(&self) -> bool {
        let slack = 3.0 * self.stderr.unwrap_or(0.0) + 1e-12;
        self.error >= 0.0 && self.error <= 0.5 + slack
    }
}
