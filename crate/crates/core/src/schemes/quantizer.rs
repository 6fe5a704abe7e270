//! Deterministic multi-level quantization of `X` with a tuned output entropy.

use serde::{Deserialize, Serialize};

use crate::info::{binary_input_mi, entropy, gaussian_q, Label, MixtureModel};
use crate::point::{Params, Scheme, TradeoffPoint};
use crate::quad::bisect;

/// Distance from an outer threshold to the representative of its edge bin.
const EDGE_OFFSET: f64 = 2.0;

/// `⌈e^R⌉`, snapping to the integer when `e^R` is one up to rounding.
pub fn det_levels(r: f64) -> usize {
    let e = r.max(0.0).exp();
    let near = e.round();
    if (e - near).abs() <= 1e-9 * near {
        near as usize
    } else {
        e.ceil() as usize
    }
}

/// Entropy of `(1/L - Δ, 1/L + Δ/(L-1), …)`.
fn shaped_entropy(levels: usize, delta: f64) -> f64 {
    entropy(&target_masses_for(levels, delta))
}

fn target_masses_for(levels: usize, delta: f64) -> Vec<f64> {
    if levels == 1 {
        return vec![1.0];
    }
    let l = levels as f64;
    let mut m = vec![1.0 / l + delta / (l - 1.0); levels];
    m[0] = 1.0 / l - delta;
    m
}

/// Shift `Δ ∈ [0, 1/L)` making the shaped mass vector's entropy equal `R`.
pub fn solve_delta(r: f64) -> f64 {
    let levels = det_levels(r);
    if levels <= 1 || (r - (levels as f64).ln()).abs() <= 1e-12 {
        return 0.0;
    }
    let l = levels as f64;
    // entropy falls from ln L at Δ = 0 to ln(L-1) at Δ = 1/L
    bisect(|d| shaped_entropy(levels, d) - r, 0.0, 1.0 / l, 1e-16)
}

/// Target bin masses at budget `R`.
pub fn target_masses(r: f64) -> Vec<f64> {
    target_masses_for(det_levels(r), solve_delta(r))
}

/// Thresholds `q_1 < … < q_{L-1}` and representative levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantizer {
    pub thresholds: Vec<f64>,
    pub levels: Vec<f64>,
    pub delta: f64,
}

impl Quantizer {
    /// Builds the quantizer from ordered thresholds; representatives are interior
    /// midpoints and threshold ∓ 2 on the edge bins.
    pub fn from_thresholds(thresholds: Vec<f64>, delta: f64) -> Self {
        let levels = match thresholds.len() {
            0 => vec![0.0],
            k => {
                let mut v = Vec::with_capacity(k + 1);
                v.push(thresholds[0] - EDGE_OFFSET);
                v.extend(thresholds.windows(2).map(|w| 0.5 * (w[0] + w[1])));
                v.push(thresholds[k - 1] + EDGE_OFFSET);
                v
            }
        };
        Quantizer {
            thresholds,
            levels,
            delta,
        }
    }

    pub fn level_count(&self) -> usize {
        self.thresholds.len() + 1
    }

    /// Bin index of `x`; bins are closed on the left.
    pub fn bin(&self, x: f64) -> usize {
        self.thresholds.partition_point(|q| *q <= x)
    }

    /// `P(T = j | Y = y) = Q(q_{j-1} - βy) - Q(q_j - βy)`.
    pub fn bin_probs(&self, model: &MixtureModel, y: Label) -> Vec<f64> {
        let shift = model.beta() * y.sign();
        let upper_tail = |q: f64| gaussian_q(q - shift);
        let mut out = Vec::with_capacity(self.level_count());
        let mut prev = 1.0;
        for &q in &self.thresholds {
            let tail = upper_tail(q);
            out.push((prev - tail).max(0.0));
            prev = tail;
        }
        out.push(prev.max(0.0));
        out
    }

    /// Mixture mass of each bin.
    pub fn masses(&self, model: &MixtureModel) -> Vec<f64> {
        let neg = self.bin_probs(model, Label::Neg);
        let pos = self.bin_probs(model, Label::Pos);
        neg.iter().zip(&pos).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    /// Threshold separating bins estimated as `-1` from those estimated as `+1`.
    ///
    /// Bin signs follow their centers with the edge bins at `∓∞`, so the first
    /// bin always reads `-1` and the last `+1`. `None` for a single bin.
    pub fn sign_boundary(&self) -> Option<f64> {
        let k = self.thresholds.len();
        if k == 0 {
            return None;
        }
        let negative_interior = self
            .thresholds
            .windows(2)
            .take_while(|w| 0.5 * (w[0] + w[1]) < 0.0)
            .count();
        Some(self.thresholds[negative_interior])
    }
}

/// Quantizer whose bins carry the shaped target masses under the mixture.
pub fn build_quantizer(r: f64, model: &MixtureModel) -> Quantizer {
    let levels = det_levels(r);
    let delta = solve_delta(r);
    let masses = target_masses_for(levels, delta);
    let reach = model.beta() + 40.0;
    let mut cumulative = 0.0;
    let mut thresholds = Vec::with_capacity(levels.saturating_sub(1));
    for m in &masses[..levels - 1] {
        cumulative += m;
        let target = cumulative;
        thresholds.push(bisect(|x| model.cdf(x) - target, -reach, reach, 1e-13));
    }
    Quantizer::from_thresholds(thresholds, delta)
}

/// Exact `(H(T), I(Y;T))` of the quantizer at budget `R`.
pub fn i2(r: f64, model: &MixtureModel) -> TradeoffPoint {
    let quantizer = build_quantizer(r, model);
    quantizer_point(&quantizer, model)
}

pub(crate) fn quantizer_point(quantizer: &Quantizer, model: &MixtureModel) -> TradeoffPoint {
    let neg = quantizer.bin_probs(model, Label::Neg);
    let pos = quantizer.bin_probs(model, Label::Pos);
    let masses: Vec<f64> = neg.iter().zip(&pos).map(|(a, b)| 0.5 * (a + b)).collect();
    TradeoffPoint::new(
        entropy(&masses),
        binary_input_mi(&neg, &pos),
        Scheme::DetQuant,
        Params::DetQuant {
            levels: quantizer.level_count(),
            delta: quantizer.delta,
        },
    )
}
