//! Sign of `X` passed through a binary symmetric flip.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::info::{binary_entropy, gaussian_q, MixtureModel};
use crate::point::{Params, Scheme, TradeoffPoint};
use crate::quad::bisect;

/// `P(X ≥ 0 | Y = -1) = Q(β)`.
pub fn miss_detection_p(model: &MixtureModel) -> f64 {
    gaussian_q(model.beta())
}

fn check_rate(r: f64) -> Result<()> {
    if !(0.0..=LN_2 + 1e-12).contains(&r) {
        return Err(Error::domain("R", r, "[0, ln 2]"));
    }
    Ok(())
}

/// Flip probability `q ∈ [0, ½]` with `ln 2 - H(q) = R`.
pub fn solve_q(r: f64) -> Result<f64> {
    check_rate(r)?;
    if r >= LN_2 {
        return Ok(0.0);
    }
    if r <= 0.0 {
        return Ok(0.5);
    }
    // H is increasing on [0, ½]
    Ok(bisect(|q| LN_2 - binary_entropy(q).unwrap_or(0.0) - r, 0.0, 0.5, 1e-15))
}

/// Relevance `ln 2 - H(p(1-q) + q(1-p))` at budget `R`.
pub fn i1(r: f64, model: &MixtureModel) -> Result<TradeoffPoint> {
    let q = solve_q(r)?;
    let p = miss_detection_p(model);
    let crossover = p * (1.0 - q) + q * (1.0 - p);
    let relevance = (LN_2 - binary_entropy(crossover)?).max(0.0);
    Ok(TradeoffPoint::new(
        r.min(LN_2),
        relevance,
        Scheme::TwoLevel,
        Params::TwoLevel { q, p },
    ))
}
