//! Closed-form errors of the sign and threshold estimators.

use std::f64::consts::LN_2;

use super::ErrorPoint;
use crate::error::{Error, Result};
use crate::info::{entropy, gaussian_q, MixtureModel};
use crate::point::{Params, Scheme};
use crate::schemes::{
    alpha_lb1, alpha_lb2, build_quantizer, miss_detection_p, soft_best, soft_rate_exact, soft_sign_error, solve_q,
    unified_channel, Bound, ChannelKind, SoftScheme,
};

/// `(1-p)q + p(1-q)` with `q` solving `ln 2 - H(q) = R`.
pub fn err_two_level(r: f64, model: &MixtureModel) -> Result<ErrorPoint> {
    let q = solve_q(r)?;
    let p = miss_detection_p(model);
    let error = (1.0 - p) * q + p * (1.0 - q);
    Ok(ErrorPoint::new(
        r.min(LN_2),
        error,
        Scheme::TwoLevel,
        Params::TwoLevel { q, p },
    ))
}

/// `½(Q(β - q_s) + Q(β + q_s))` at the sign-boundary threshold `q_s`; chance
/// when the quantizer has a single level.
pub fn err_det_quant(r: f64, model: &MixtureModel) -> Result<ErrorPoint> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::domain("R", r, "[0, inf)"));
    }
    let quant = build_quantizer(r, model);
    let beta = model.beta();
    let error = match quant.sign_boundary() {
        None => 0.5,
        Some(qs) => 0.5 * (gaussian_q(beta - qs) + gaussian_q(beta + qs)),
    };
    let params = Params::DetQuant {
        levels: quant.level_count(),
        delta: quant.delta,
    };
    Ok(ErrorPoint::new(
        entropy(&quant.masses(model)),
        error,
        Scheme::DetQuant,
        params,
    ))
}

/// `P(T ≥ 0 | Y = -1)` for `T = α tanh(βX) + Z`, at its exact leakage.
pub fn err_soft(alpha: f64, model: &MixtureModel) -> Result<ErrorPoint> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::domain("alpha", alpha, "[0, inf)"));
    }
    Ok(ErrorPoint::new(
        soft_rate_exact(alpha, model),
        soft_sign_error(alpha, model),
        Scheme::SoftLb1,
        Params::Soft { alpha },
    ))
}

/// Error of the best soft gain at budget `R`; the rate reported is `R`.
pub fn err_soft_at(r: f64, model: &MixtureModel) -> Result<ErrorPoint> {
    let (point, SoftScheme { alpha, bound }) = soft_best(r, model)?;
    Ok(ErrorPoint::new(
        point.rate,
        soft_sign_error(alpha, model),
        bound.scheme(),
        Params::Soft { alpha },
    ))
}

/// Error of one soft bound's gain at budget `R`; the rate reported is `R`.
pub fn err_soft_bound(r: f64, bound: Bound, model: &MixtureModel) -> Result<ErrorPoint> {
    let alpha = match bound {
        Bound::Lb1 => alpha_lb1(r, model)?,
        Bound::Lb2 => alpha_lb2(r, model)?,
    };
    Ok(ErrorPoint::new(
        r,
        soft_sign_error(alpha, model),
        bound.scheme(),
        Params::Soft { alpha },
    ))
}

/// Error of the channel that wins the relevance comparison at budget `R`.
pub fn err_unified(r: f64, model: &MixtureModel) -> Result<ErrorPoint> {
    let (_, channel) = unified_channel(r, model)?;
    let mut point = match channel.kind {
        ChannelKind::TwoLevel { .. } => err_two_level(r, model)?,
        ChannelKind::Quantizer(_) => err_det_quant(r, model)?,
        ChannelKind::Soft(SoftScheme { alpha, bound }) => {
            ErrorPoint::new(r, soft_sign_error(alpha, model), bound.scheme(), Params::Soft { alpha })
        }
    };
    point.rate = r;
    point.scheme = crate::point::Scheme::Unified;
    Ok(point)
}
