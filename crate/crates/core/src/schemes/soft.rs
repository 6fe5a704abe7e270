//! Soft quantization `T = α·tanh(βX) + N(0, 1)` and its two variational gains.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{gaussian_pdf, neg_xlogx, MixtureModel, PROB_FLOOR};
use crate::point::{Params, Scheme, TradeoffPoint};
use crate::quad::integrate;

/// Absolute tolerance of the `t`-axis integrals.
pub const T_TOL: f64 = 1e-9;
/// Half-width added around `[-α, α]` for the `t`-axis window.
pub const T_MARGIN: f64 = 8.0;

/// Which variational bound produced a gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bound {
    Lb1,
    Lb2,
}

impl Bound {
    pub fn scheme(self) -> Scheme {
        match self {
            Bound::Lb1 => Scheme::SoftLb1,
            Bound::Lb2 => Scheme::SoftLb2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SoftScheme {
    pub alpha: f64,
    pub bound: Bound,
}

/// `E[h(βX)]` for an even `h`; by symmetry only the `Y = +1` component is needed.
fn even_expectation(model: &MixtureModel, h: impl Fn(f64) -> f64) -> f64 {
    let b = model.beta();
    if b == 0.0 {
        return h(0.0);
    }
    // Split at the origin: |tanh| has a kink there.
    let f = |x: f64| gaussian_pdf(x - b) * h(b * x);
    integrate(&f, b - 40.0, 0.0, 0.5, 1e-13) + integrate(&f, 0.0, b + 40.0, 0.5, 1e-13)
}

/// `f(β) = E[tanh²(βX)]`.
pub fn f_beta(model: &MixtureModel) -> f64 {
    even_expectation(model, |u| u.tanh().powi(2))
}

/// `g(β) = E[|tanh(βX)|]`.
pub fn g_beta(model: &MixtureModel) -> f64 {
    even_expectation(model, |u| u.tanh().abs())
}

/// Root of `(α²/2)(1+f) - sqrt(1 + α⁴g²) + 1 = R`.
pub fn alpha_lb1(r: f64, model: &MixtureModel) -> Result<f64> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::domain("R", r, "[0, inf)"));
    }
    Ok(alpha_lb1_with(r, f_beta(model), g_beta(model)))
}

pub(crate) fn alpha_lb1_with(r: f64, f: f64, g: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let a = 1.0 + f;
    let c = r * r - 2.0 * r;
    let disc = (a * a + 4.0 * g * g * c).max(0.0);
    let b = (r - 1.0) * a;
    // Same root, written to avoid cancellation on each side of R = 1.
    let alpha_sq = if r >= 1.0 {
        2.0 * (b + disc.sqrt()) / (a * a - 4.0 * g * g)
    } else {
        2.0 * c / (b - disc.sqrt())
    };
    alpha_sq.max(0.0).sqrt()
}

/// `sqrt((R - ln 2) / (½ + f/2 - g))`, defined for `R ≥ ln 2`.
pub fn alpha_lb2(r: f64, model: &MixtureModel) -> Result<f64> {
    if !(r >= LN_2 - 1e-12 && r.is_finite()) {
        return Err(Error::domain("R", r, "[ln 2, inf)"));
    }
    Ok(alpha_lb2_with(r, f_beta(model), g_beta(model)))
}

pub(crate) fn alpha_lb2_with(r: f64, f: f64, g: f64) -> f64 {
    ((r - LN_2).max(0.0) / (0.5 + 0.5 * f - g)).sqrt()
}

/// `p(t | y)` as mixtures of unit Gaussians centred at `α·tanh(βx_k)`.
///
/// Both conditionals share one x-grid symmetric about the origin, so the
/// computation is itself a Markov chain `Y → X_grid → T` and can never report
/// more than the gridded `I(X;Y)`. Neighbouring centres are at most `H_U`
/// apart, a tenth of the noise standard deviation, where the trapezoid sum of
/// the Gaussian comb is accurate to far below the quadrature tolerance.
struct TDensity {
    means: Vec<f64>,
    w_neg: Vec<f64>,
    w_pos: Vec<f64>,
}

/// Components farther than this from `t` are dropped.
const COMPONENT_REACH: f64 = 10.0;

/// Node step in the warped coordinate.
const H_U: f64 = 0.1;

/// `x` with `x + α·tanh(βx) = u`, by safeguarded Newton from `guess`.
fn invert_warp(u: f64, guess: f64, alpha: f64, b: f64) -> f64 {
    // The map is increasing with slope ≥ 1, so |x - u| ≤ α brackets the root.
    let (mut lo, mut hi) = (u - alpha, u + alpha);
    let mut x = guess.clamp(lo, hi);
    for _ in 0..100 {
        let th = (b * x).tanh();
        let g = x + alpha * th - u;
        if g == 0.0 {
            break;
        }
        if g > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let next = x - g / (1.0 + alpha * b * (1.0 - th * th));
        let next = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= 1e-15 * (1.0 + x.abs()) {
            return next;
        }
        x = next;
    }
    x
}

impl TDensity {
    fn new(alpha: f64, model: &MixtureModel) -> Self {
        let b = model.beta();
        // Uniform in u = x + α·tanh(βx): dx/du ≤ 1 and d(mean)/du < 1, so both
        // the x-nodes and the component means stay within H_U of each other,
        // while the saturated tails of tanh no longer cost extra nodes.
        let x_max = b + 10.0;
        let u_max = x_max + alpha * (b * x_max).tanh();
        let k_max = (u_max / H_U).ceil() as i64;
        let mut means = Vec::with_capacity(2 * k_max as usize + 1);
        let mut w_neg = Vec::with_capacity(means.capacity());
        let mut w_pos = Vec::with_capacity(means.capacity());
        let mut x = -x_max;
        for k in -k_max..=k_max {
            let u = H_U * k as f64;
            x = invert_warp(u, x, alpha, b);
            let th = (b * x).tanh();
            let dx_du = 1.0 / (1.0 + alpha * b * (1.0 - th * th));
            means.push(alpha * th);
            w_neg.push(H_U * dx_du * gaussian_pdf(x + b));
            w_pos.push(H_U * dx_du * gaussian_pdf(x - b));
        }
        let total: f64 = w_pos.iter().sum();
        w_neg.iter_mut().for_each(|w| *w /= total);
        w_pos.iter_mut().for_each(|w| *w /= total);
        TDensity { means, w_neg, w_pos }
    }

    /// `(p(t | -1), p(t | +1))`.
    fn pair(&self, t: f64) -> (f64, f64) {
        let lo = self.means.partition_point(|m| *m < t - COMPONENT_REACH);
        let hi = self.means.partition_point(|m| *m <= t + COMPONENT_REACH);
        let mut neg = 0.0;
        let mut pos = 0.0;
        for k in lo..hi {
            let g = gaussian_pdf(t - self.means[k]);
            neg += self.w_neg[k] * g;
            pos += self.w_pos[k] * g;
        }
        (neg, pos)
    }
}

/// `I(Y;T)` of the soft scheme with gain `α`.
pub fn soft_relevance(alpha: f64, model: &MixtureModel) -> f64 {
    if alpha <= 0.0 || model.beta() == 0.0 {
        return 0.0;
    }
    let dens = TDensity::new(alpha, model);
    let integrand = |t: f64| {
        let (neg, pos) = dens.pair(t);
        let mean = 0.5 * (neg + pos);
        let mut v = 0.0;
        if neg > PROB_FLOOR {
            v += 0.5 * neg * (neg / mean).ln();
        }
        if pos > PROB_FLOOR {
            v += 0.5 * pos * (pos / mean).ln();
        }
        v
    };
    let w = alpha + T_MARGIN;
    integrate(integrand, -w, w, 1.0, T_TOL).max(0.0)
}

/// Exact `I(tanh(βX); T) = h(T) - ½ ln(2πe)`.
pub fn soft_rate_exact(alpha: f64, model: &MixtureModel) -> f64 {
    if alpha <= 0.0 || model.beta() == 0.0 {
        return 0.0;
    }
    let dens = TDensity::new(alpha, model);
    let w = alpha + T_MARGIN;
    let h_t = integrate(
        |t| {
            let (neg, pos) = dens.pair(t);
            neg_xlogx(0.5 * (neg + pos))
        },
        -w,
        w,
        1.0,
        T_TOL,
    );
    (h_t - 0.5 * (2.0 * PI * std::f64::consts::E).ln()).max(0.0)
}

/// `P(T ≥ 0 | Y = -1)`, the sign-estimator error.
pub(crate) fn soft_sign_error(alpha: f64, model: &MixtureModel) -> f64 {
    if alpha <= 0.0 || model.beta() == 0.0 {
        return 0.5;
    }
    let dens = TDensity::new(alpha, model);
    integrate(|t| dens.pair(t).0, 0.0, alpha + T_MARGIN, 1.0, T_TOL).clamp(0.0, 1.0)
}

/// `p(t | y)` of the soft scheme; used by likelihood-ratio estimators.
pub(crate) fn soft_density(alpha: f64, model: &MixtureModel) -> impl Fn(f64) -> (f64, f64) {
    let dens = TDensity::new(alpha, model);
    move |t| dens.pair(t)
}

/// Best soft point at budget `R` over the applicable bounds.
pub fn soft_best(r: f64, model: &MixtureModel) -> Result<(TradeoffPoint, SoftScheme)> {
    let f = f_beta(model);
    let g = g_beta(model);
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::domain("R", r, "[0, inf)"));
    }
    let mut best = soft_point(r, alpha_lb1_with(r, f, g), Bound::Lb1, model);
    if r >= LN_2 {
        let lb2 = soft_point(r, alpha_lb2_with(r, f, g), Bound::Lb2, model);
        if lb2.0.relevance > best.0.relevance {
            best = lb2;
        }
    }
    Ok(best)
}

pub(crate) fn soft_point(r: f64, alpha: f64, bound: Bound, model: &MixtureModel) -> (TradeoffPoint, SoftScheme) {
    (
        TradeoffPoint::new(r, soft_relevance(alpha, model), bound.scheme(), Params::Soft { alpha }),
        SoftScheme { alpha, bound },
    )
}
