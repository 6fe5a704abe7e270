//! Closed-form achievable schemes and their pointwise maximum.
//!
//! Every scheme is a scalar channel `X → T` chosen so that `I(X;T)` does not
//! exceed a budget `R`; [`unified`] keeps whichever gives the largest `I(Y;T)`.

mod quantizer;
mod soft;
mod two_level;

use std::f64::consts::LN_2;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub use quantizer::{build_quantizer, det_levels, i2, solve_delta, target_masses, Quantizer};
pub use soft::{
    alpha_lb1, alpha_lb2, f_beta, g_beta, soft_best, soft_rate_exact, soft_relevance, Bound, SoftScheme, T_MARGIN,
    T_TOL,
};
pub use two_level::{i1, miss_detection_p, solve_q};

pub(crate) use quantizer::quantizer_point;
pub(crate) use soft::{soft_density, soft_point, soft_sign_error};

use crate::error::{Error, Result};
use crate::info::{binary_entropy, entropy, Label, MixtureModel};
use crate::point::{Scheme, TradeoffPoint};

/// A concrete scalar channel `X → T` produced by one of the schemes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ChannelKind {
    /// Sign of `X`, flipped with probability `q`; outputs `±1`.
    TwoLevel { q: f64 },
    /// Outputs the representative level of the bin containing `X`.
    Quantizer(Quantizer),
    /// `α·tanh(βX) + N(0, 1)`.
    Soft(SoftScheme),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarChannel {
    pub model: MixtureModel,
    pub kind: ChannelKind,
}

impl ScalarChannel {
    pub fn two_level(model: MixtureModel, q: f64) -> Self {
        ScalarChannel {
            model,
            kind: ChannelKind::TwoLevel { q },
        }
    }

    pub fn quantizer(model: MixtureModel, quantizer: Quantizer) -> Self {
        ScalarChannel {
            model,
            kind: ChannelKind::Quantizer(quantizer),
        }
    }

    pub fn soft(model: MixtureModel, scheme: SoftScheme) -> Self {
        ScalarChannel {
            model,
            kind: ChannelKind::Soft(scheme),
        }
    }

    pub fn scheme(&self) -> Scheme {
        match &self.kind {
            ChannelKind::TwoLevel { .. } => Scheme::TwoLevel,
            ChannelKind::Quantizer(_) => Scheme::DetQuant,
            ChannelKind::Soft(s) => s.bound.scheme(),
        }
    }

    pub fn is_discrete(&self) -> bool {
        !matches!(self.kind, ChannelKind::Soft(_))
    }

    /// Output alphabet size of a discrete channel.
    pub fn alphabet(&self) -> Option<usize> {
        match &self.kind {
            ChannelKind::TwoLevel { .. } => Some(2),
            ChannelKind::Quantizer(q) => Some(q.level_count()),
            ChannelKind::Soft(_) => None,
        }
    }

    /// Draws `T` given `X = x`.
    pub fn sample<R: Rng + ?Sized>(&self, x: f64, rng: &mut R) -> f64 {
        match &self.kind {
            ChannelKind::TwoLevel { q } => {
                let s = Label::from_sign(x).sign();
                if rng.random::<f64>() < *q {
                    -s
                } else {
                    s
                }
            }
            ChannelKind::Quantizer(quant) => quant.levels[quant.bin(x)],
            ChannelKind::Soft(s) => {
                let z: f64 = rng.sample(StandardNormal);
                s.alpha * (self.model.beta() * x).tanh() + z
            }
        }
    }

    /// Output index of a discrete channel's sample value.
    pub fn symbol(&self, t: f64) -> Option<usize> {
        match &self.kind {
            ChannelKind::TwoLevel { .. } => Some(usize::from(t >= 0.0)),
            ChannelKind::Quantizer(q) => Some(q.levels.partition_point(|l| *l < t)),
            ChannelKind::Soft(_) => None,
        }
    }

    /// The scheme's fixed estimator `Ŷ(T)`.
    pub fn estimate(&self, t: f64) -> Label {
        match &self.kind {
            ChannelKind::TwoLevel { .. } | ChannelKind::Soft(_) => Label::from_sign(t),
            ChannelKind::Quantizer(q) => match q.sign_boundary() {
                None => Label::Pos,
                Some(boundary) => {
                    let first_pos = q.bin(boundary);
                    if self.symbol(t).unwrap_or(0) >= first_pos {
                        Label::Pos
                    } else {
                        Label::Neg
                    }
                }
            },
        }
    }

    /// `[P(t | Y=-1), P(t | Y=+1)]` over the output alphabet of a discrete channel.
    pub fn conditionals(&self) -> Option<[Vec<f64>; 2]> {
        match &self.kind {
            ChannelKind::TwoLevel { q } => {
                let p = miss_detection_p(&self.model);
                let correct = (1.0 - p) * (1.0 - q) + p * q;
                Some([vec![correct, 1.0 - correct], vec![1.0 - correct, correct]])
            }
            ChannelKind::Quantizer(quant) => Some([
                quant.bin_probs(&self.model, Label::Neg),
                quant.bin_probs(&self.model, Label::Pos),
            ]),
            ChannelKind::Soft(_) => None,
        }
    }

    /// Likelihood pair `(p(t | -1), p(t | +1))` evaluator.
    pub fn likelihood(&self) -> Box<dyn Fn(f64) -> (f64, f64) + Send + Sync + '_> {
        match &self.kind {
            ChannelKind::Soft(s) => Box::new(soft_density(s.alpha, &self.model)),
            _ => {
                let [neg, pos] = self.conditionals().unwrap_or_default();
                Box::new(move |t| {
                    let k = self.symbol(t).unwrap_or(0);
                    (neg[k], pos[k])
                })
            }
        }
    }

    /// Exact `I(X;T)`; for the soft channel the rate through `tanh(βX)`.
    pub fn rate(&self) -> f64 {
        match &self.kind {
            ChannelKind::TwoLevel { q } => LN_2 - binary_entropy(*q).unwrap_or(LN_2),
            ChannelKind::Quantizer(q) => entropy(&q.masses(&self.model)),
            ChannelKind::Soft(s) => soft_rate_exact(s.alpha, &self.model),
        }
    }
}

fn check_budget(r: f64) -> Result<()> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::domain("R", r, "[0, inf)"));
    }
    Ok(())
}

/// Every applicable scheme at budget `R`, in the order two-level, det-quant, soft-lb1, soft-lb2.
pub fn scheme_channels(r: f64, model: &MixtureModel) -> Result<Vec<(TradeoffPoint, ScalarChannel)>> {
    check_budget(r)?;
    let mut out = Vec::with_capacity(4);
    if r <= LN_2 {
        let p = i1(r, model)?;
        out.push((p, ScalarChannel::two_level(*model, solve_q(r)?)));
    }
    let quant = build_quantizer(r, model);
    out.push((quantizer_point(&quant, model), ScalarChannel::quantizer(*model, quant)));
    let (f, g) = (f_beta(model), g_beta(model));
    let (p, s) = soft_point(r, soft::alpha_lb1_with(r, f, g), Bound::Lb1, model);
    out.push((p, ScalarChannel::soft(*model, s)));
    if r >= LN_2 {
        let (p, s) = soft_point(r, soft::alpha_lb2_with(r, f, g), Bound::Lb2, model);
        out.push((p, ScalarChannel::soft(*model, s)));
    }
    Ok(out)
}

/// Best scheme at budget `R` together with its channel; ties keep the earlier scheme.
pub fn unified_channel(r: f64, model: &MixtureModel) -> Result<(TradeoffPoint, ScalarChannel)> {
    let mut best: Option<(TradeoffPoint, ScalarChannel)> = None;
    for (p, ch) in scheme_channels(r, model)? {
        if best.as_ref().is_none_or(|b| p.relevance > b.0.relevance) {
            best = Some((p, ch));
        }
    }
    let (mut point, channel) = best.ok_or_else(|| Error::Numeric("no applicable scheme".into()))?;
    point.rate = r;
    Ok((point, channel))
}

/// Pointwise maximum of the schemes at budget `R`, tagged with the winner.
pub fn unified(r: f64, model: &MixtureModel) -> Result<TradeoffPoint> {
    unified_channel(r, model).map(|(p, _)| p)
}
