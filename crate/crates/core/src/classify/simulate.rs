//! Monte-Carlo oracle for the estimators' error.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::ErrorPoint;
use crate::error::{Error, Result};
use crate::info::Label;
use crate::point::Params;
use crate::rng::stream;
use crate::schemes::{ChannelKind, ScalarChannel};

/// Fixed shard count; the estimate does not depend on the worker count.
pub const MC_SHARDS: u64 = 16;

fn shard_errors(channel: &ScalarChannel, n: u64, seed: u64, shard: u64) -> u64 {
    let mut rng = stream(seed, shard);
    let beta = channel.model.beta();
    let mut errors = 0;
    for _ in 0..n {
        let y = if rng.random::<bool>() { Label::Pos } else { Label::Neg };
        let z: f64 = rng.sample(StandardNormal);
        let x = beta * y.sign() + z;
        let t = channel.sample(x, &mut rng);
        if channel.estimate(t) != y {
            errors += 1;
        }
    }
    errors
}

/// Empirical `Pr(Ŷ ≠ Y)` over `n` draws with `stderr = √(e(1-e)/n)`.
pub fn mc_error(channel: &ScalarChannel, n: usize, seed: u64) -> Result<ErrorPoint> {
    if n < 1000 {
        return Err(Error::invalid(format!("mc samples must be at least 1000, got {n}")));
    }
    let n = n as u64;
    let errors: u64 = (0..MC_SHARDS)
        .into_par_iter()
        .map(|k| {
            let share = n / MC_SHARDS + u64::from(k < n % MC_SHARDS);
            shard_errors(channel, share, seed, k)
        })
        .sum();
    let e = errors as f64 / n as f64;
    let params = match &channel.kind {
        ChannelKind::TwoLevel { q } => Params::TwoLevel {
            q: *q,
            p: crate::schemes::miss_detection_p(&channel.model),
        },
        ChannelKind::Quantizer(quant) => Params::DetQuant {
            levels: quant.level_count(),
            delta: quant.delta,
        },
        ChannelKind::Soft(s) => Params::Soft { alpha: s.alpha },
    };
    Ok(ErrorPoint {
        rate: channel.rate(),
        error: e,
        scheme: channel.scheme(),
        params,
        stderr: Some((e * (1.0 - e) / n as f64).sqrt()),
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::LN_2;

    use super::*;
    use crate::classify::{err_det_quant, err_soft_at, err_two_level};
    use crate::info::{nats, MixtureModel};
    use crate::schemes::{build_quantizer, soft_best, solve_q};

    fn model(b: f64) -> MixtureModel {
        MixtureModel::new(b).unwrap()
    }

    fn agrees(mc: &ErrorPoint, closed: f64) -> bool {
        (mc.error - closed).abs() <= 3.0 * mc.stderr.unwrap()
    }

    #[test]
    fn chance_flip_is_a_coin() {
        let ch = ScalarChannel::two_level(model(1.0), 0.5);
        assert!(agrees(&mc_error(&ch, 100_000, 3).unwrap(), 0.5));
    }

    #[test]
    fn simulation_matches_closed_forms() {
        let m = model(1.0);
        let ch = ScalarChannel::two_level(m, solve_q(LN_2).unwrap());
        let mc = mc_error(&ch, 20_000, 11).unwrap();
        assert!(agrees(&mc, err_two_level(LN_2, &m).unwrap().error), "{mc:?}");

        let r = nats(1.6);
        let ch = ScalarChannel::quantizer(m, build_quantizer(r, &m));
        let mc = mc_error(&ch, 20_000, 12).unwrap();
        assert!(agrees(&mc, err_det_quant(r, &m).unwrap().error), "{mc:?}");

        let m = model(2f64.sqrt());
        let r = nats(1.3869);
        let ch = ScalarChannel::soft(m, soft_best(r, &m).unwrap().1);
        let mc = mc_error(&ch, 20_000, 13).unwrap();
        assert!(agrees(&mc, err_soft_at(r, &m).unwrap().error), "{mc:?}");
    }

    #[test]
    fn deterministic_given_seed() {
        let ch = ScalarChannel::two_level(model(0.6), 0.1);
        assert_eq!(mc_error(&ch, 5000, 9).unwrap(), mc_error(&ch, 5000, 9).unwrap());
        assert!(mc_error(&ch, 999, 9).is_err());
    }
}
