//! Per-coordinate unified schemes and the relevance of their product channel.

use std::f64::consts::LN_2;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::jackknife::{jackknife_mi, MAX_CELLS};
use super::{RateAllocation, VectorModel};
use crate::error::{Error, Result};
use crate::info::{softplus, Label, MixtureModel, PROB_FLOOR};
use crate::point::{Params, Scheme, TradeoffPoint};
use crate::rng::stream;
use crate::schemes::{unified_channel, ScalarChannel};

/// Largest product alphabet summed exactly.
pub const ENUMERATION_CAP: usize = 1_000_000;

const SHARDS: u64 = 16;

/// The unified winner on each coordinate at its own budget.
pub fn coordinate_channels(model: &VectorModel, alloc: &RateAllocation) -> Result<Vec<ScalarChannel>> {
    if alloc.rates().len() != model.dim() {
        return Err(Error::Dimension {
            expected: model.dim(),
            got: alloc.rates().len(),
        });
    }
    model
        .betas()
        .iter()
        .zip(alloc.rates())
        .map(|(b, r)| Ok(unified_channel(*r, &MixtureModel::new(*b)?)?.1))
        .collect()
}

fn enumerate(tables: &[[Vec<f64>; 2]]) -> f64 {
    let sizes: Vec<usize> = tables.iter().map(|t| t[0].len()).collect();
    let mut index = vec![0usize; tables.len()];
    let mut total = 0.0;
    loop {
        let mut neg = 1.0;
        let mut pos = 1.0;
        for (t, k) in tables.iter().zip(&index) {
            neg *= t[0][*k];
            pos *= t[1][*k];
        }
        let mean = 0.5 * (neg + pos);
        if neg > PROB_FLOOR {
            total += 0.5 * neg * (neg / mean).ln();
        }
        if pos > PROB_FLOOR {
            total += 0.5 * pos * (pos / mean).ln();
        }
        // mixed-radix increment
        let mut d = 0;
        loop {
            if d == index.len() {
                return total.clamp(0.0, LN_2);
            }
            index[d] += 1;
            if index[d] < sizes[d] {
                break;
            }
            index[d] = 0;
            d += 1;
        }
    }
}

/// `E[ln 2 - softplus(-y·ℓ(t))]` over simulated `(y, t)`, with its standard error.
fn simulate(channels: &[ScalarChannel], samples: usize, seed: u64) -> (f64, f64) {
    let likelihoods: Vec<_> = channels.iter().map(|c| c.likelihood()).collect();
    let shard = |k: u64| {
        let mut rng = stream(seed, k);
        let share = samples as u64 / SHARDS + u64::from(k < samples as u64 % SHARDS);
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..share {
            let y = if rng.random::<bool>() { Label::Pos } else { Label::Neg };
            let mut llr = 0.0;
            for (ch, lik) in channels.iter().zip(&likelihoods) {
                let z: f64 = rng.sample(StandardNormal);
                let t = ch.sample(ch.model.beta() * y.sign() + z, &mut rng);
                let (neg, pos) = lik(t);
                llr += pos.max(PROB_FLOOR).ln() - neg.max(PROB_FLOOR).ln();
            }
            let v = LN_2 - softplus(-y.sign() * llr);
            sum += v;
            sq += v * v;
        }
        (sum, sq)
    };
    let (sum, sq) = (0..SHARDS)
        .into_par_iter()
        .map(shard)
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples as f64;
    let mean = sum / n;
    let var = (sq / n - mean * mean).max(0.0);
    (mean, (var / n).sqrt())
}

/// `I(Y; T_1..T_d)` of conditionally independent coordinates: exact when every
/// channel is discrete and the alphabet fits the cap, else simulated.
/// Returns `(relevance, exact, stderr)`.
pub fn product_relevance(channels: &[ScalarChannel], mc_samples: usize, seed: u64) -> Result<(f64, bool, f64)> {
    let tables: Option<Vec<[Vec<f64>; 2]>> = channels.iter().map(|c| c.conditionals()).collect();
    if let Some(tables) = tables {
        let cells = tables.iter().try_fold(1usize, |acc, t| {
            acc.checked_mul(t[0].len()).filter(|c| *c <= ENUMERATION_CAP)
        });
        if cells.is_some() {
            return Ok((enumerate(&tables), true, 0.0));
        }
    }
    if mc_samples < 1000 {
        return Err(Error::invalid(format!(
            "mc samples must be at least 1000, got {mc_samples}"
        )));
    }
    let (mean, stderr) = simulate(channels, mc_samples, seed);
    Ok((mean.max(0.0), false, stderr))
}

/// Unified scheme per coordinate; rate is the total budget.
pub fn vector_unified(
    model: &VectorModel,
    alloc: &RateAllocation,
    mc_samples: usize,
    seed: u64,
) -> Result<TradeoffPoint> {
    let channels = coordinate_channels(model, alloc)?;
    let (relevance, exact, stderr) = product_relevance(&channels, mc_samples, seed)?;
    Ok(TradeoffPoint::new(
        alloc.total(),
        relevance,
        Scheme::Vector,
        Params::Vector {
            winners: channels.iter().map(|c| c.scheme()).collect(),
            exact,
            stderr,
        },
    ))
}

/// Outcome of `I(x; t) ≤ Σ I(x_i; t_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainRule {
    pub lhs: f64,
    pub lhs_stderr: f64,
    pub rhs: f64,
    pub bins_per_dim: usize,
    pub holds: bool,
}

/// Bins per dimension keeping about 20 samples per joint cell, in `[2, 10]`.
pub fn chain_rule_bins(samples: usize, dims: usize) -> usize {
    let per_dim = (samples as f64 / 20.0).powf(1.0 / dims as f64).floor() as usize;
    let mut bins = per_dim.clamp(2, 10);
    while (bins as u64).pow(dims as u32) > MAX_CELLS && bins > 2 {
        bins -= 1;
    }
    bins
}

/// Jackknife `I(x; t)` on simulated pairs against the sum of exact coordinate rates.
pub fn chain_rule_check_channels(channels: &[ScalarChannel], samples: usize, seed: u64) -> Result<ChainRule> {
    if channels.is_empty() {
        return Err(Error::invalid("no coordinates"));
    }
    let mut rng = stream(seed, 0);
    let mut xs = Vec::with_capacity(samples);
    let mut ts = Vec::with_capacity(samples);
    for _ in 0..samples {
        let y = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let mut x = Vec::with_capacity(channels.len());
        let mut t = Vec::with_capacity(channels.len());
        for ch in channels {
            let xi = ch.model.beta() * y + rng.sample::<f64, _>(StandardNormal);
            t.push(ch.sample(xi, &mut rng));
            x.push(xi);
        }
        xs.push(x);
        ts.push(t);
    }
    let bins = chain_rule_bins(samples, 2 * channels.len());
    let est = jackknife_mi(&xs, &ts, bins)?;
    let rhs: f64 = channels.iter().map(|c| c.rate()).sum();
    Ok(ChainRule {
        lhs: est.estimate,
        lhs_stderr: est.stderr,
        rhs,
        bins_per_dim: bins,
        holds: est.estimate <= rhs + 3.0 * est.stderr,
    })
}

pub fn chain_rule_check(model: &VectorModel, alloc: &RateAllocation, samples: usize, seed: u64) -> Result<ChainRule> {
    chain_rule_check_channels(&coordinate_channels(model, alloc)?, samples, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::{bits, nats};
    use crate::schemes::{unified, Bound, SoftScheme};
    use crate::vector::equal_allocation;

    fn three() -> VectorModel {
        VectorModel::new(vec![0.9, 1.0, 1.1]).unwrap()
    }

    #[test]
    fn one_coordinate_reduces_to_scalar() {
        for r in [0.3, 0.9, 1.7] {
            let v = vector_unified(
                &VectorModel::new(vec![1.0]).unwrap(),
                &RateAllocation::new(vec![r]).unwrap(),
                40_000,
                1,
            )
            .unwrap();
            let s = unified(r, &MixtureModel::new(1.0).unwrap()).unwrap();
            let tol = match v.params {
                Params::Vector { exact: true, .. } => 1e-9,
                Params::Vector { stderr, .. } => 4.0 * stderr,
                _ => unreachable!(),
            };
            assert!(
                (v.relevance - s.relevance).abs() < tol,
                "R={r}: {} vs {}",
                v.relevance,
                s.relevance
            );
        }
    }

    #[test]
    fn three_dimensional_reference() {
        let p = vector_unified(&three(), &equal_allocation(nats(3.0), 3).unwrap(), 100_000, 7).unwrap();
        assert!((bits(p.relevance) - 0.7151).abs() < 0.02, "{}", bits(p.relevance));
        let p = vector_unified(&three(), &equal_allocation(nats(8.5263), 3).unwrap(), 100_000, 7).unwrap();
        assert!((bits(p.relevance) - 0.8364).abs() < 0.02, "{}", bits(p.relevance));
    }

    #[test]
    fn enumeration_and_simulation_agree() {
        let channels = coordinate_channels(&three(), &equal_allocation(nats(4.5), 3).unwrap()).unwrap();
        assert!(channels.iter().all(|c| c.is_discrete()));
        let (exact, flag, _) = product_relevance(&channels, 1000, 0).unwrap();
        assert!(flag);
        let (mc, se) = simulate(&channels, 50_000, 3);
        assert!((exact - mc).abs() < 3.0 * se, "{exact} vs {mc} ± {se}");
    }

    #[test]
    fn chain_rule_holds() {
        let c = chain_rule_check(&three(), &equal_allocation(3.0, 3).unwrap(), 100_000, 5).unwrap();
        assert!(c.holds, "{c:?}");
        assert!(c.lhs > 0.0);
    }

    #[test]
    fn chain_rule_single_coordinate_is_tight() {
        let c = chain_rule_check(
            &VectorModel::new(vec![1.0]).unwrap(),
            &RateAllocation::new(vec![LN_2]).unwrap(),
            50_000,
            2,
        )
        .unwrap();
        // the sample median only approximates the sign cut, so binning loses a little
        assert!(c.holds && c.rhs - c.lhs < 3.0 * c.lhs_stderr + 5e-3, "{c:?}");
    }

    #[test]
    fn silent_coordinates() {
        let m = MixtureModel::new(1.0).unwrap();
        let quiet = ScalarChannel::soft(
            m,
            SoftScheme {
                alpha: 0.0,
                bound: Bound::Lb1,
            },
        );
        let c = chain_rule_check_channels(&[quiet.clone(), quiet], 50_000, 4).unwrap();
        assert_eq!(c.rhs, 0.0);
        assert!(c.holds && c.lhs.abs() < 3.0 * c.lhs_stderr + 1e-3, "{c:?}");
    }

    #[test]
    fn shape_mismatch() {
        assert!(vector_unified(&three(), &RateAllocation::new(vec![1.0]).unwrap(), 1000, 0).is_err());
    }
}
