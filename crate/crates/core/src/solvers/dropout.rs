//! Single-layer information dropout: `T = f1(X)·η`, `ln η ~ N(0, f2(X)²)`,
//! with `f1(x) = σ(w1 x) + 1` and `f2(x) = σ(w2 x)`.
//!
//! Information terms are evaluated on the gridded joint by binning `ln T`,
//! which makes every grid cell's point exact up to the binning.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::channel::Channel;
use crate::error::{Error, Result};
use crate::info::{discretize, gaussian_q, MixtureModel};
use crate::point::{upper_frontier, Params, Scheme, TradeoffPoint};

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// The parametric channel at one `(w1, w2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DropoutChannel {
    pub w1: f64,
    pub w2: f64,
}

impl DropoutChannel {
    /// `(E[ln T | x], sd[ln T | x])`.
    pub fn log_moments(&self, x: f64) -> (f64, f64) {
        (sigmoid(self.w1 * x).ln_1p(), sigmoid(self.w2 * x))
    }

    pub fn sample<R: Rng + ?Sized>(&self, x: f64, rng: &mut R) -> f64 {
        let (m, s) = self.log_moments(x);
        let z: f64 = rng.sample(StandardNormal);
        (m + s * z).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DropoutOptions {
    pub grid_points: usize,
    pub span: f64,
    /// Number of `ln T` cells; the two outermost are unbounded.
    pub u_bins: usize,
    pub u_lo: f64,
    pub u_hi: f64,
}

impl Default for DropoutOptions {
    fn default() -> Self {
        DropoutOptions {
            grid_points: 200,
            span: 5.0,
            u_bins: 400,
            u_lo: -6.0,
            u_hi: 7.0,
        }
    }
}

/// `lo, lo+step, …, hi` with `hi` included up to rounding.
pub fn weight_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| ((lo + step * k as f64) * 1e9).round() / 1e9).collect()
}

/// Default weight grid `[-10, 10]` in steps of `0.1`.
pub fn default_weight_grid() -> Vec<f64> {
    weight_grid(-10.0, 10.0, 0.1)
}

fn binned_channel(grid: &[f64], ch: &DropoutChannel, options: &DropoutOptions) -> Channel {
    let bins = options.u_bins;
    let step = (options.u_hi - options.u_lo) / bins as f64;
    let mut rows = Vec::with_capacity(grid.len() * bins);
    for &x in grid {
        let (m, s) = ch.log_moments(x);
        let s = s.max(1e-12);
        // upper tails at the interior edges; the outer cells are open
        let mut prev = 1.0;
        for k in 1..bins {
            let edge = options.u_lo + step * k as f64;
            let tail = gaussian_q((edge - m) / s);
            rows.push((prev - tail).max(0.0));
            prev = tail;
        }
        rows.push(prev.max(0.0));
    }
    for row in rows.chunks_exact_mut(bins) {
        let total: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= total);
    }
    Channel::from_flat(rows, bins)
}

/// `(I(X;T), I(Y;T))` of one weight pair.
pub fn info_dropout_point(
    model: &MixtureModel,
    channel: DropoutChannel,
    options: &DropoutOptions,
) -> Result<TradeoffPoint> {
    let joint = discretize(model, options.grid_points, options.span)?;
    Ok(point_on(&joint, channel, options))
}

fn point_on(joint: &crate::info::DiscreteJoint, ch: DropoutChannel, options: &DropoutOptions) -> TradeoffPoint {
    let binned = binned_channel(&joint.x_grid, &ch, options);
    let (rate, relevance) = binned.information(joint);
    TradeoffPoint::new(
        rate,
        relevance.min(rate),
        Scheme::InfoDropout,
        Params::Dropout {
            w1: ch.w1,
            w2: ch.w2,
            optimal: false,
        },
    )
}

/// Brute search over the weight grid.
///
/// Returns the non-dominated points sorted by rate; the point minimizing
/// `I(X;T) - λ I(Y;T)` is flagged `optimal`.
pub fn info_dropout_curve(
    model: &MixtureModel,
    w1_grid: &[f64],
    w2_grid: &[f64],
    lambda: f64,
    options: &DropoutOptions,
) -> Result<Vec<TradeoffPoint>> {
    if w1_grid.is_empty() || w2_grid.is_empty() {
        return Err(Error::invalid("empty dropout weight grid"));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain("lambda", lambda, "(0, inf)"));
    }
    if options.u_bins < 3 || !(options.u_hi > options.u_lo) {
        return Err(Error::invalid("dropout binning needs u_bins >= 3 and u_hi > u_lo"));
    }
    let joint = discretize(model, options.grid_points, options.span)?;
    let pairs: Vec<DropoutChannel> = w1_grid
        .iter()
        .flat_map(|&w1| w2_grid.iter().map(move |&w2| DropoutChannel { w1, w2 }))
        .collect();
    let points: Vec<TradeoffPoint> = pairs.par_iter().map(|ch| point_on(&joint, *ch, options)).collect();
    let optimum = points
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let la = a.1.rate - lambda * a.1.relevance;
            let lb = b.1.rate - lambda * b.1.relevance;
            la.total_cmp(&lb).then(a.0.cmp(&b.0))
        })
        .map(|(i, _)| i)
        .expect("grid is nonempty");
    let mut points = points;
    if let Params::Dropout { optimal, .. } = &mut points[optimum].params {
        *optimal = true;
    }
    let best = points[optimum].clone();
    let mut frontier = upper_frontier(points, 1e-12);
    if !frontier.contains(&best) {
        let at = frontier.partition_point(|p| p.rate < best.rate);
        frontier.insert(at, best);
    }
    Ok(frontier)
}

/// Best frontier point with rate at most `budget`; the zero point when none qualifies.
pub fn best_within(frontier: &[TradeoffPoint], budget: f64) -> Option<&TradeoffPoint> {
    frontier
        .iter()
        .filter(|p| p.rate <= budget)
        .max_by(|a, b| a.relevance.total_cmp(&b.relevance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::{bits, nats};
    use crate::point::interpolate;

    fn coarse() -> DropoutOptions {
        DropoutOptions {
            grid_points: 120,
            u_bins: 200,
            ..DropoutOptions::default()
        }
    }

    #[test]
    fn constant_weights_carry_nothing() {
        let m = MixtureModel::new(1.0).unwrap();
        let p = info_dropout_point(&m, DropoutChannel { w1: 0.0, w2: 0.0 }, &coarse()).unwrap();
        assert!(p.rate < 1e-12 && p.relevance < 1e-12);
    }

    #[test]
    fn frontier_respects_data_processing() {
        let m = MixtureModel::new(1.0).unwrap();
        let g = weight_grid(-10.0, 10.0, 2.0);
        let f = info_dropout_curve(&m, &g, &g, 5.0, &coarse()).unwrap();
        assert!(f.iter().all(|p| p.relevance <= p.rate + 1e-12));
        assert!(f.windows(2).all(|w| w[0].rate <= w[1].rate));
        assert_eq!(
            f.iter()
                .filter(|p| matches!(p.params, Params::Dropout { optimal: true, .. }))
                .count(),
            1
        );
        assert!(info_dropout_curve(&m, &[], &g, 5.0, &coarse()).is_err());
    }

    #[test]
    fn exact_binning_reaches_reference_endpoint() {
        // reference endpoint (1.9567, 0.2856) bits, reached from above
        let m = MixtureModel::new(1.0).unwrap();
        let g = weight_grid(-10.0, 10.0, 1.0);
        let f = info_dropout_curve(&m, &g, &g, 10.0, &coarse()).unwrap();
        let curve: Vec<(f64, f64)> = f.iter().map(|p| (p.rate, p.relevance)).collect();
        let at = bits(interpolate(&curve, nats(1.9567)).unwrap());
        assert!(at >= 0.2856 - 0.05, "{at}");
    }

    #[test]
    fn grids() {
        assert_eq!(default_weight_grid().len(), 201);
        assert_eq!(weight_grid(-1.0, 1.0, 0.5), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }
}
