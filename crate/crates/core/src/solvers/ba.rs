//! Blahut–Arimoto iteration for the IB Lagrangian `I(X;T) - λ I(Y;T)`.

use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::channel::Channel;
use crate::error::{Error, Result};
use crate::info::DiscreteJoint;
use crate::point::{upper_frontier, Params, Scheme, TradeoffPoint};
use crate::rng::stream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaOptions {
    pub t_size: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for BaOptions {
    fn default() -> Self {
        BaOptions {
            t_size: 32,
            tol: 1e-9,
            max_iter: 5000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BaSolution {
    pub channel: Channel,
    pub point: TradeoffPoint,
    /// Lagrangian of the initial channel followed by one value per iteration.
    pub trace: Vec<f64>,
}

/// Uniform-Dirichlet rows: normalized unit exponentials.
pub(crate) fn random_rows(n: usize, t_size: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut rows: Vec<f64> = (0..n * t_size).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    for row in rows.chunks_exact_mut(t_size) {
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= s);
    }
    rows
}

/// `(P_T, ln P(Y=-1|t), ln P(Y=+1|t))` of a channel.
pub(crate) fn cluster_statistics(joint: &DiscreteJoint, rows: &[f64], t_size: usize) -> (Vec<f64>, Vec<[f64; 2]>) {
    let mut p_t = vec![0.0; t_size];
    let mut pos = vec![0.0; t_size];
    for ((px, cond), row) in joint.p_x.iter().zip(&joint.p_y_given_x).zip(rows.chunks_exact(t_size)) {
        for t in 0..t_size {
            let w = px * row[t];
            p_t[t] += w;
            pos[t] += w * cond[1];
        }
    }
    let log_cond = p_t
        .iter()
        .zip(&pos)
        .map(|(m, p)| {
            if *m > 0.0 {
                let q = (p / m).clamp(0.0, 1.0);
                [(1.0 - q).ln(), q.ln()]
            } else {
                [0.5f64.ln(); 2]
            }
        })
        .collect();
    (p_t, log_cond)
}

fn check(lambda: f64, t_size: usize) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain("lambda", lambda, "(0, inf)"));
    }
    if t_size < 2 {
        return Err(Error::invalid(format!("t_size = {t_size}, need at least 2")));
    }
    Ok(())
}

/// One seeded Blahut–Arimoto run.
pub fn ba_solve(
    joint: &DiscreteJoint,
    lambda: f64,
    t_size: usize,
    seed: u64,
    tol: f64,
    max_iter: usize,
) -> Result<BaSolution> {
    check(lambda, t_size)?;
    let mut rng = stream(seed, 0);
    let mut rows = random_rows(joint.len(), t_size, &mut rng);
    let lagrangian = |rows: &[f64]| {
        let (rate, rel) = Channel::from_flat(rows.to_vec(), t_size).information(joint);
        (rate - lambda * rel, rate, rel)
    };
    let mut trace = vec![lagrangian(&rows).0];
    let mut converged = false;
    let mut iterations = 0;
    let mut scores = vec![0.0; t_size];
    while iterations < max_iter {
        iterations += 1;
        let (p_t, log_cond) = cluster_statistics(joint, &rows, t_size);
        let log_p_t: Vec<f64> = p_t
            .iter()
            .map(|p| if *p > 0.0 { p.ln() } else { f64::NEG_INFINITY })
            .collect();
        for (cond, row) in joint.p_y_given_x.iter().zip(rows.chunks_exact_mut(t_size)) {
            // ln P_T(t) - λ KL(p(y|x) || p(y|t)), dropping the t-independent part of KL
            let mut best = f64::NEG_INFINITY;
            for t in 0..t_size {
                let s = log_p_t[t] + lambda * (cond[0] * log_cond[t][0] + cond[1] * log_cond[t][1]);
                scores[t] = s;
                best = best.max(s);
            }
            let mut total = 0.0;
            for t in 0..t_size {
                let v = (scores[t] - best).exp();
                row[t] = v;
                total += v;
            }
            row.iter_mut().for_each(|v| *v /= total);
        }
        let value = lagrangian(&rows).0;
        let prev = *trace.last().unwrap_or(&value);
        trace.push(value);
        if (prev - value).abs() < tol {
            converged = true;
            break;
        }
    }
    let channel = Channel::from_flat(rows, t_size);
    let (rate, relevance) = channel.information(joint);
    let mut point = TradeoffPoint::new(
        rate,
        relevance,
        Scheme::BlahutArimoto,
        Params::Lagrange {
            lambda,
            t_size,
            iterations,
        },
    );
    point.converged = converged;
    Ok(BaSolution { channel, point, trace })
}

/// λ sweep; each λ keeps its best restart by relevance, dominated points are dropped.
pub fn ba_curve(
    joint: &DiscreteJoint,
    lambdas: &[f64],
    restarts: usize,
    seed: u64,
    options: &BaOptions,
) -> Result<Vec<TradeoffPoint>> {
    if lambdas.is_empty() {
        return Err(Error::invalid("empty lambda sweep"));
    }
    let restarts = restarts.max(1);
    let runs: Vec<Result<TradeoffPoint>> = (0..lambdas.len() * restarts)
        .into_par_iter()
        .map(|k| {
            let (i, r) = (k / restarts, k % restarts);
            let run_seed = seed.wrapping_add((i as u64) << 32 | r as u64);
            ba_solve(
                joint,
                lambdas[i],
                options.t_size,
                run_seed,
                options.tol,
                options.max_iter,
            )
            .map(|s| s.point)
        })
        .collect();
    let mut best: Vec<TradeoffPoint> = Vec::with_capacity(lambdas.len());
    for chunk in runs.chunks(restarts) {
        let mut winner: Option<TradeoffPoint> = None;
        for run in chunk {
            let p = match run {
                Ok(p) => p.clone(),
                Err(e) => return Err(Error::Numeric(e.to_string())),
            };
            if winner.as_ref().is_none_or(|w| p.relevance > w.relevance) {
                winner = Some(p);
            }
        }
        best.extend(winner);
    }
    Ok(upper_frontier(best, 1e-12))
}

/// Default λ schedule: dense near the first phase transition, coarser beyond.
pub fn default_lambdas() -> Vec<f64> {
    let mut v: Vec<f64> = (10..=30).map(|k| k as f64 / 10.0).collect();
    v.extend((7..=20).map(|k| k as f64 / 2.0));
    v.extend((11..=30).map(|k| k as f64));
    v.extend([35.0, 40.0, 50.0, 60.0, 80.0, 100.0]);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::{bits, discretize, MixtureModel};

    fn joint(b: f64) -> DiscreteJoint {
        discretize(&MixtureModel::new(b).unwrap(), 200, 5.0).unwrap()
    }

    #[test]
    fn tiny_lambda_compresses_everything() {
        let s = ba_solve(&joint(1.0), 1e-6, 8, 1, 1e-12, 500).unwrap();
        assert!(s.point.rate < 1e-6);
        assert!(s.point.relevance < 1e-6);
    }

    #[test]
    fn lagrangian_never_increases() {
        let s = ba_solve(&joint(1.0), 4.0, 16, 9, 1e-12, 300).unwrap();
        for w in s.trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "{w:?}");
        }
        assert!(s.channel.is_row_stochastic(1e-9));
    }

    #[test]
    fn reference_points() {
        // (λ, rate, relevance) in bits from the reference BA tables
        for (b, lambda, r, v) in [(0.6, 4.0, 0.1149, 0.0301), (1.0, 2.0, 0.2115, 0.1113)] {
            let pts = ba_curve(&joint(b), &[lambda], 3, 5, &BaOptions::default()).unwrap();
            let p = &pts[0];
            assert!((bits(p.rate) - r).abs() < 0.02, "{}", bits(p.rate));
            assert!((bits(p.relevance) - v).abs() < 0.02);
        }
    }

    #[test]
    fn single_lambda_single_restart_equals_solve() {
        let j = joint(1.0);
        let o = BaOptions::default();
        let c = ba_curve(&j, &[3.0], 1, 11, &o).unwrap();
        let s = ba_solve(&j, 3.0, o.t_size, 11, o.tol, o.max_iter).unwrap();
        assert_eq!(c, vec![s.point]);
    }

    #[test]
    fn rejects_bad_arguments() {
        let j = joint(1.0);
        assert!(ba_solve(&j, 0.0, 4, 0, 1e-9, 10).is_err());
        assert!(ba_solve(&j, 1.0, 1, 0, 1e-9, 10).is_err());
        assert!(ba_curve(&j, &[], 1, 0, &BaOptions::default()).is_err());
    }
}
