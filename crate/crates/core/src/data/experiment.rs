//! Leakage versus error on a projected, whitened digit pair: the unified
//! scheme per coordinate against the information-dropout baseline.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{class_whiten, load_dataset, random_projection, split, DataSource, LabeledDataset};
use crate::classify::{eval_logistic, train_logistic, LogisticOptions};
use crate::error::{Error, Result};
use crate::info::{bits, nats, Label, MixtureModel};
use crate::point::{interpolate, Params, TradeoffPoint};
use crate::rng::stream;
use crate::schemes::{unified_channel, ScalarChannel};
use crate::solvers::{best_within, info_dropout_curve, weight_grid, DropoutChannel, DropoutOptions};
use crate::vector::jackknife_mi;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Unified,
    InfoDropout,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Unified => "unified",
            Method::InfoDropout => "info-dropout",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub classes: (i64, i64),
    pub d0: usize,
    /// Samples kept per class before projection.
    pub sample_cap: usize,
    pub projection_seed: u64,
    pub split_seed: u64,
    pub noise_seed: u64,
    pub train_fraction: f64,
    /// Total leakage budgets in bits, split equally over coordinates.
    pub budgets_bits: Vec<f64>,
    /// Independent channel draws per sample.
    pub replicates: usize,
    /// Jackknife bins per dimension for the leakage estimate.
    pub bins_per_dim: usize,
    /// Step of the dropout weight grid on `[-10, 10]`.
    pub dropout_step: f64,
    /// Leakage (bits) at which the two methods are compared.
    pub compare_at_bits: f64,
    pub logistic: LogisticOptions,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            classes: (7, 9),
            d0: 3,
            sample_cap: 2000,
            projection_seed: 0,
            split_seed: 1,
            noise_seed: 2,
            train_fraction: 0.5,
            budgets_bits: (1..=24).map(|k| 0.25 * k as f64).collect(),
            replicates: 10,
            bins_per_dim: 3,
            dropout_step: 0.5,
            compare_at_bits: 2.0,
            logistic: LogisticOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub method: Method,
    /// Total budget, nats.
    pub budget: f64,
    /// Jackknife `I(x; t)`, nats.
    pub leakage: f64,
    pub leakage_stderr: f64,
    pub error: f64,
    pub error_stderr: f64,
    pub params: Vec<Params>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// Per-coordinate `β_i` estimated on the whitened training side.
    pub betas: Vec<f64>,
    pub train_size: usize,
    pub test_size: usize,
    pub curves: Vec<CurvePoint>,
    /// Errors interpolated at `compare_at_bits` of estimated leakage.
    pub unified_at: f64,
    pub dropout_at: f64,
    /// Error never rises by more than three combined standard errors between budgets.
    pub unified_monotone: bool,
}

impl ExperimentReport {
    pub fn curve(&self, method: Method) -> impl Iterator<Item = &CurvePoint> {
        self.curves.iter().filter(move |p| p.method == method)
    }

    /// Error at the comparison leakage along a curve sorted by estimated leakage.
    pub fn error_at(&self, method: Method, leakage_bits: f64) -> Option<f64> {
        let mut pts: Vec<(f64, f64)> = self.curve(method).map(|p| (bits(p.leakage), p.error)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        interpolate(&pts, leakage_bits)
    }
}

/// A per-coordinate encoder.
enum Encoder {
    Scheme(ScalarChannel),
    Dropout(DropoutChannel),
}

impl Encoder {
    fn sample<R: Rng>(&self, x: f64, rng: &mut R) -> f64 {
        match self {
            Encoder::Scheme(c) => c.sample(x, rng),
            Encoder::Dropout(c) => c.sample(x, rng),
        }
    }
}

/// Sign flips making every class-mean coordinate nonnegative, and `|β_i|`.
fn orient(train: &LabeledDataset) -> (Vec<f64>, Vec<f64>) {
    let d = train.dim();
    let n = train.class_count(Label::Pos) as f64;
    let mut mean = vec![0.0; d];
    for (v, l) in train.vectors.iter().zip(&train.labels) {
        if *l == Label::Pos {
            mean.iter_mut().zip(v).for_each(|(m, x)| *m += x / n);
        }
    }
    let signs = mean.iter().map(|m| if *m < 0.0 { -1.0 } else { 1.0 }).collect();
    (signs, mean.iter().map(|m| m.abs()).collect())
}

fn encode(data: &LabeledDataset, signs: &[f64], encoders: &[Encoder], replicates: usize, seed: u64) -> LabeledDataset {
    let mut rng = stream(seed, 0);
    let mut vectors = Vec::with_capacity(data.len() * replicates);
    let mut labels = Vec::with_capacity(data.len() * replicates);
    for _ in 0..replicates {
        for (v, l) in data.vectors.iter().zip(&data.labels) {
            vectors.push(
                v.iter()
                    .zip(signs)
                    .zip(encoders)
                    .map(|((x, s), e)| e.sample(s * x, &mut rng))
                    .collect(),
            );
            labels.push(*l);
        }
    }
    LabeledDataset { vectors, labels }
}

#[allow(clippy::too_many_arguments)]
fn evaluate(
    method: Method,
    budget: f64,
    encoders: Vec<Encoder>,
    params: Vec<Params>,
    parts: (&LabeledDataset, &LabeledDataset, &LabeledDataset),
    signs: &[f64],
    config: &ExperimentConfig,
    index: u64,
) -> Result<CurvePoint> {
    let (all, train, test) = parts;
    let base = config.noise_seed.wrapping_add(index << 8);
    let t_train = encode(train, signs, &encoders, config.replicates, base);
    let t_test = encode(test, signs, &encoders, config.replicates, base + 1);
    let model = train_logistic(&t_train.vectors, &t_train.labels, &config.logistic)?;
    let error = eval_logistic(&model, &t_test.vectors, &t_test.labels)?;

    let t_all = encode(all, signs, &encoders, config.replicates, base + 2);
    let x_all: Vec<Vec<f64>> = (0..config.replicates)
        .flat_map(|_| all.vectors.iter().cloned())
        .collect();
    let leak = jackknife_mi(&x_all, &t_all.vectors, config.bins_per_dim)?;
    Ok(CurvePoint {
        method,
        budget,
        leakage: leak.estimate.max(0.0),
        leakage_stderr: leak.stderr,
        error,
        error_stderr: (error * (1.0 - error) / test.len() as f64).sqrt(),
        params,
    })
}

fn params_of(p: &TradeoffPoint) -> Params {
    p.params.clone()
}

/// Runs both methods over the budget grid on a loaded dataset.
pub fn run_experiment(data: &LabeledDataset, config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.budgets_bits.is_empty() {
        return Err(Error::invalid("empty budget grid"));
    }
    if config.replicates == 0 {
        return Err(Error::invalid("replicates must be at least 1"));
    }
    let capped = data.cap_per_class(config.sample_cap);
    let projected = random_projection(&capped, config.d0, config.projection_seed)?;
    let whitened = class_whiten(&projected)?;
    let (train, test) = split(&whitened, config.train_fraction, config.split_seed)?;
    let (signs, betas) = orient(&train);
    let models: Vec<MixtureModel> = betas.iter().map(|b| MixtureModel::new(*b)).collect::<Result<_>>()?;

    let grid = weight_grid(-10.0, 10.0, config.dropout_step);
    let frontiers: Vec<Vec<TradeoffPoint>> = models
        .iter()
        .map(|m| info_dropout_curve(m, &grid, &grid, 1.0, &DropoutOptions::default()))
        .collect::<Result<_>>()?;

    let d0 = config.d0 as f64;
    let parts = (&whitened, &train, &test);
    let jobs: Vec<(usize, Method, f64)> = config
        .budgets_bits
        .iter()
        .enumerate()
        .flat_map(|(k, b)| {
            [
                (2 * k, Method::Unified, nats(*b)),
                (2 * k + 1, Method::InfoDropout, nats(*b)),
            ]
        })
        .collect();
    let curves: Vec<CurvePoint> = jobs
        .par_iter()
        .map(|&(k, method, budget)| {
            let share = budget / d0;
            let (encoders, params): (Vec<Encoder>, Vec<Params>) = match method {
                Method::Unified => models
                    .iter()
                    .map(|m| unified_channel(share, m).map(|(p, c)| (Encoder::Scheme(c), params_of(&p))))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .unzip(),
                Method::InfoDropout => frontiers
                    .iter()
                    .map(|f| match best_within(f, share) {
                        Some(p) => match p.params {
                            Params::Dropout { w1, w2, .. } => {
                                (Encoder::Dropout(DropoutChannel { w1, w2 }), params_of(p))
                            }
                            _ => unreachable!("dropout frontier carries dropout params"),
                        },
                        None => (
                            Encoder::Dropout(DropoutChannel { w1: 0.0, w2: 0.0 }),
                            Params::Dropout {
                                w1: 0.0,
                                w2: 0.0,
                                optimal: false,
                            },
                        ),
                    })
                    .unzip(),
            };
            evaluate(method, budget, encoders, params, parts, &signs, config, k as u64)
        })
        .collect::<Result<_>>()?;

    let mut report = ExperimentReport {
        betas,
        train_size: train.len(),
        test_size: test.len(),
        curves,
        unified_at: 0.0,
        dropout_at: 0.0,
        unified_monotone: true,
    };
    report.unified_at = report.error_at(Method::Unified, config.compare_at_bits).unwrap_or(0.5);
    report.dropout_at = report
        .error_at(Method::InfoDropout, config.compare_at_bits)
        .unwrap_or(0.5);
    let unified: Vec<&CurvePoint> = report.curve(Method::Unified).collect();
    report.unified_monotone = unified.windows(2).all(|w| {
        let noise = (w[0].error_stderr.powi(2) + w[1].error_stderr.powi(2)).sqrt();
        w[1].error <= w[0].error + 3.0 * noise
    });
    Ok(report)
}

/// Loads the class pair from `source` and runs [`run_experiment`].
pub fn digit_experiment(source: &DataSource, config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment(&load_dataset(source, config.classes)?, config)
}
