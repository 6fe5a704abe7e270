//! The five subcommands as row producers.

use rayon::prelude::*;

use super::output::{fmt_g, Row};
use super::{CommandName, RunConfig, RunOutput};
use crate::classify::{err_det_quant, err_soft_at, err_soft_bound, err_two_level, err_unified, mc_error, ErrorPoint};
use crate::data::{digit_experiment, ExperimentConfig, Method};
use crate::error::{Error, Result};
use crate::info::{discretize, MixtureModel};
use crate::point::{upper_frontier, Params, TradeoffPoint};
use crate::schemes::{build_quantizer, scheme_channels, soft_best, solve_q, unified_channel, Bound, ScalarChannel};
use crate::solvers::{
    agg_ib_path, ba_curve, default_lambdas, det_ib, info_dropout_curve, seq_ib, weight_grid, BaOptions, DropoutOptions,
};
use crate::vector::{chain_rule_check, equal_allocation, vector_unified, RateAllocation, VectorModel};

const SCALAR_SCHEMES: [&str; 6] = ["two-level", "det-quant", "soft-lb1", "soft-lb2", "soft", "unified"];
const ALL_SCALAR: [&str; 5] = ["two-level", "det-quant", "soft-lb1", "soft-lb2", "unified"];
const METHODS: [&str; 5] = ["ba", "agg-ib", "seq-ib", "det-ib", "info-dropout"];

fn select(requested: &[String], known: &[&'static str], all: &[&'static str]) -> Result<Vec<&'static str>> {
    if requested.iter().any(|s| s == "all") {
        return Ok(all.to_vec());
    }
    let unknown: Vec<String> = requested
        .iter()
        .filter(|s| !known.contains(&s.as_str()))
        .map(|s| format!("--schemes: unknown scheme `{s}` (known: {})", known.join(", ")))
        .collect();
    if !unknown.is_empty() {
        return Err(Error::Config(unknown));
    }
    // keep the canonical order
    Ok(known
        .iter()
        .copied()
        .filter(|k| requested.iter().any(|s| s == k))
        .collect())
}

pub(super) fn dispatch(config: &RunConfig) -> Result<RunOutput> {
    match config.command {
        CommandName::Curve => curve(config),
        CommandName::Classify => classify(config),
        CommandName::Vector => vector(config),
        CommandName::Mnist => mnist(config),
        CommandName::Baselines => baselines(config),
    }
}

fn plain(rows: Vec<Row>) -> RunOutput {
    RunOutput {
        rows,
        summary: None,
        warnings: Vec::new(),
    }
}

fn info_row(config: &RunConfig, beta: String, scheme: &str, p: &TradeoffPoint, flag: &str) -> Row {
    Row {
        beta,
        scheme: scheme.to_string(),
        rate: config.units.from_nats(p.rate),
        value: config.units.from_nats(p.relevance),
        params: p.params.to_string(),
        stderr: None,
        flag: if p.converged {
            flag.to_string()
        } else {
            "not-converged".to_string()
        },
    }
}

fn error_row(config: &RunConfig, beta: f64, scheme: &str, e: &ErrorPoint) -> Row {
    Row {
        beta: fmt_g(beta),
        scheme: scheme.to_string(),
        rate: config.units.from_nats(e.rate),
        value: e.error,
        params: e.params.to_string(),
        stderr: e.stderr,
        flag: if e.stderr.is_some() { "mc".into() } else { String::new() },
    }
}

fn grid_pairs(config: &RunConfig) -> Vec<(f64, f64)> {
    config
        .betas
        .iter()
        .flat_map(|b| config.r_grid.iter().map(move |r| (*b, *r)))
        .collect()
}

fn curve(config: &RunConfig) -> Result<RunOutput> {
    let schemes = select(&config.schemes, &SCALAR_SCHEMES, &ALL_SCALAR)?;
    let blocks: Vec<Vec<Row>> = grid_pairs(config)
        .par_iter()
        .map(|&(beta, r)| {
            let model = MixtureModel::new(beta)?;
            let points: Vec<TradeoffPoint> = scheme_channels(r, &model)?.into_iter().map(|(p, _)| p).collect();
            let mut rows = Vec::new();
            for s in &schemes {
                let point = match *s {
                    "unified" => Some(unified_channel(r, &model)?.0),
                    "soft" => Some(soft_best(r, &model)?.0),
                    tag => points.iter().find(|p| p.scheme.tag() == tag).cloned(),
                };
                if let Some(p) = point {
                    rows.push(info_row(config, fmt_g(beta), s, &p, ""));
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(plain(blocks.concat()))
}

/// Closed-form error and the channel the simulation should draw from.
fn scheme_error(scheme: &str, r: f64, model: &MixtureModel) -> Result<Option<(ErrorPoint, ScalarChannel)>> {
    let m = *model;
    Ok(Some(match scheme {
        "two-level" => {
            if r > std::f64::consts::LN_2 {
                return Ok(None);
            }
            (err_two_level(r, model)?, ScalarChannel::two_level(m, solve_q(r)?))
        }
        "det-quant" => (
            err_det_quant(r, model)?,
            ScalarChannel::quantizer(m, build_quantizer(r, model)),
        ),
        "soft-lb1" | "soft-lb2" => {
            let bound = if scheme == "soft-lb1" { Bound::Lb1 } else { Bound::Lb2 };
            if bound == Bound::Lb2 && r < std::f64::consts::LN_2 {
                return Ok(None);
            }
            let e = err_soft_bound(r, bound, model)?;
            let alpha = match e.params {
                Params::Soft { alpha } => alpha,
                _ => unreachable!("soft error carries its gain"),
            };
            (e, ScalarChannel::soft(m, crate::schemes::SoftScheme { alpha, bound }))
        }
        "soft" => (err_soft_at(r, model)?, ScalarChannel::soft(m, soft_best(r, model)?.1)),
        "unified" => (err_unified(r, model)?, unified_channel(r, model)?.1),
        other => return Err(Error::invalid(format!("unknown scheme tag `{other}`"))),
    }))
}

fn classify(config: &RunConfig) -> Result<RunOutput> {
    let schemes = select(&config.schemes, &SCALAR_SCHEMES, &ALL_SCALAR)?;
    let blocks: Vec<Vec<Row>> = grid_pairs(config)
        .par_iter()
        .enumerate()
        .map(|(k, &(beta, r))| {
            let model = MixtureModel::new(beta)?;
            let mut rows = Vec::new();
            for (si, s) in schemes.iter().enumerate() {
                let Some((closed, channel)) = scheme_error(s, r, &model)? else {
                    continue;
                };
                rows.push(error_row(config, beta, s, &closed));
                if let Some(n) = config.mc {
                    let seed = config.seed.wrapping_add(((k as u64) << 8) | si as u64);
                    let mut sim = mc_error(&channel, n, seed)?;
                    sim.rate = closed.rate;
                    sim.params = closed.params.clone();
                    rows.push(error_row(config, beta, s, &sim));
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(plain(blocks.concat()))
}

fn vector(config: &RunConfig) -> Result<RunOutput> {
    let model = VectorModel::new(config.vector_betas.clone())?;
    let label = config
        .vector_betas
        .iter()
        .map(|b| fmt_g(*b))
        .collect::<Vec<_>>()
        .join(";");
    let allocations: Vec<RateAllocation> = match &config.allocation {
        Some(a) => {
            if a.len() != model.dim() {
                return Err(Error::Config(vec![format!(
                    "--allocation: {} budgets for {} coordinates",
                    a.len(),
                    model.dim()
                )]));
            }
            let alloc = RateAllocation::new(a.clone())?;
            if config.r_grid.len() == 1 && (alloc.total() - config.r_grid[0]).abs() > 1e-9 && config.r_grid[0] != 0.0 {
                return Err(Error::Config(vec![
                    "--allocation: budgets do not sum to the total rate".into(),
                ]));
            }
            vec![alloc]
        }
        None => config
            .r_grid
            .iter()
            .map(|r| equal_allocation(*r, model.dim()))
            .collect::<Result<_>>()?,
    };
    let mut rows = Vec::new();
    for (k, alloc) in allocations.iter().enumerate() {
        let seed = config.seed.wrapping_add(k as u64);
        let p = vector_unified(&model, alloc, config.mc_samples, seed)?;
        let mut row = info_row(config, label.clone(), "vector", &p, "");
        if let Params::Vector {
            exact: false, stderr, ..
        } = p.params
        {
            row.stderr = Some(config.units.from_nats(stderr));
            row.flag = "mc".into();
        }
        rows.push(row);
        if let Some(n) = config.chain_rule {
            let c = chain_rule_check(&model, alloc, n, seed)?;
            rows.push(Row {
                beta: label.clone(),
                scheme: "chain-rule".into(),
                rate: config.units.from_nats(c.rhs),
                value: config.units.from_nats(c.lhs),
                params: format!(
                    "bins={};budget={}",
                    c.bins_per_dim,
                    fmt_g(config.units.from_nats(alloc.total()))
                ),
                stderr: Some(config.units.from_nats(c.lhs_stderr)),
                flag: if c.holds { "holds".into() } else { "violated".into() },
            });
        }
    }
    Ok(plain(rows))
}

fn mnist(config: &RunConfig) -> Result<RunOutput> {
    let source = config
        .mnist
        .source
        .as_ref()
        .ok_or_else(|| Error::Config(vec!["mnist needs a dataset".into()]))?;
    let exp = ExperimentConfig {
        classes: config.mnist.classes,
        d0: config.mnist.d0,
        sample_cap: config.mnist.cap,
        projection_seed: config.seed,
        split_seed: config.seed.wrapping_add(1),
        noise_seed: config.seed.wrapping_add(2),
        budgets_bits: config.r_grid.iter().map(|r| crate::info::bits(*r)).collect(),
        replicates: config.mnist.replicates,
        bins_per_dim: config.mnist.bins,
        dropout_step: config.solver.dropout_step,
        ..ExperimentConfig::default()
    };
    let report = digit_experiment(source, &exp)?;
    let rows = report
        .curves
        .iter()
        .map(|p| Row {
            beta: String::new(),
            scheme: p.method.tag().into(),
            rate: config.units.from_nats(p.leakage),
            value: p.error,
            params: format!(
                "budget={};{}",
                fmt_g(config.units.from_nats(p.budget)),
                p.params.iter().map(|q| q.to_string()).collect::<Vec<_>>().join("|")
            ),
            stderr: Some(p.error_stderr),
            flag: String::new(),
        })
        .collect();
    let summary = serde_json::json!({
        "betas": report.betas,
        "train_size": report.train_size,
        "test_size": report.test_size,
        "compare_at_bits": exp.compare_at_bits,
        "unified_error": report.unified_at,
        "dropout_error": report.dropout_at,
        "unified_better": report.unified_at < report.dropout_at,
        "unified_monotone": report.unified_monotone,
    });
    let mut warnings = Vec::new();
    if report.curve(Method::Unified).count() < 2 {
        warnings.push("a single budget cannot show a tradeoff".to_string());
    }
    Ok(RunOutput {
        rows,
        summary: Some(summary),
        warnings,
    })
}

fn baselines(config: &RunConfig) -> Result<RunOutput> {
    let methods = select(&config.schemes, &METHODS, &METHODS)?;
    let s = &config.solver;
    let lambdas = s.lambdas.clone().unwrap_or_else(default_lambdas);
    let mut rows = Vec::new();
    for (bi, &beta) in config.betas.iter().enumerate() {
        let model = MixtureModel::new(beta)?;
        let joint = discretize(&model, s.grid_points, s.span)?;
        let seed = config.seed.wrapping_add((bi as u64) << 48);
        let b = fmt_g(beta);
        for method in &methods {
            match *method {
                "ba" => {
                    let options = BaOptions {
                        t_size: s.t_size,
                        max_iter: s.max_iter,
                        ..BaOptions::default()
                    };
                    for p in ba_curve(&joint, &lambdas, s.restarts, seed, &options)? {
                        rows.push(info_row(config, b.clone(), method, &p, ""));
                    }
                }
                "agg-ib" => {
                    for (_, p) in agg_ib_path(&joint, &s.m)? {
                        rows.push(info_row(config, b.clone(), method, &p, ""));
                    }
                }
                "seq-ib" => {
                    for &m in &s.m {
                        let (_, p) = seq_ib(&joint, m, seed, s.restarts)?;
                        rows.push(info_row(config, b.clone(), method, &p, ""));
                    }
                }
                "det-ib" => {
                    for &m in &s.m {
                        let points: Vec<TradeoffPoint> = lambdas
                            .par_iter()
                            .enumerate()
                            .map(|(k, &l)| {
                                det_ib(&joint, l, m, seed.wrapping_add(k as u64), s.max_iter).map(|(_, p)| p)
                            })
                            .collect::<Result<_>>()?;
                        for p in upper_frontier(points, 1e-12) {
                            rows.push(info_row(config, b.clone(), method, &p, ""));
                        }
                    }
                }
                "info-dropout" => {
                    let grid = weight_grid(-10.0, 10.0, s.dropout_step);
                    let options = DropoutOptions {
                        grid_points: s.grid_points,
                        span: s.span,
                        ..DropoutOptions::default()
                    };
                    for p in info_dropout_curve(&model, &grid, &grid, s.dropout_lambda, &options)? {
                        let flag = matches!(p.params, Params::Dropout { optimal: true, .. });
                        rows.push(info_row(
                            config,
                            b.clone(),
                            method,
                            &p,
                            if flag { "optimal" } else { "" },
                        ));
                    }
                }
                _ => unreachable!("methods are validated"),
            }
        }
    }
    Ok(plain(rows))
}
