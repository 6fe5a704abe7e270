//! Blahut–Arimoto reference frontier against the unified closed-form bound.

use gmib::info::{bits, discretize};
use gmib::schemes::unified;
use gmib::solvers::{ba_curve, default_lambdas, BaOptions};
use gmib::MixtureModel;

fn main() -> gmib::Result<()> {
    let model = MixtureModel::new(1.0)?;
    let joint = discretize(&model, 200, 5.0)?;
    let frontier = ba_curve(&joint, &default_lambdas(), 2, 7, &BaOptions::default())?;
    println!("{:>8}  {:>8}  {:>8}  {:>6}", "I(X;T)", "BA", "unified", "lambda");
    for p in frontier.iter().step_by(4) {
        let u = unified(p.rate, &model)?;
        let lambda = match p.params {
            gmib::Params::Lagrange { lambda, .. } => lambda,
            _ => f64::NAN,
        };
        println!(
            "{:>8.4}  {:>8.4}  {:>8.4}  {:>6.1}",
            bits(p.rate),
            bits(p.relevance),
            bits(u.relevance),
            lambda
        );
    }
    Ok(())
}
