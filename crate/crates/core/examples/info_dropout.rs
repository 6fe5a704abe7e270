//! Brute-force information-dropout frontier and the budgeted choice on it.

use gmib::info::{bits, nats};
use gmib::solvers::{best_within, info_dropout_curve, weight_grid, DropoutOptions};
use gmib::MixtureModel;

fn main() -> gmib::Result<()> {
    let model = MixtureModel::new(1.0)?;
    let grid = weight_grid(-10.0, 10.0, 0.5);
    let frontier = info_dropout_curve(&model, &grid, &grid, 10.0, &DropoutOptions::default())?;
    for p in &frontier {
        println!("({:.4}, {:.4}) bits  {}", bits(p.rate), bits(p.relevance), p.params);
    }
    for budget in [0.25, 0.5, 1.0, 2.0] {
        if let Some(p) = best_within(&frontier, nats(budget)) {
            println!("budget {budget} bits -> {:.4} bits at {}", bits(p.relevance), p.params);
        }
    }
    Ok(())
}
