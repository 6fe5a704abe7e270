//! Relevance of each closed-form scheme and their maximum across budgets.

use gmib::info::{bits, mi_xy, nats};
use gmib::schemes::{scheme_channels, unified};
use gmib::MixtureModel;

fn main() -> gmib::Result<()> {
    let model = MixtureModel::new(1.0)?;
    println!("I(X;Y) = {:.4} bits", bits(mi_xy(&model)));
    println!(
        "{:>6}  {:>9}  {:>9}  {:>9}  {:>9}  {:>9}  winner",
        "R", "two-level", "det-quant", "soft-lb1", "soft-lb2", "unified"
    );
    for k in 0..=12 {
        let r = nats(0.25 * k as f64);
        let mut cols = [f64::NAN; 4];
        for (p, _) in scheme_channels(r, &model)? {
            let slot = match p.scheme.tag() {
                "two-level" => 0,
                "det-quant" => 1,
                "soft-lb1" => 2,
                _ => 3,
            };
            cols[slot] = bits(p.relevance);
        }
        let u = unified(r, &model)?;
        println!(
            "{:>6.2}  {:>9.4}  {:>9.4}  {:>9.4}  {:>9.4}  {:>9.4}  {}",
            bits(r),
            cols[0],
            cols[1],
            cols[2],
            cols[3],
            bits(u.relevance),
            u.scheme
        );
    }
    Ok(())
}
