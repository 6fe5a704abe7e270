//! Thresholds and levels of the entropy-shaped quantizer at a few budgets.

use gmib::info::{bits, entropy, nats, Label};
use gmib::schemes::{build_quantizer, i2, target_masses};
use gmib::MixtureModel;

fn main() -> gmib::Result<()> {
    let model = MixtureModel::new(1.0)?;
    for r_bits in [0.5, 1.0526, 2.0, 3.0] {
        let r = nats(r_bits);
        let q = build_quantizer(r, &model);
        let masses = q.masses(&model);
        println!("R = {r_bits} bits: L = {}, Δ = {:.6}", q.level_count(), q.delta);
        println!(
            "  thresholds {:?}",
            q.thresholds.iter().map(|t| (t * 1e4).round() / 1e4).collect::<Vec<_>>()
        );
        println!(
            "  H(T) = {:.6} bits (targets sum {:.3})",
            bits(entropy(&masses)),
            target_masses(r).iter().sum::<f64>()
        );
        println!(
            "  P(T | Y=+1) {:?}",
            q.bin_probs(&model, Label::Pos)
                .iter()
                .map(|p| (p * 1e4).round() / 1e4)
                .collect::<Vec<_>>()
        );
        println!(
            "  I(Y;T) = {:.4} bits, sign boundary {:?}",
            bits(i2(r, &model).relevance),
            q.sign_boundary()
        );
    }
    Ok(())
}
