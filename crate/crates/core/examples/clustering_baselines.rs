//! Hard-partition baselines at two clusters: agglomerative, sequential, deterministic.

use gmib::info::{bits, discretize};
use gmib::solvers::{agg_ib_path, det_ib, seq_ib};
use gmib::MixtureModel;

fn main() -> gmib::Result<()> {
    for beta in [0.6, 1.0, std::f64::consts::SQRT_2] {
        let joint = discretize(&MixtureModel::new(beta)?, 200, 5.0)?;
        println!("beta = {beta:.4}");
        for (part, p) in agg_ib_path(&joint, &[2, 4, 8])? {
            println!(
                "  agg-ib m={}  ({:.4}, {:.4}) bits, occupied {}",
                part.m,
                bits(p.rate),
                bits(p.relevance),
                part.occupied()
            );
        }
        let (_, p) = seq_ib(&joint, 2, 1, 8)?;
        println!("  seq-ib m=2  ({:.4}, {:.4}) bits", bits(p.rate), bits(p.relevance));
        let (_, p) = det_ib(&joint, 50.0, 2, 1, 500)?;
        println!(
            "  det-ib |T|=2 λ=50  ({:.4}, {:.4}) bits",
            bits(p.rate),
            bits(p.relevance)
        );
    }
    Ok(())
}
