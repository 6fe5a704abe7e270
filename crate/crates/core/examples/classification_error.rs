//! Closed-form estimator errors next to Monte-Carlo simulation.

use gmib::classify::{err_det_quant, err_soft_at, err_two_level, mc_error};
use gmib::info::nats;
use gmib::schemes::{build_quantizer, soft_best, solve_q, ScalarChannel};
use gmib::MixtureModel;

fn main() -> gmib::Result<()> {
    let n = 20_000;
    for beta in [0.6, 1.0, std::f64::consts::SQRT_2] {
        let m = MixtureModel::new(beta)?;
        println!("beta = {beta:.4}");
        for r_bits in [0.25, 0.5, 1.0] {
            let r = nats(r_bits);
            let closed = err_two_level(r, &m)?;
            let sim = mc_error(&ScalarChannel::two_level(m, solve_q(r)?), n, 1)?;
            println!(
                "  two-level {r_bits:>4} bits: {:.5}  mc {:.5} ± {:.5}",
                closed.error,
                sim.error,
                sim.stderr.unwrap_or(0.0)
            );
        }
        for r_bits in [1.0, 2.0, 3.0] {
            let r = nats(r_bits);
            let closed = err_det_quant(r, &m)?;
            let sim = mc_error(&ScalarChannel::quantizer(m, build_quantizer(r, &m)), n, 2)?;
            println!(
                "  det-quant {r_bits:>4} bits: {:.5}  mc {:.5} ± {:.5}",
                closed.error,
                sim.error,
                sim.stderr.unwrap_or(0.0)
            );
            let closed = err_soft_at(r, &m)?;
            let sim = mc_error(&ScalarChannel::soft(m, soft_best(r, &m)?.1), n, 3)?;
            println!(
                "  soft      {r_bits:>4} bits: {:.5}  mc {:.5} ± {:.5}",
                closed.error,
                sim.error,
                sim.stderr.unwrap_or(0.0)
            );
        }
    }
    Ok(())
}
