//! Projected, whitened digits 7 vs 9: error against estimated leakage.
//!
//! Runs on the bundled 8×8 digit fixture unless IDX paths are given:
//! `cargo run --example digit_experiment -- images.idx3-ubyte labels.idx1-ubyte`

use std::path::PathBuf;

use gmib::data::{digit_experiment, DataSource, ExperimentConfig, Method};
use gmib::info::bits;

fn main() -> gmib::Result<()> {
    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let mut args = std::env::args().skip(1);
    let source = match (args.next(), args.next()) {
        (Some(images), Some(labels)) => DataSource::Idx {
            images: images.into(),
            labels: labels.into(),
        },
        _ => DataSource::Idx {
            images: fixture.join("digits-images.idx3-ubyte"),
            labels: fixture.join("digits-labels.idx1-ubyte"),
        },
    };
    let report = digit_experiment(&source, &ExperimentConfig::default())?;
    println!(
        "beta ≈ {:?}, train {}, test {}",
        report.betas, report.train_size, report.test_size
    );
    for method in [Method::Unified, Method::InfoDropout] {
        println!("{}", method.tag());
        for p in report.curve(method).step_by(2) {
            println!(
                "  budget {:>5.2} bits  leakage {:>6.3} bits  error {:.4} ± {:.4}",
                bits(p.budget),
                bits(p.leakage),
                p.error,
                p.error_stderr
            );
        }
    }
    println!(
        "at 2 bits: unified {:.4}, dropout {:.4}; unified non-increasing within noise: {}",
        report.unified_at, report.dropout_at, report.unified_monotone
    );
    Ok(())
}
