//! Driving the command-line layer from code and writing CSV plus sidecar.

use gmib::cli::{execute, parse_config};

fn main() -> gmib::Result<()> {
    let dir = std::env::temp_dir().join("gmib-example");
    std::fs::create_dir_all(&dir).map_err(|source| gmib::Error::Io {
        path: dir.clone(),
        source,
    })?;
    let out = dir.join("curve.csv");
    let argv = [
        "gmib",
        "curve",
        "--beta",
        "1,1.4142135623730951",
        "--schemes",
        "two-level,det-quant,unified",
        "--r-grid",
        "0:2:0.5",
        "--units",
        "bits",
        "--out",
        out.to_str().unwrap_or("curve.csv"),
    ];
    let Some(config) = parse_config(argv)? else {
        return Ok(());
    };
    let output = execute(&config)?;
    println!("{} rows -> {}", output.rows.len(), out.display());
    print!("{}", std::fs::read_to_string(&out).unwrap_or_default());
    println!(
        "{}",
        std::fs::read_to_string(out.with_extension("json")).unwrap_or_default()
    );
    Ok(())
}
