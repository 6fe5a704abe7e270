//! CSV rows and the JSON sidecar.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "beta,scheme,rate,value,params,stderr,flag";

/// `%.9g`: nine significant digits, trailing zeros removed.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        let m = trim_zeros(mantissa);
        return format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (8 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One output line; rates are already in the output units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub beta: String,
    pub scheme: String,
    pub rate: f64,
    pub value: f64,
    pub params: String,
    pub stderr: Option<f64>,
    pub flag: String,
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let stderr = r.stderr.map(fmt_g).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            field(&r.beta),
            field(&r.scheme),
            fmt_g(r.rate),
            fmt_g(r.value),
            field(&r.params),
            stderr,
            field(&r.flag)
        ));
    }
    out
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut f = std::fs::File::create(path).map_err(io)?;
    f.write_all(contents).map_err(io)
}
