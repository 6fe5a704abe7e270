//! Rate literals (`0.5nats`, `1bits`), grids (`a:b:step` or lists) and units.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Bits,
    Nats,
}

impl Units {
    pub fn to_nats(self, v: f64) -> f64 {
        match self {
            Units::Bits => v * LN_2,
            Units::Nats => v,
        }
    }

    pub fn from_nats(self, v: f64) -> f64 {
        match self {
            Units::Bits => v / LN_2,
            Units::Nats => v,
        }
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Units::Bits => "bits",
            Units::Nats => "nats",
        })
    }
}

impl FromStr for Units {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bits" | "bit" => Ok(Units::Bits),
            "nats" | "nat" => Ok(Units::Nats),
            other => Err(format!("unknown units `{other}` (expected bits or nats)")),
        }
    }
}

/// Splits `1.5bits` into `(1.5, Some(Bits))`.
fn split_suffix(s: &str) -> Result<(f64, Option<Units>), String> {
    let s = s.trim();
    let cut = s
        .find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E')
        .unwrap_or(s.len());
    let (num, suffix) = s.split_at(cut);
    let value = num
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("`{s}` is not a number"))?;
    let units = if suffix.is_empty() {
        None
    } else {
        Some(suffix.parse::<Units>()?)
    };
    Ok((value, units))
}

/// Converts a rate literal to nats; a suffix overrides `default` with a warning.
pub fn parse_rate(s: &str, default: Option<Units>, warnings: &mut Vec<String>) -> Result<f64, String> {
    let (value, suffix) = split_suffix(s)?;
    let units = match (suffix, default) {
        (Some(u), Some(d)) if u != d => {
            warnings.push(format!(
                "`{}` uses {u} although --units is {d}; the suffix wins",
                s.trim()
            ));
            u
        }
        (Some(u), _) => u,
        (None, Some(d)) => d,
        (None, None) => {
            return Err(format!(
                "rate `{}` needs a bits/nats suffix when --units is not set",
                s.trim()
            ))
        }
    };
    if !(value >= 0.0 && value.is_finite()) {
        return Err(format!("rate `{}` must be a finite nonnegative value", s.trim()));
    }
    Ok(units.to_nats(value))
}

fn range(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(step > 0.0) || !(hi >= lo) {
        return Err(format!("range {lo}:{hi}:{step} needs step > 0 and hi >= lo"));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return Err(format!("range {lo}:{hi}:{step} has more than a million points"));
    }
    Ok((0..=n).map(|k| lo + step * k as f64).collect())
}

/// `a:b:step` (inclusive) or `v1,v2,…` of plain numbers.
pub fn parse_numbers(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty list".into());
    }
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("`{s}` is not of the form a:b:step"));
        }
        let p = parts
            .iter()
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("`{p}` is not a number")))
            .collect::<Result<Vec<_>, _>>()?;
        return range(p[0], p[1], p[2]);
    }
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| format!("`{v}` is not a number")))
        .collect()
}

/// A grid of rate literals in nats. In `a:b:step` form a suffix on any part
/// applies to the whole range; parts must not disagree.
pub fn parse_rate_grid(s: &str, default: Option<Units>, warnings: &mut Vec<String>) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty grid".into());
    }
    if !s.contains(':') {
        return s.split(',').map(|v| parse_rate(v, default, warnings)).collect();
    }
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("`{s}` is not of the form a:b:step"));
    }
    let split = parts.iter().map(|p| split_suffix(p)).collect::<Result<Vec<_>, _>>()?;
    let mut suffix = None;
    for (_, u) in &split {
        match (suffix, u) {
            (Some(a), Some(b)) if a != *b => return Err(format!("`{s}` mixes bits and nats")),
            (None, Some(b)) => suffix = Some(*b),
            _ => {}
        }
    }
    let literal = |v: f64| match suffix {
        Some(u) => format!("{v}{u}"),
        None => v.to_string(),
    };
    range(split[0].0, split[1].0, split[2].0)?
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            // warn once per grid, not once per point
            let mut local = Vec::new();
            let r = parse_rate(&literal(v), default, &mut local);
            if k == 0 {
                warnings.extend(local);
            }
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_suffixes() {
        let mut w = Vec::new();
        assert_eq!(parse_rate("0.693nats", None, &mut w).unwrap(), 0.693);
        assert_eq!(parse_rate("1bits", None, &mut w).unwrap(), LN_2);
        assert_eq!(parse_rate("2", Some(Units::Bits), &mut w).unwrap(), 2.0 * LN_2);
        assert_eq!(parse_rate("1e-1nats", None, &mut w).unwrap(), 0.1);
        assert!(w.is_empty());
        assert_eq!(parse_rate("1nats", Some(Units::Bits), &mut w).unwrap(), 1.0);
        assert_eq!(w.len(), 1);
        assert!(parse_rate("1", None, &mut w).is_err());
        assert!(parse_rate("1furlongs", None, &mut w).is_err());
        assert!(parse_rate("-1nats", None, &mut w).is_err());
    }

    #[test]
    fn grids() {
        let mut w = Vec::new();
        let g = parse_rate_grid("0:3:0.25", Some(Units::Bits), &mut w).unwrap();
        assert_eq!(g.len(), 13);
        assert!((g[12] - 3.0 * LN_2).abs() < 1e-12);
        let g = parse_rate_grid("0:1:0.5nats", None, &mut w).unwrap();
        assert_eq!(g, vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_rate_grid("1bits,2nats", None, &mut w).unwrap(), vec![LN_2, 2.0]);
        assert!(parse_rate_grid("0bits:1nats:0.5", None, &mut w).is_err());
        assert!(parse_rate_grid("0:1:0", Some(Units::Nats), &mut w).is_err());
        assert_eq!(parse_numbers("0.9,1,1.1").unwrap(), vec![0.9, 1.0, 1.1]);
        assert_eq!(parse_numbers("1:2:0.5").unwrap(), vec![1.0, 1.5, 2.0]);
        assert!(parse_numbers("").is_err());
    }
}
