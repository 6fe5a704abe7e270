//! Jackknife-corrected plug-in mutual information on equal-frequency bins.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Upper bound on `bins^(dim a + dim b)`.
pub const MAX_CELLS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiEstimate {
    /// Nats.
    pub estimate: f64,
    pub stderr: f64,
}

/// Rank bins of one coordinate; tied values share the bin of their mid-rank.
fn rank_bins(values: &[f64], bins: usize) -> Vec<u64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut out = vec![0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let mid = (start + end - 1) as f64 / 2.0;
        let bin = ((bins as f64 * mid / n as f64) as u64).min(bins as u64 - 1);
        for &i in &order[start..end] {
            out[i] = bin;
        }
        start = end;
    }
    out
}

fn cell_keys(samples: &[Vec<f64>], bins: usize) -> Vec<u64> {
    let dim = samples[0].len();
    let mut keys = vec![0u64; samples.len()];
    let mut radix = 1u64;
    for k in 0..dim {
        let column: Vec<f64> = samples.iter().map(|s| s[k]).collect();
        for (key, b) in keys.iter_mut().zip(rank_bins(&column, bins)) {
            *key += b * radix;
        }
        radix *= bins as u64;
    }
    keys
}

fn check_dims(samples: &[Vec<f64>]) -> Result<usize> {
    let dim = samples[0].len();
    if dim == 0 {
        return Err(Error::invalid("samples have no coordinates"));
    }
    if let Some(s) = samples.iter().find(|s| s.len() != dim) {
        return Err(Error::Dimension {
            expected: dim,
            got: s.len(),
        });
    }
    Ok(dim)
}

fn xlogx(n: u32) -> f64 {
    if n <= 1 {
        0.0
    } else {
        let n = f64::from(n);
        n * n.ln()
    }
}

/// `n·Î - (n-1)·mean(Î_{-i})` with the leave-one-out spread as standard error.
pub fn jackknife_mi(a: &[Vec<f64>], b: &[Vec<f64>], bins_per_dim: usize) -> Result<MiEstimate> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            got: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::invalid("at least two samples are required"));
    }
    if bins_per_dim < 2 {
        return Err(Error::invalid("bins_per_dim must be at least 2"));
    }
    let dims = check_dims(a)? + check_dims(b)?;
    let cells = (bins_per_dim as u64).checked_pow(dims as u32);
    if cells.is_none_or(|c| c > MAX_CELLS) {
        return Err(Error::invalid(format!(
            "{bins_per_dim} bins over {dims} dimensions exceeds {MAX_CELLS} cells"
        )));
    }
    let ka = cell_keys(a, bins_per_dim);
    let kb = cell_keys(b, bins_per_dim);
    let b_radix = (bins_per_dim as u64).pow(b[0].len() as u32);

    let mut na: HashMap<u64, u32> = HashMap::new();
    let mut nb: HashMap<u64, u32> = HashMap::new();
    let mut nab: HashMap<u64, u32> = HashMap::new();
    for (x, y) in ka.iter().zip(&kb) {
        *na.entry(*x).or_default() += 1;
        *nb.entry(*y).or_default() += 1;
        *nab.entry(x * b_radix + y).or_default() += 1;
    }
    let s = nab.values().map(|c| xlogx(*c)).sum::<f64>()
        - na.values().map(|c| xlogx(*c)).sum::<f64>()
        - nb.values().map(|c| xlogx(*c)).sum::<f64>();
    let n = a.len() as f64;
    let full = n.ln() + s / n;

    // removing one sample lowers its three cell counts by one
    let drop = |c: u32| xlogx(c) - xlogx(c - 1);
    let ln_m = (n - 1.0).ln();
    let loo: Vec<f64> = ka
        .iter()
        .zip(&kb)
        .map(|(x, y)| {
            let si = s - drop(nab[&(x * b_radix + y)]) + drop(na[x]) + drop(nb[y]);
            ln_m + si / (n - 1.0)
        })
        .collect();
    let mean = loo.iter().sum::<f64>() / n;
    let spread = loo.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
    Ok(MiEstimate {
        estimate: n * full - (n - 1.0) * mean,
        stderr: ((n - 1.0) / n * spread).sqrt(),
    })
}
