//! Projection and per-class whitening.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use super::LabeledDataset;
use crate::error::{Error, Result};
use crate::info::Label;
use crate::rng::stream;

/// Eigenvalues below this are raised to it before the inverse square root.
pub const EIGEN_FLOOR: f64 = 1e-10;
/// Class covariances with a larger condition number are rejected.
pub const CONDITION_LIMIT: f64 = 1e12;

/// `x ↦ Gx` with `G` a seeded `d0 × d` matrix of standard normals, drawn row by row.
pub fn random_projection(data: &LabeledDataset, d0: usize, seed: u64) -> Result<LabeledDataset> {
    let d = data.dim();
    if d0 == 0 || d0 > d {
        return Err(Error::Dimension { expected: d, got: d0 });
    }
    let mut rng = stream(seed, 0);
    let g: Vec<Vec<f64>> = (0..d0)
        .map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    let vectors = data
        .vectors
        .iter()
        .map(|x| {
            g.iter()
                .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    LabeledDataset::new(vectors, data.labels.clone())
}

struct ClassStats {
    mean: DVector<f64>,
    inv_sqrt: DMatrix<f64>,
}

fn class_stats(data: &LabeledDataset, label: Label) -> Result<ClassStats> {
    let d = data.dim();
    let rows: Vec<&Vec<f64>> = data
        .vectors
        .iter()
        .zip(&data.labels)
        .filter(|(_, l)| **l == label)
        .map(|(v, _)| v)
        .collect();
    if rows.len() < d + 1 {
        return Err(Error::invalid(format!(
            "class {:+} has {} samples, whitening {d} dimensions needs at least {}",
            label.sign(),
            rows.len(),
            d + 1
        )));
    }
    let n = rows.len() as f64;
    let mut mean = DVector::zeros(d);
    for r in &rows {
        mean += DVector::from_column_slice(r) / n;
    }
    let mut cov = DMatrix::zeros(d, d);
    for r in &rows {
        let c = DVector::from_column_slice(r) - &mean;
        cov += &c * c.transpose();
    }
    cov /= n - 1.0;
    let eig = SymmetricEigen::new(cov);
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if !(condition <= CONDITION_LIMIT) {
        return Err(Error::SingularCovariance {
            class: label.sign() as i8,
            condition,
        });
    }
    let scale = eig.eigenvalues.map(|v| 1.0 / v.max(EIGEN_FLOOR).sqrt());
    let inv_sqrt = &eig.eigenvectors * DMatrix::from_diagonal(&scale) * eig.eigenvectors.transpose();
    Ok(ClassStats { mean, inv_sqrt })
}

/// Per class: `C^{-1/2}(x - μ_c)` shifted by `½(μ_- - μ_+)` for the negative
/// class and its mirror for the positive class.
pub fn class_whiten(data: &LabeledDataset) -> Result<LabeledDataset> {
    let neg = class_stats(data, Label::Neg)?;
    let pos = class_stats(data, Label::Pos)?;
    let half_gap = (&neg.mean - &pos.mean) / 2.0;
    let vectors = data
        .vectors
        .iter()
        .zip(&data.labels)
        .map(|(v, l)| {
            let (stats, shift) = match l {
                Label::Neg => (&neg, half_gap.clone()),
                Label::Pos => (&pos, -&half_gap),
            };
            let w = &stats.inv_sqrt * (DVector::from_column_slice(v) - &stats.mean) + shift;
            w.iter().copied().collect()
        })
        .collect();
    LabeledDataset::new(vectors, data.labels.clone())
}
