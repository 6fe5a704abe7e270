//! Real-data pipeline: ingestion, random projection, per-class whitening,
//! stratified splitting, and the digit-pair leakage experiment.

mod experiment;
mod load;
mod transform;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::Label;
use crate::rng::stream;

pub use experiment::{digit_experiment, run_experiment, CurvePoint, ExperimentConfig, ExperimentReport, Method};
pub use load::{load_dataset, read_csv, read_idx, DataSource, RawDataset};
pub use transform::{class_whiten, random_projection, CONDITION_LIMIT, EIGEN_FLOOR};

/// `n × d` samples with `±1` labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub vectors: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
}

impl LabeledDataset {
    pub fn new(vectors: Vec<Vec<f64>>, labels: Vec<Label>) -> Result<Self> {
        if vectors.len() != labels.len() {
            return Err(Error::Dimension {
                expected: vectors.len(),
                got: labels.len(),
            });
        }
        if let Some(first) = vectors.first() {
            if let Some(v) = vectors.iter().find(|v| v.len() != first.len()) {
                return Err(Error::Dimension {
                    expected: first.len(),
                    got: v.len(),
                });
            }
        }
        Ok(LabeledDataset { vectors, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    pub fn class_count(&self, label: Label) -> usize {
        self.labels.iter().filter(|l| **l == label).count()
    }

    fn select(&self, idx: &[usize]) -> LabeledDataset {
        LabeledDataset {
            vectors: idx.iter().map(|&i| self.vectors[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Keeps at most `cap` samples of each class, in order.
    pub fn cap_per_class(&self, cap: usize) -> LabeledDataset {
        let mut seen = [0usize; 2];
        let idx: Vec<usize> = (0..self.len())
            .filter(|&i| {
                let c = &mut seen[self.labels[i].index()];
                *c += 1;
                *c <= cap
            })
            .collect();
        self.select(&idx)
    }
}

/// Stratified shuffle split; each class contributes `round(fraction · n_c)`
/// samples to the training side. Both sides keep the input order.
pub fn split(data: &LabeledDataset, train_fraction: f64, seed: u64) -> Result<(LabeledDataset, LabeledDataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::domain("train_fraction", train_fraction, "(0, 1)"));
    }
    let mut train = Vec::new();
    for label in [Label::Neg, Label::Pos] {
        let mut idx: Vec<usize> = (0..data.len()).filter(|&i| data.labels[i] == label).collect();
        let mut rng = stream(seed, label.index() as u64);
        rand::seq::SliceRandom::shuffle(idx.as_mut_slice(), &mut rng);
        let take = (train_fraction * idx.len() as f64).round() as usize;
        train.extend_from_slice(&idx[..take]);
    }
    train.sort_unstable();
    let mut in_train = vec![false; data.len()];
    train.iter().for_each(|&i| in_train[i] = true);
    let test: Vec<usize> = (0..data.len()).filter(|&i| !in_train[i]).collect();
    Ok((data.select(&train), data.select(&test)))
}
