//! Logistic readout `σ(wᵀt + b) ≥ ½` trained by full-batch gradient descent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::Label;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticOptions {
    pub steps: usize,
    pub step_size: f64,
}

impl Default for LogisticOptions {
    fn default() -> Self {
        LogisticOptions {
            steps: 2000,
            step_size: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Logistic {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl Logistic {
    pub fn score(&self, t: &[f64]) -> f64 {
        self.weights.iter().zip(t).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }

    pub fn predict(&self, t: &[f64]) -> Label {
        Label::from_sign(self.score(t))
    }
}

fn check_shape(features: &[Vec<f64>], labels: &[Label], dim: Option<usize>) -> Result<usize> {
    if features.is_empty() {
        return Err(Error::invalid("no samples"));
    }
    if features.len() != labels.len() {
        return Err(Error::Dimension {
            expected: features.len(),
            got: labels.len(),
        });
    }
    let d = dim.unwrap_or(features[0].len());
    if let Some(row) = features.iter().find(|r| r.len() != d) {
        return Err(Error::Dimension {
            expected: d,
            got: row.len(),
        });
    }
    Ok(d)
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Minimizes the mean logistic loss from zero on standardized features, then
/// folds the standardization back into the returned parameters.
pub fn train_logistic(features: &[Vec<f64>], labels: &[Label], options: &LogisticOptions) -> Result<Logistic> {
    let d = check_shape(features, labels, None)?;
    if !(options.step_size > 0.0) {
        return Err(Error::domain("step_size", options.step_size, "(0, inf)"));
    }
    let n = features.len() as f64;
    let mut mean = vec![0.0; d];
    for row in features {
        mean.iter_mut().zip(row).for_each(|(m, v)| *m += v / n);
    }
    let mut scale = vec![0.0; d];
    for row in features {
        for k in 0..d {
            scale[k] += (row[k] - mean[k]).powi(2) / n;
        }
    }
    // constant columns carry no signal; leave them unscaled
    scale
        .iter_mut()
        .for_each(|s| *s = if *s > 0.0 { s.sqrt() } else { 1.0 });
    let z: Vec<Vec<f64>> = features
        .iter()
        .map(|row| (0..d).map(|k| (row[k] - mean[k]) / scale[k]).collect())
        .collect();
    let y: Vec<f64> = labels.iter().map(|l| (l.sign() + 1.0) / 2.0).collect();

    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut grad = vec![0.0; d];
    for _ in 0..options.steps {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut grad_b = 0.0;
        for (row, target) in z.iter().zip(&y) {
            let s = row.iter().zip(&w).map(|(a, c)| a * c).sum::<f64>() + b;
            let r = sigmoid(s) - target;
            grad.iter_mut().zip(row).for_each(|(g, v)| *g += r * v);
            grad_b += r;
        }
        w.iter_mut()
            .zip(&grad)
            .for_each(|(wk, g)| *wk -= options.step_size * g / n);
        b -= options.step_size * grad_b / n;
    }
    let weights: Vec<f64> = w.iter().zip(&scale).map(|(wk, s)| wk / s).collect();
    let bias = b - weights.iter().zip(&mean).map(|(wk, m)| wk * m).sum::<f64>();
    Ok(Logistic { weights, bias })
}

/// Fraction of samples whose prediction differs from the label.
pub fn eval_logistic(model: &Logistic, features: &[Vec<f64>], labels: &[Label]) -> Result<f64> {
    check_shape(features, labels, Some(model.weights.len()))?;
    let wrong = features
        .iter()
        .zip(labels)
        .filter(|(t, y)| model.predict(t) != **y)
        .count();
    Ok(wrong as f64 / features.len() as f64)
}

#[cfg(test)]
mod tests {
    use rand::Rng;
    use rand_distr::StandardNormal;

    use super::*;
    use crate::info::gaussian_q;
    use crate::rng::stream;

    #[test]
    fn separable_toy_set() {
        let mut f = Vec::new();
        let mut l = Vec::new();
        for _ in 0..50 {
            f.push(vec![-2.0]);
            l.push(Label::Neg);
            f.push(vec![2.0]);
            l.push(Label::Pos);
        }
        let m = train_logistic(&f, &l, &LogisticOptions::default()).unwrap();
        assert_eq!(eval_logistic(&m, &f, &l).unwrap(), 0.0);
    }

    #[test]
    fn single_label_is_constant() {
        let f: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64, 1.0]).collect();
        let l = vec![Label::Neg; 20];
        let m = train_logistic(&f, &l, &LogisticOptions::default()).unwrap();
        assert_eq!(eval_logistic(&m, &f, &l).unwrap(), 0.0);
    }

    #[test]
    fn constant_output_errs_at_imbalance() {
        let m = Logistic {
            weights: vec![0.0],
            bias: 1.0,
        };
        let f = vec![vec![0.0]; 10];
        let mut l = vec![Label::Pos; 10];
        l[..3].fill(Label::Neg);
        assert!((eval_logistic(&m, &f, &l).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn random_parameters_guess() {
        let mut rng = stream(5, 0);
        let n = 10_000;
        let f: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.sample(StandardNormal)]).collect();
        let l: Vec<Label> = (0..n)
            .map(|i| if i % 2 == 0 { Label::Neg } else { Label::Pos })
            .collect();
        let m = Logistic {
            weights: vec![0.7],
            bias: 0.0,
        };
        assert!((eval_logistic(&m, &f, &l).unwrap() - 0.5).abs() < 0.015);
    }

    #[test]
    fn gaussian_mixture_near_bayes() {
        // Bayes error of N(±β, I) is Q(|β|)
        let betas = [0.9, 1.0, 1.1];
        let norm = betas.iter().map(|b| b * b).sum::<f64>().sqrt();
        let mut rng = stream(21, 0);
        let mut draw = |n: usize| {
            let mut f = Vec::with_capacity(n);
            let mut l = Vec::with_capacity(n);
            for _ in 0..n {
                let y = if rng.random::<bool>() { Label::Pos } else { Label::Neg };
                f.push(
                    betas
                        .iter()
                        .map(|b| b * y.sign() + rng.sample::<f64, _>(StandardNormal))
                        .collect(),
                );
                l.push(y);
            }
            (f, l)
        };
        let (tf, tl) = draw(4000);
        let (ef, el) = draw(4000);
        let m = train_logistic(&tf, &tl, &LogisticOptions::default()).unwrap();
        let err = eval_logistic(&m, &ef, &el).unwrap();
        let bayes = gaussian_q(norm);
        let sd = (bayes * (1.0 - bayes) / 4000.0).sqrt();
        assert!((err - bayes).abs() < 3.0 * sd + 0.01, "{err} vs {bayes}");
    }

    #[test]
    fn shape_errors() {
        let m = Logistic {
            weights: vec![1.0, 2.0],
            bias: 0.0,
        };
        assert!(eval_logistic(&m, &[vec![1.0]], &[Label::Pos]).is_err());
        assert!(train_logistic(
            &[vec![1.0], vec![1.0, 2.0]],
            &[Label::Pos, Label::Neg],
            &LogisticOptions::default()
        )
        .is_err());
        assert!(train_logistic(&[], &[], &LogisticOptions::default()).is_err());
    }
}
