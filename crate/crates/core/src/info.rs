//! Gaussian functions, the binary Gaussian mixture, and information measures.
//!
//! All information quantities are in nats.

use std::f64::consts::{LN_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

/// Probabilities below this are treated as exact zeros before taking logs.
pub const PROB_FLOOR: f64 = 1e-300;

/// Nats per bit.
pub const NATS_PER_BIT: f64 = LN_2;

pub fn bits(nats: f64) -> f64 {
    nats / LN_2
}

pub fn nats(bits: f64) -> f64 {
    bits * LN_2
}

/// Standard normal upper tail `Q(t) = P(Z > t)`.
pub fn gaussian_q(t: f64) -> f64 {
    0.5 * libm::erfc(t / SQRT_2)
}

/// Standard normal density.
pub fn gaussian_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// `-p ln p` with the `0 ln 0 = 0` convention.
pub fn neg_xlogx(p: f64) -> f64 {
    if p <= PROB_FLOOR {
        0.0
    } else {
        -p * p.ln()
    }
}

/// Binary entropy in nats.
pub fn binary_entropy(q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain("q", q, "[0, 1]"));
    }
    Ok(neg_xlogx(q) + neg_xlogx(1.0 - q))
}

/// Shannon entropy of a probability vector.
pub fn entropy(p: &[f64]) -> f64 {
    p.iter().map(|&v| neg_xlogx(v)).sum()
}

/// `ln(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Class label of the symmetric binary source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Neg => -1.0,
            Label::Pos => 1.0,
        }
    }

    /// Index into `[P(Y=-1), P(Y=+1)]` pairs.
    pub fn index(self) -> usize {
        match self {
            Label::Neg => 0,
            Label::Pos => 1,
        }
    }

    /// `Pos` for nonnegative values.
    pub fn from_sign(v: f64) -> Self {
        if v >= 0.0 {
            Label::Pos
        } else {
            Label::Neg
        }
    }
}

/// `X = βY + N(0, 1)` with `Y` uniform on `{-1, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureModel {
    beta: f64,
}

impl MixtureModel {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::domain("beta", beta, "[0, inf)"));
        }
        Ok(MixtureModel { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `p(x | y)`.
    pub fn conditional_density(&self, x: f64, y: Label) -> f64 {
        gaussian_pdf(x - self.beta * y.sign())
    }

    /// Mixture density `p(x)`.
    pub fn density(&self, x: f64) -> f64 {
        0.5 * (gaussian_pdf(x - self.beta) + gaussian_pdf(x + self.beta))
    }

    /// Mixture CDF `1 - [Q(x-β) + Q(x+β)]/2`.
    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - 0.5 * (gaussian_q(x - self.beta) + gaussian_q(x + self.beta))
    }

    /// Posterior `P(Y=+1 | x)`.
    pub fn posterior_pos(&self, x: f64) -> f64 {
        let z = 2.0 * self.beta * x;
        if z >= 0.0 {
            1.0 / (1.0 + (-z).exp())
        } else {
            let e = z.exp();
            e / (1.0 + e)
        }
    }
}

/// Gridded joint of `(X, Y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteJoint {
    pub x_grid: Vec<f64>,
    pub p_x: Vec<f64>,
    /// `[P(Y=-1|x), P(Y=+1|x)]` per grid point.
    pub p_y_given_x: Vec<[f64; 2]>,
}

impl DiscreteJoint {
    pub fn len(&self) -> usize {
        self.x_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_grid.is_empty()
    }

    /// Marginal `[P(Y=-1), P(Y=+1)]`.
    pub fn p_y(&self) -> [f64; 2] {
        let mut out = [0.0; 2];
        for (p, c) in self.p_x.iter().zip(&self.p_y_given_x) {
            out[0] += p * c[0];
            out[1] += p * c[1];
        }
        out
    }

    /// `I(X;Y)` of the gridded joint.
    pub fn mi_xy(&self) -> f64 {
        let p_y = self.p_y();
        let h_y_given_x: f64 = self
            .p_x
            .iter()
            .zip(&self.p_y_given_x)
            .map(|(p, c)| p * entropy(c))
            .sum();
        (entropy(&p_y) - h_y_given_x).max(0.0)
    }
}

/// Uniform grid on `[-β-span, β+span]` with mixture-weighted cells.
pub fn discretize(model: &MixtureModel, n_points: usize, span: f64) -> Result<DiscreteJoint> {
    if n_points < 8 {
        return Err(Error::invalid(format!("n_points = {n_points}, need at least 8")));
    }
    if !(span > 0.0 && span.is_finite()) {
        return Err(Error::domain("span", span, "(0, inf)"));
    }
    let lo = -model.beta() - span;
    let hi = model.beta() + span;
    let step = (hi - lo) / (n_points - 1) as f64;
    let x_grid: Vec<f64> = (0..n_points).map(|i| lo + step * i as f64).collect();
    let mut p_x: Vec<f64> = x_grid.iter().map(|&x| model.density(x) * step).collect();
    let total: f64 = p_x.iter().sum();
    p_x.iter_mut().for_each(|p| *p /= total);
    let p_y_given_x = x_grid
        .iter()
        .map(|&x| {
            let pos = model.posterior_pos(x);
            [1.0 - pos, pos]
        })
        .collect();
    Ok(DiscreteJoint {
        x_grid,
        p_x,
        p_y_given_x,
    })
}

fn check_distribution(p: &[f64], what: &str) -> Result<()> {
    let sum: f64 = p.iter().sum();
    if p.iter().any(|v| !(*v >= -1e-12)) || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "{what} is not a probability vector (sum {sum})"
        )));
    }
    Ok(())
}

/// `I(X;T)` for input weights `p_x` and channel rows `P(t|x)`.
pub fn mi_discrete<R: AsRef<[f64]>>(p_x: &[f64], rows: &[R]) -> Result<f64> {
    if p_x.len() != rows.len() {
        return Err(Error::Dimension {
            expected: p_x.len(),
            got: rows.len(),
        });
    }
    check_distribution(p_x, "input distribution")?;
    let width = rows.first().map_or(0, |r| r.as_ref().len());
    let mut p_t = vec![0.0; width];
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != width {
            return Err(Error::Dimension {
                expected: width,
                got: row.len(),
            });
        }
        check_distribution(row, &format!("channel row {i}"))?;
        for (acc, v) in p_t.iter_mut().zip(row) {
            *acc += p_x[i] * v;
        }
    }
    Ok(mi_from_rows(p_x, rows.iter().map(|r| r.as_ref()), &p_t))
}

/// Unchecked core of [`mi_discrete`] given the output marginal.
pub(crate) fn mi_from_rows<'a>(p_x: &[f64], rows: impl Iterator<Item = &'a [f64]>, p_t: &[f64]) -> f64 {
    let mut total = 0.0;
    for (px, row) in p_x.iter().zip(rows) {
        if *px <= PROB_FLOOR {
            continue;
        }
        for (pt_x, pt) in row.iter().zip(p_t) {
            if *pt_x > PROB_FLOOR && *pt > PROB_FLOOR {
                total += px * pt_x * (pt_x / pt).ln();
            }
        }
    }
    total.max(0.0)
}

/// `I(Y;T)` for a binary uniform `Y` given the two conditionals `P(t|Y=-1)`, `P(t|Y=+1)`.
pub fn binary_input_mi(neg: &[f64], pos: &[f64]) -> f64 {
    let mut total = 0.0;
    for (a, b) in neg.iter().zip(pos) {
        let mean = 0.5 * (a + b);
        if *a > PROB_FLOOR {
            total += 0.5 * a * (a / mean).ln();
        }
        if *b > PROB_FLOOR {
            total += 0.5 * b * (b / mean).ln();
        }
    }
    total.max(0.0)
}

/// Continuous `I(X;Y) = h(X) - h(X|Y)`.
///
/// Evaluated as `ln 2 - E[H(Y|X)]`; the symmetric mixture lets the
/// expectation run over the `Y=+1` component only.
pub fn mi_xy(model: &MixtureModel) -> f64 {
    let b = model.beta();
    if b == 0.0 {
        return 0.0;
    }
    let integrand = |x: f64| {
        let z = 2.0 * b * x;
        let s = model.posterior_pos(x);
        let h = s * softplus(-z) + (1.0 - s) * softplus(z);
        gaussian_pdf(x - b) * (LN_2 - h)
    };
    quad::integrate(integrand, b - 40.0, b + 40.0, 1.0, 1e-12).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_function_values() {
        assert_eq!(gaussian_q(0.0), 0.5);
        // 1 - Φ(1) from the erfc series: 0.15865525393145705
        assert!((gaussian_q(1.0) - 0.158_655_253_931_457_05).abs() < 1e-15);
        for x in [0.3, 1.7, 4.0] {
            assert!((gaussian_q(x) + gaussian_q(-x) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn entropy_values() {
        assert!((binary_entropy(0.5).unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.2).unwrap() - 0.500_402_423_538_187_9).abs() < 1e-14);
        assert!(binary_entropy(1.2).is_err());
    }

    #[test]
    fn conditional_density_values() {
        let m = MixtureModel::new(1.0).unwrap();
        assert!((m.conditional_density(1.0, Label::Pos) - 0.398_942_280_401_432_7).abs() < 1e-15);
        assert_eq!(
            m.conditional_density(0.0, Label::Pos),
            m.conditional_density(0.0, Label::Neg)
        );
        let m = MixtureModel::new(0.6).unwrap();
        assert!((m.conditional_density(2.0, Label::Neg) - 0.013_582_969_233_685_6).abs() < 1e-12);
        assert!(MixtureModel::new(-0.1).is_err());
    }

    #[test]
    fn discretize_grid_and_degenerate_mixture() {
        let m = MixtureModel::new(1.0).unwrap();
        let j = discretize(&m, 200, 5.0).unwrap();
        assert_eq!(j.len(), 200);
        assert_eq!(j.x_grid[0], -6.0);
        assert!((j.x_grid[199] - 6.0).abs() < 1e-12);
        assert!((j.p_x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(j.x_grid.windows(2).all(|w| w[0] < w[1]));

        let j0 = discretize(&MixtureModel::new(0.0).unwrap(), 50, 3.0).unwrap();
        assert!(j0.p_y_given_x.iter().all(|c| c[1] == 0.5));
        assert!(discretize(&m, 7, 5.0).is_err());
    }

    #[test]
    fn discretized_mi_close_to_continuous() {
        let m = MixtureModel::new(1.0).unwrap();
        let j = discretize(&m, 400, 6.0).unwrap();
        assert!((j.mi_xy() - 0.3368).abs() < 2e-3);
    }

    #[test]
    fn mi_discrete_reference_channels() {
        let id: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let u = [0.25; 4];
        assert!((mi_discrete(&u, &id).unwrap() - 4f64.ln()).abs() < 1e-15);
        let flat = vec![vec![0.1, 0.6, 0.3]; 4];
        assert!(mi_discrete(&u, &flat).unwrap().abs() < 1e-15);
        let e = 0.11;
        let bsc = [[1.0 - e, e], [e, 1.0 - e]];
        let want = LN_2 - binary_entropy(e).unwrap();
        assert!((mi_discrete(&[0.5, 0.5], &bsc).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.346_5).abs() < 2e-4);
        assert!(mi_discrete(&[0.5, 0.6], &bsc).is_err());
    }

    #[test]
    fn continuous_mi_reference() {
        assert_eq!(mi_xy(&MixtureModel::new(0.0).unwrap()), 0.0);
        let one = mi_xy(&MixtureModel::new(1.0).unwrap());
        let root2 = mi_xy(&MixtureModel::new(2f64.sqrt()).unwrap());
        let six = mi_xy(&MixtureModel::new(0.6).unwrap());
        // 50-digit quadrature oracle
        assert!((one - 0.336_830_820_346_831_6).abs() < 1e-9, "{one}");
        assert!((root2 - 0.500_072_136_066_844_9).abs() < 1e-9, "{root2}");
        assert!((six - 0.153_243_737_106_041_7).abs() < 1e-9, "{six}");
    }
}
