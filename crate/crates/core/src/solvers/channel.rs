use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{entropy, mi_from_rows, DiscreteJoint, PROB_FLOOR};

/// Row-stochastic `P(t|x)`, one row per grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    rows: Vec<f64>,
    t_size: usize,
}

impl Channel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let t_size = rows.first().map_or(0, Vec::len);
        if t_size == 0 {
            return Err(Error::invalid("channel needs at least one row and column"));
        }
        let mut flat = Vec::with_capacity(rows.len() * t_size);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != t_size {
                return Err(Error::Dimension {
                    expected: t_size,
                    got: r.len(),
                });
            }
            let s: f64 = r.iter().sum();
            if r.iter().any(|v| *v < 0.0) || (s - 1.0).abs() > 1e-9 {
                return Err(Error::invalid(format!("row {i} is not a distribution")));
            }
            flat.extend_from_slice(r);
        }
        Ok(Channel { rows: flat, t_size })
    }

    pub(crate) fn from_flat(rows: Vec<f64>, t_size: usize) -> Self {
        debug_assert_eq!(rows.len() % t_size, 0);
        Channel { rows, t_size }
    }

    pub fn t_size(&self) -> usize {
        self.t_size
    }

    pub fn input_size(&self) -> usize {
        self.rows.len() / self.t_size
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.rows[x * self.t_size..(x + 1) * self.t_size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.rows.chunks_exact(self.t_size)
    }

    pub fn is_row_stochastic(&self, tol: f64) -> bool {
        self.rows()
            .all(|r| r.iter().all(|v| *v >= 0.0) && (r.iter().sum::<f64>() - 1.0).abs() <= tol)
    }

    /// Output marginal under the joint's `p_x`.
    pub fn p_t(&self, joint: &DiscreteJoint) -> Vec<f64> {
        let mut p_t = vec![0.0; self.t_size];
        for (px, row) in joint.p_x.iter().zip(self.rows()) {
            for (acc, v) in p_t.iter_mut().zip(row) {
                *acc += px * v;
            }
        }
        p_t
    }

    /// `(I(X;T), I(Y;T))` under the joint.
    pub fn information(&self, joint: &DiscreteJoint) -> (f64, f64) {
        let p_t = self.p_t(joint);
        let rate = mi_from_rows(&joint.p_x, self.rows(), &p_t);
        (rate, relevance(joint, self, &p_t))
    }
}

fn relevance(joint: &DiscreteJoint, channel: &Channel, p_t: &[f64]) -> f64 {
    // P(y, t) = Σ_x p(x) p(y|x) p(t|x)
    let t = channel.t_size;
    let mut joint_yt = vec![[0.0f64; 2]; t];
    for ((px, cond), row) in joint.p_x.iter().zip(&joint.p_y_given_x).zip(channel.rows()) {
        for (acc, v) in joint_yt.iter_mut().zip(row) {
            acc[0] += px * cond[0] * v;
            acc[1] += px * cond[1] * v;
        }
    }
    let p_y = joint.p_y();
    let mut total = 0.0;
    for (yt, pt) in joint_yt.iter().zip(p_t) {
        for y in 0..2 {
            if yt[y] > PROB_FLOOR {
                total += yt[y] * (yt[y] / (pt * p_y[y])).ln();
            }
        }
    }
    total.max(0.0)
}

/// Hard assignment of grid points to clusters `0..m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub assignment: Vec<usize>,
    pub m: usize,
}

impl Partition {
    pub fn to_channel(&self) -> Channel {
        let mut rows = vec![0.0; self.assignment.len() * self.m];
        for (x, c) in self.assignment.iter().enumerate() {
            rows[x * self.m + c] = 1.0;
        }
        Channel::from_flat(rows, self.m)
    }

    /// `(H(T), I(Y;T))`; a deterministic map has `I(X;T) = H(T)`.
    pub fn information(&self, joint: &DiscreteJoint) -> (f64, f64) {
        let mut mass = vec![0.0; self.m];
        let mut pos = vec![0.0; self.m];
        for (x, c) in self.assignment.iter().enumerate() {
            mass[*c] += joint.p_x[x];
            pos[*c] += joint.p_x[x] * joint.p_y_given_x[x][1];
        }
        (entropy(&mass), partition_relevance(&mass, &pos, joint.p_y()))
    }

    /// Number of clusters with at least one member.
    pub fn occupied(&self) -> usize {
        let mut seen = vec![false; self.m];
        self.assignment.iter().for_each(|c| seen[*c] = true);
        seen.iter().filter(|s| **s).count()
    }
}

/// `H(Y) - Σ_c P(c) H(Y|c)` from cluster masses and `Y=+1` masses.
pub(crate) fn partition_relevance(mass: &[f64], pos_mass: &[f64], p_y: [f64; 2]) -> f64 {
    let conditional: f64 = mass
        .iter()
        .zip(pos_mass)
        .filter(|(m, _)| **m > PROB_FLOOR)
        .map(|(m, p)| {
            let q = (p / m).clamp(0.0, 1.0);
            m * entropy(&[q, 1.0 - q])
        })
        .sum();
    (entropy(&p_y) - conditional).max(0.0)
}
