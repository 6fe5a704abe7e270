//! Hard-clustering baselines: agglomerative, sequential and deterministic IB.

use rand::seq::SliceRandom;
use rand::Rng;

use super::ba::cluster_statistics;
use super::channel::{Channel, Partition};
use crate::error::{Error, Result};
use crate::info::{entropy, DiscreteJoint};
use crate::point::{Params, Scheme, TradeoffPoint};
use crate::rng::stream;

/// Seq-IB stops after this many full passes even if points still move.
pub const SEQ_PASS_CAP: usize = 200;

/// Loss of `I(T;Y)` from merging two clusters: `(p_i + p_j)·JS_Π(cond_i ‖ cond_j)`.
pub fn js_merge_cost(p_i: f64, p_j: f64, cond_i: [f64; 2], cond_j: [f64; 2]) -> f64 {
    let total = p_i + p_j;
    if total <= 0.0 {
        return 0.0;
    }
    let (a, b) = (p_i / total, p_j / total);
    let mixed = [a * cond_i[0] + b * cond_j[0], a * cond_i[1] + b * cond_j[1]];
    let js = entropy(&mixed) - a * entropy(&cond_i) - b * entropy(&cond_j);
    total * js.max(0.0)
}

#[derive(Debug, Clone, Copy)]
struct Cluster {
    mass: f64,
    pos: f64,
}

impl Cluster {
    fn cond(&self) -> [f64; 2] {
        if self.mass > 0.0 {
            let q = (self.pos / self.mass).clamp(0.0, 1.0);
            [1.0 - q, q]
        } else {
            [0.5, 0.5]
        }
    }
}

fn check_m(joint: &DiscreteJoint, m: usize) -> Result<()> {
    if m == 0 || m > joint.len() {
        return Err(Error::invalid(format!("m = {m} outside 1..={}", joint.len())));
    }
    Ok(())
}

fn partition_point(joint: &DiscreteJoint, partition: &Partition, scheme: Scheme) -> TradeoffPoint {
    let (rate, relevance) = partition.information(joint);
    TradeoffPoint::new(rate, relevance, scheme, Params::Partition { m: partition.m })
}

/// Greedy merging from singletons down to each requested cluster count.
///
/// Ties go to the lexicographically smallest pair of current cluster indices.
pub fn agg_ib_path(joint: &DiscreteJoint, ms: &[usize]) -> Result<Vec<(Partition, TradeoffPoint)>> {
    for &m in ms {
        check_m(joint, m)?;
    }
    let mut clusters: Vec<Cluster> = joint
        .p_x
        .iter()
        .zip(&joint.p_y_given_x)
        .map(|(p, c)| Cluster {
            mass: *p,
            pos: p * c[1],
        })
        .collect();
    // members[k]: grid points in cluster k
    let mut members: Vec<Vec<usize>> = (0..joint.len()).map(|x| vec![x]).collect();
    let mut wanted: Vec<usize> = ms.to_vec();
    wanted.sort_unstable_by(|a, b| b.cmp(a));
    wanted.dedup();
    let mut snapshots = Vec::new();
    for target in wanted {
        while clusters.len() > target {
            let mut best = (f64::INFINITY, 0, 1);
            for i in 0..clusters.len() {
                for j in i + 1..clusters.len() {
                    let c = js_merge_cost(
                        clusters[i].mass,
                        clusters[j].mass,
                        clusters[i].cond(),
                        clusters[j].cond(),
                    );
                    if c < best.0 {
                        best = (c, i, j);
                    }
                }
            }
            let (_, i, j) = best;
            let absorbed = clusters.remove(j);
            clusters[i].mass += absorbed.mass;
            clusters[i].pos += absorbed.pos;
            let moved = members.remove(j);
            members[i].extend(moved);
        }
        let mut assignment = vec![0; joint.len()];
        for (k, group) in members.iter().enumerate() {
            for &x in group {
                assignment[x] = k;
            }
        }
        let partition = Partition { assignment, m: target };
        let point = partition_point(joint, &partition, Scheme::AggIb);
        snapshots.push((target, partition, point));
    }
    Ok(ms
        .iter()
        .map(|m| {
            let s = snapshots.iter().find(|s| s.0 == *m).expect("every m was visited");
            (s.1.clone(), s.2.clone())
        })
        .collect())
}

/// Agglomerative IB down to `m` clusters.
pub fn agg_ib(joint: &DiscreteJoint, m: usize) -> Result<(Partition, TradeoffPoint)> {
    agg_ib_path(joint, &[m]).map(|mut v| v.remove(0))
}

/// Sequential IB: random `m`-partition, then single-point reassignments.
pub fn seq_ib(joint: &DiscreteJoint, m: usize, seed: u64, restarts: usize) -> Result<(Partition, TradeoffPoint)> {
    check_m(joint, m)?;
    if restarts == 0 {
        return Err(Error::invalid("restarts must be at least 1"));
    }
    let mut best: Option<(Partition, TradeoffPoint)> = None;
    for r in 0..restarts {
        let mut rng = stream(seed, r as u64);
        let partition = seq_ib_run(joint, m, &mut rng).0;
        let point = partition_point(joint, &partition, Scheme::SeqIb);
        if best.as_ref().is_none_or(|b| point.relevance > b.1.relevance) {
            best = Some((partition, point));
        }
    }
    Ok(best.expect("restarts >= 1"))
}

/// One Seq-IB run; also returns the initial random partition.
pub(crate) fn seq_ib_run(joint: &DiscreteJoint, m: usize, rng: &mut impl Rng) -> (Partition, Partition) {
    let n = joint.len();
    let mut assignment: Vec<usize> = (0..n).map(|_| rng.random_range(0..m)).collect();
    let initial = Partition {
        assignment: assignment.clone(),
        m,
    };
    let mut clusters = vec![Cluster { mass: 0.0, pos: 0.0 }; m];
    for (x, c) in assignment.iter().enumerate() {
        clusters[*c].mass += joint.p_x[x];
        clusters[*c].pos += joint.p_x[x] * joint.p_y_given_x[x][1];
    }
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..SEQ_PASS_CAP {
        order.shuffle(rng);
        let mut moved = false;
        for &x in &order {
            let from = assignment[x];
            let (px, cx) = (joint.p_x[x], joint.p_y_given_x[x]);
            clusters[from].mass -= px;
            clusters[from].pos -= px * cx[1];
            if clusters[from].mass < 1e-15 {
                clusters[from] = Cluster { mass: 0.0, pos: 0.0 };
            }
            let mut target = from;
            let mut best = js_merge_cost(px, clusters[from].mass, cx, clusters[from].cond());
            for (k, c) in clusters.iter().enumerate() {
                let cost = js_merge_cost(px, c.mass, cx, c.cond());
                if cost < best {
                    best = cost;
                    target = k;
                }
            }
            clusters[target].mass += px;
            clusters[target].pos += px * cx[1];
            if target != from {
                assignment[x] = target;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    (Partition { assignment, m }, initial)
}

/// Deterministic IB: hard assignments `argmax_t ln P_T(t) - λ KL(p(y|x) ‖ p(y|t))`.
pub fn det_ib(
    joint: &DiscreteJoint,
    lambda: f64,
    t_size: usize,
    seed: u64,
    max_iter: usize,
) -> Result<(Channel, TradeoffPoint)> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain("lambda", lambda, "(0, inf)"));
    }
    if t_size < 2 {
        return Err(Error::invalid(format!("t_size = {t_size}, need at least 2")));
    }
    let mut rng = stream(seed, 0);
    let mut assignment: Vec<usize> = (0..joint.len()).map(|_| rng.random_range(0..t_size)).collect();
    let mut converged = false;
    let mut iterations = 0;
    let mut rows = vec![0.0; joint.len() * t_size];
    while iterations < max_iter {
        iterations += 1;
        rows.iter_mut().for_each(|v| *v = 0.0);
        for (x, t) in assignment.iter().enumerate() {
            rows[x * t_size + t] = 1.0;
        }
        let (p_t, log_cond) = cluster_statistics(joint, &rows, t_size);
        let mut changed = false;
        for (x, cond) in joint.p_y_given_x.iter().enumerate() {
            let self_term = -entropy(cond);
            let mut best = (f64::NEG_INFINITY, 0);
            for t in 0..t_size {
                if p_t[t] <= 0.0 {
                    continue;
                }
                let kl = self_term - cond[0] * log_cond[t][0] - cond[1] * log_cond[t][1];
                let score = p_t[t].ln() - lambda * kl;
                if score > best.0 {
                    best = (score, t);
                }
            }
            if best.1 != assignment[x] {
                assignment[x] = best.1;
                changed = true;
            }
        }
        if !changed {
            converged = true;
            break;
        }
    }
    let partition = Partition { assignment, m: t_size };
    let (rate, relevance) = partition.information(joint);
    let mut point = TradeoffPoint::new(
        rate,
        relevance,
        Scheme::DetIb,
        Params::Lagrange {
            lambda,
            t_size,
            iterations,
        },
    );
    point.converged = converged;
    Ok((partition.to_channel(), point))
}
