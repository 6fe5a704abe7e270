//! Tradeoff points and scheme tags.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Tolerance used when checking the relevance bounds of a point.
pub const BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    TwoLevel,
    DetQuant,
    SoftLb1,
    SoftLb2,
    Unified,
    BlahutArimoto,
    AggIb,
    SeqIb,
    DetIb,
    InfoDropout,
    Vector,
}

impl Scheme {
    pub const ALL: [Scheme; 11] = [
        Scheme::TwoLevel,
        Scheme::DetQuant,
        Scheme::SoftLb1,
        Scheme::SoftLb2,
        Scheme::Unified,
        Scheme::BlahutArimoto,
        Scheme::AggIb,
        Scheme::SeqIb,
        Scheme::DetIb,
        Scheme::InfoDropout,
        Scheme::Vector,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Scheme::TwoLevel => "two-level",
            Scheme::DetQuant => "det-quant",
            Scheme::SoftLb1 => "soft-lb1",
            Scheme::SoftLb2 => "soft-lb2",
            Scheme::Unified => "unified",
            Scheme::BlahutArimoto => "ba",
            Scheme::AggIb => "agg-ib",
            Scheme::SeqIb => "seq-ib",
            Scheme::DetIb => "det-ib",
            Scheme::InfoDropout => "info-dropout",
            Scheme::Vector => "vector",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::ALL
            .into_iter()
            .find(|v| v.tag() == s)
            .ok_or_else(|| Error::invalid(format!("unknown scheme tag `{s}`")))
    }
}

/// Scheme-specific parameters behind a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Params {
    None,
    TwoLevel {
        q: f64,
        p: f64,
    },
    DetQuant {
        levels: usize,
        delta: f64,
    },
    Soft {
        alpha: f64,
    },
    Lagrange {
        lambda: f64,
        t_size: usize,
        iterations: usize,
    },
    Partition {
        m: usize,
    },
    Dropout {
        w1: f64,
        w2: f64,
        optimal: bool,
    },
    Vector {
        winners: Vec<Scheme>,
        exact: bool,
        stderr: f64,
    },
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Params::None => Ok(()),
            Params::TwoLevel { q, p } => write!(f, "q={q:.9};p={p:.9}"),
            Params::DetQuant { levels, delta } => write!(f, "L={levels};delta={delta:.9}"),
            Params::Soft { alpha } => write!(f, "alpha={alpha:.9}"),
            Params::Lagrange {
                lambda,
                t_size,
                iterations,
            } => write!(f, "lambda={lambda};T={t_size};iter={iterations}"),
            Params::Partition { m } => write!(f, "m={m}"),
            Params::Dropout { w1, w2, optimal } => {
                write!(f, "w1={w1:.2};w2={w2:.2}")?;
                if *optimal {
                    f.write_str(";optimal")?;
                }
                Ok(())
            }
            Params::Vector { winners, exact, stderr } => {
                let tags: Vec<&str> = winners.iter().map(|s| s.tag()).collect();
                write!(f, "winners={}", tags.join("+"))?;
                if *exact {
                    f.write_str(";exact")
                } else {
                    write!(f, ";mc_stderr={stderr:.3e}")
                }
            }
        }
    }
}

/// One `(I(X;T), I(Y;T))` pair in nats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    pub rate: f64,
    pub relevance: f64,
    pub scheme: Scheme,
    pub params: Params,
    /// False when an iterative solver stopped at its iteration cap.
    pub converged: bool,
}

impl TradeoffPoint {
    pub fn new(rate: f64, relevance: f64, scheme: Scheme, params: Params) -> Self {
        TradeoffPoint {
            rate,
            relevance,
            scheme,
            params,
            converged: true,
        }
    }

    /// `0 ≤ relevance ≤ min(rate, ln 2) + tol`.
    pub fn within_bounds(&self, tol: f64) -> bool {
        self.relevance >= -tol && self.relevance <= self.rate.min(LN_2) + tol
    }
}

/// Keeps the points not dominated in `(rate ↓, relevance ↑)`, sorted by rate.
pub fn upper_frontier(mut points: Vec<TradeoffPoint>, tol: f64) -> Vec<TradeoffPoint> {
    points.sort_by(|a, b| a.rate.total_cmp(&b.rate).then(b.relevance.total_cmp(&a.relevance)));
    let mut out: Vec<TradeoffPoint> = Vec::new();
    for p in points {
        if out.last().is_none_or(|last| p.relevance > last.relevance + tol) {
            out.push(p);
        }
    }
    out
}

/// Linear interpolation of relevance at `rate` along a rate-sorted curve; clamps beyond the ends.
pub fn interpolate(curve: &[(f64, f64)], rate: f64) -> Option<f64> {
    let first = curve.first()?;
    let last = curve.last()?;
    if rate <= first.0 {
        return Some(first.1);
    }
    if rate >= last.0 {
        return Some(last.1);
    }
    let k = curve.partition_point(|p| p.0 <= rate);
    let (a, b) = (curve[k - 1], curve[k]);
    if b.0 == a.0 {
        return Some(a.1.max(b.1));
    }
    Some(a.1 + (b.1 - a.1) * (rate - a.0) / (b.0 - a.0))
}
