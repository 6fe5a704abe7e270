//! Relevance–complexity tradeoffs of the Information Bottleneck for a
//! symmetric binary source observed as `X = βY + N(0, 1)`.
//!
//! * [`info`]: Gaussian functions, the mixture model, gridding, mutual information.
//! * [`schemes`]: closed-form achievable channels (two-level, multi-level
//!   deterministic, soft tanh) and their pointwise maximum.
//! * [`solvers`]: Blahut–Arimoto reference curves and the agglomerative,
//!   sequential, deterministic and information-dropout baselines.
//! * [`classify`]: sign-estimator error of each scheme, Monte-Carlo checks,
//!   logistic readout.
//! * [`vector`]: per-coordinate schemes on `X = βY + N(0, I)`, exact joint
//!   relevance, jackknife MI.
//! * [`data`]: IDX/CSV ingestion, projection, per-class whitening, splits.
//! * [`cli`]: configuration and CSV/JSON export behind the `gmib` binary.
//!
//! Information is in nats throughout; [`info::bits`] converts.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod cli;
pub mod data;
pub mod error;
pub mod info;
pub mod point;
pub mod quad;
pub mod rng;
pub mod schemes;
pub mod solvers;
pub mod vector;

pub use error::{Error, Result};
pub use info::{DiscreteJoint, Label, MixtureModel};
pub use point::{Params, Scheme, TradeoffPoint};
