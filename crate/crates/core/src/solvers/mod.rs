//! Numerical reference solutions and baselines on the gridded joint.

mod ba;
mod channel;
mod clustering;
mod dropout;

pub use ba::{ba_curve, ba_solve, default_lambdas, BaOptions, BaSolution};
pub use channel::{Channel, Partition};
pub use clustering::{agg_ib, agg_ib_path, det_ib, js_merge_cost, seq_ib, SEQ_PASS_CAP};
pub use dropout::{
    best_within, default_weight_grid, info_dropout_curve, info_dropout_point, weight_grid, DropoutChannel,
    DropoutOptions,
};
