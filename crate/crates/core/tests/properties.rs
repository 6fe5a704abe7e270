//! Randomised invariants of the schemes, solvers and data transforms.

mod common;

use std::f64::consts::LN_2;

use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

use common::*;
use gmib::classify::{err_det_quant, err_soft_at, err_two_level, err_unified};
use gmib::data::{class_whiten, split, LabeledDataset};
use gmib::info::{bits, discretize, gaussian_q, nats};
use gmib::rng::stream;
use gmib::schemes::{scheme_channels, unified};
use gmib::solvers::ba_solve;
use gmib::vector::{chain_rule_check, equal_allocation, jackknife_mi, VectorModel};
use gmib::Label;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn gmm(n: usize, betas: &[f64], seed: u64) -> LabeledDataset {
    let mut rng = stream(seed, 0);
    let mut vectors = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let y = if i % 2 == 0 { Label::Neg } else { Label::Pos };
        vectors.push(
            betas
                .iter()
                .map(|b| b * y.sign() + rng.sample::<f64, _>(StandardNormal))
                .collect(),
        );
        labels.push(y);
    }
    LabeledDataset::new(vectors, labels).unwrap()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn relevance_within_bounds(r in 0.0..5.0f64, beta in 0.01..5.0f64) {
        prop_assert!(check_bounds(r, beta).is_ok(), "{:?}", check_bounds(r, beta));
    }

    #[test]
    fn unified_dominates_each_scheme(r in 0.0..4.0f64, beta in 0.05..4.0f64) {
        let m = model(beta);
        let u = unified(r, &m).unwrap();
        for (p, _) in scheme_channels(r, &m).unwrap() {
            prop_assert!(u.relevance >= p.relevance - 1e-12, "{} beats unified", p.scheme);
        }
    }

    #[test]
    fn quantizer_entropy_matches_budget(r in 0.0..6.0f64, beta in 0.01..5.0f64) {
        let (h, mass) = quantizer_residuals(r, beta);
        prop_assert!(h < 1e-8, "H(T) residual {h:e}");
        prop_assert!(mass < 1e-9, "bin mass residual {mass:e}");
    }

    #[test]
    fn gains_solve_their_equations(r in 0.0..8.0f64, beta in 0.01..5.0f64) {
        let (lb1, lb2) = gain_residuals(r, beta);
        prop_assert!(lb1 < 1e-8);
        prop_assert!(lb2.unwrap_or(0.0) < 1e-8);
    }

    #[test]
    fn soft_rate_respects_budget(r in 0.01..5.0f64, beta in 0.05..4.0f64) {
        prop_assert!(soft_rate_excess(r, beta) <= 1e-4);
    }

    #[test]
    fn gain_conditions_hold(beta in 1e-3..5.0f64) {
        let (margin, disc) = gain_conditions(beta);
        prop_assert!(margin > 0.0 && disc >= 0.0);
    }

    #[test]
    fn two_level_identity_holds(r in 0.0..LN_2, beta in 0.01..5.0f64) {
        prop_assert!(two_level_identity(r, beta) < 1e-12);
    }

    #[test]
    fn errors_are_probabilities_below_half(r in 0.0..4.0f64, beta in 0.05..4.0f64) {
        let m = model(beta);
        let mut errors = vec![err_det_quant(r, &m).unwrap(), err_soft_at(r, &m).unwrap(), err_unified(r, &m).unwrap()];
        if r <= LN_2 {
            errors.push(err_two_level(r, &m).unwrap());
        }
        for e in errors {
            prop_assert!(e.is_plausible(), "{e:?}");
            prop_assert!(e.error >= gaussian_q(beta) - 1e-9, "{e:?} beats the Bayes error");
        }
    }

    #[test]
    fn two_level_error_falls_with_separation(r in 0.0..LN_2, b in 0.05..3.0f64, db in 0.0..1.0f64) {
        let lo = err_two_level(r, &model(b)).unwrap().error;
        let hi = err_two_level(r, &model(b + db)).unwrap().error;
        prop_assert!(hi <= lo + 1e-12);
    }

    #[test]
    fn units_round_trip(x in 0.0..100.0f64) {
        prop_assert!((bits(nats(x)) - x).abs() <= 1e-12 * x.max(1.0));
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn ba_lagrangian_never_increases(beta in 0.3..2.5f64, lambda in 1.0..40.0f64, t in 2usize..10, seed in 0u64..1000) {
        let joint = discretize(&model(beta), 100, 5.0).unwrap();
        let sol = ba_solve(&joint, lambda, t, seed, 1e-10, 1000).unwrap();
        prop_assert!(sol.trace.windows(2).all(|w| w[1] <= w[0] + 1e-10));
        prop_assert!(sol.point.relevance <= sol.point.rate + 1e-10);
    }

    #[test]
    fn chain_rule_holds(
        betas in prop::collection::vec(0.2..2.0f64, 1..=3),
        per_coord in 0.1..3.0f64,
        seed in 0u64..1000,
    ) {
        let d = betas.len();
        let alloc = equal_allocation(per_coord * d as f64, d).unwrap();
        let c = chain_rule_check(&VectorModel::new(betas).unwrap(), &alloc, 4000, seed).unwrap();
        prop_assert!(c.holds, "{c:?}");
    }

    #[test]
    fn jackknife_is_symmetric(rho in -0.9..0.9f64, bins in 2usize..8, seed in 0u64..1000) {
        let mut rng = stream(seed, 0);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for _ in 0..500 {
            let u: f64 = rng.sample(StandardNormal);
            let v: f64 = rng.sample(StandardNormal);
            a.push(vec![u]);
            b.push(vec![rho * u + (1.0 - rho * rho).sqrt() * v]);
        }
        let ab = jackknife_mi(&a, &b, bins).unwrap();
        let ba = jackknife_mi(&b, &a, bins).unwrap();
        // Same cells either way; only summation order differs, and the
        // jackknife combination scales that rounding by about n.
        prop_assert!((ab.estimate - ba.estimate).abs() < 1e-9);
        prop_assert!((ab.stderr - ba.stderr).abs() < 1e-9);
    }

    #[test]
    fn whitening_is_idempotent(
        betas in prop::collection::vec(0.1..2.0f64, 1..=4),
        n in 40usize..400,
        seed in 0u64..1000,
    ) {
        let once = class_whiten(&gmm(n, &betas, seed)).unwrap();
        let twice = class_whiten(&once).unwrap();
        for (a, b) in once.vectors.iter().zip(&twice.vectors) {
            for (x, y) in a.iter().zip(b) {
                prop_assert!((x - y).abs() < 1e-6, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn split_partitions_each_class(n in 4usize..300, fraction in 0.1..0.9f64, seed in 0u64..1000) {
        let data = gmm(n, &[1.0], seed);
        let (train, test) = split(&data, fraction, seed).unwrap();
        prop_assert_eq!(train.len() + test.len(), n);
        for label in [Label::Neg, Label::Pos] {
            prop_assert_eq!(train.class_count(label) + test.class_count(label), data.class_count(label));
        }
        let mut all: Vec<Vec<f64>> = train.vectors.iter().chain(&test.vectors).cloned().collect();
        let mut orig = data.vectors.clone();
        all.sort_by(|a, b| a[0].total_cmp(&b[0]));
        orig.sort_by(|a, b| a[0].total_cmp(&b[0]));
        prop_assert_eq!(all, orig);
    }
}
