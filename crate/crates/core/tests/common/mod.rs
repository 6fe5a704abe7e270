//! Reference tables and checks shared by the integration suites.
#![allow(dead_code)]
// Tabulated values that happen to look like log10(2).
#![allow(clippy::approx_constant)]

use std::f64::consts::{LN_2, SQRT_2};

use gmib::info::{binary_entropy, entropy, mi_xy};
use gmib::schemes::{
    alpha_lb1, alpha_lb2, build_quantizer, f_beta, g_beta, i1, scheme_channels, soft_rate_exact, target_masses, unified,
};
use gmib::MixtureModel;

/// Blahut–Arimoto tradeoff rows `(I(X;T), I(Y;T))` in bits, per β.
#[rustfmt::skip]
pub const BA_06: &[(f64, f64)] = &[
    (0.0000, 0.0000), (0.1149, 0.0301), (0.3405, 0.0810), (0.8077, 0.1482), (1.0976, 0.1720),
    (1.3077, 0.1842), (1.4732, 0.1916), (1.6078, 0.1966), (1.7214, 0.2001), (1.8202, 0.2027),
    (1.9070, 0.2048), (1.9848, 0.2064), (2.0550, 0.2077), (2.1191, 0.2089), (2.1780, 0.2098),
    (2.2325, 0.2106), (2.2832, 0.2113), (2.3306, 0.2119), (2.3751, 0.2125), (2.4170, 0.2129),
    (2.4566, 0.2134), (2.4942, 0.2137),
];

#[rustfmt::skip]
pub const BA_1: &[(f64, f64)] = &[
    (0.0000, 0.0000), (0.2115, 0.1113), (0.6565, 0.3010), (0.7863, 0.3392), (0.8457, 0.3526),
    (1.2974, 0.4196), (1.5531, 0.4407), (1.7396, 0.4515), (1.8876, 0.4582), (2.0089, 0.4626),
    (2.1128, 0.4658), (2.2038, 0.4682), (2.2844, 0.4701), (2.3572, 0.4717), (2.4232, 0.4729),
    (2.4837, 0.4740), (2.5396, 0.4749), (2.5915, 0.4757), (2.6400, 0.4763), (2.6855, 0.4769),
    (2.7282, 0.4774), (2.7687, 0.4779), (2.8070, 0.4783), (2.8434, 0.4787),
];

#[rustfmt::skip]
pub const BA_SQRT2: &[(f64, f64)] = &[
    (0.0000, 0.0000), (0.4778, 0.3465), (0.7902, 0.5329), (0.8445, 0.5587), (0.8777, 0.5727),
    (0.8995, 0.5810), (0.9145, 0.5862), (0.9253, 0.5897), (0.9333, 0.5921), (0.9396, 0.5938),
    (0.9549, 0.5977), (1.0000, 0.6087), (1.0380, 0.6174), (1.0702, 0.6243), (1.0980, 0.6300),
    (1.3868, 0.6714), (1.5669, 0.6861), (1.7019, 0.6939), (1.8107, 0.6988), (1.9032, 0.7022),
    (1.9829, 0.7047), (2.0533, 0.7065), (2.1167, 0.7080), (2.1737, 0.7092),
];

pub fn ba_tables() -> [(f64, &'static [(f64, f64)]); 3] {
    [(0.6, BA_06), (1.0, BA_1), (SQRT_2, BA_SQRT2)]
}

/// `(I(X;T), I(Y;T))` in bits.
pub type Point = (f64, f64);

/// Two-cluster rows `(β, agg, seq, det)`.
pub const TWO_CLUSTER_ROWS: [(f64, Point, Point, Point); 3] = [
    (0.6, (0.9801, 0.1489), (0.9992, 0.1523), (0.9992, 0.1523)),
    (1.0, (0.9996, 0.3685), (0.9889, 0.3519), (0.9996, 0.3685)),
    (SQRT_2, (0.9994, 0.6005), (0.9997, 0.6025), (1.0000, 0.6026)),
];

pub fn model(beta: f64) -> MixtureModel {
    MixtureModel::new(beta).expect("valid separation")
}

/// `Err` describing the first emitted point outside `[0, min(R, ln 2, I(X;Y))]`.
pub fn check_bounds(r: f64, beta: f64) -> Result<(), String> {
    let m = model(beta);
    let cap = mi_xy(&m);
    let mut points: Vec<_> = scheme_channels(r, &m)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    points.push(unified(r, &m).map_err(|e| e.to_string())?);
    for p in points {
        let limit = p.rate.min(LN_2).min(cap) + 1e-8;
        if !(p.relevance >= -1e-12 && p.relevance <= limit) {
            return Err(format!(
                "{} at R={r}, β={beta}: relevance {} > {limit}",
                p.scheme, p.relevance
            ));
        }
        if p.rate > r + 1e-9 {
            return Err(format!(
                "{} at R={r}, β={beta}: rate {} exceeds budget",
                p.scheme, p.rate
            ));
        }
    }
    Ok(())
}

/// `|H(T) - R|` of the quantizer together with the worst bin-mass deviation from target.
pub fn quantizer_residuals(r: f64, beta: f64) -> (f64, f64) {
    let m = model(beta);
    let q = build_quantizer(r, &m);
    let masses = q.masses(&m);
    let targets = target_masses(r);
    let worst = masses
        .iter()
        .zip(&targets)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    ((entropy(&masses) - r).abs(), worst)
}

/// Defining-equation residuals of the two gains at `R`; the second is `None` below ln 2.
pub fn gain_residuals(r: f64, beta: f64) -> (f64, Option<f64>) {
    let m = model(beta);
    let (f, g) = (f_beta(&m), g_beta(&m));
    let a = alpha_lb1(r, &m).expect("R >= 0");
    let lb1 = 0.5 * a * a * (1.0 + f) - (1.0 + a.powi(4) * g * g).sqrt() + 1.0 - r;
    let lb2 = (r >= LN_2).then(|| {
        let a = alpha_lb2(r, &m).expect("R >= ln 2");
        a * a * (0.5 + 0.5 * f - g) + LN_2 - r
    });
    (lb1.abs(), lb2.map(f64::abs))
}

/// `(1 + f - 2g, smallest lb1 discriminant over R)`; the minimum sits at R = 1.
pub fn gain_conditions(beta: f64) -> (f64, f64) {
    let m = model(beta);
    let (f, g) = (f_beta(&m), g_beta(&m));
    (1.0 + f - 2.0 * g, (1.0 + f).powi(2) - 4.0 * g * g)
}

/// Largest `soft_rate_exact(α) - R` over the two gains.
pub fn soft_rate_excess(r: f64, beta: f64) -> f64 {
    let m = model(beta);
    let mut worst = soft_rate_exact(alpha_lb1(r, &m).expect("R >= 0"), &m) - r;
    if r >= LN_2 {
        worst = worst.max(soft_rate_exact(alpha_lb2(r, &m).expect("R >= ln 2"), &m) - r);
    }
    worst
}

/// `|I1 - (ln 2 - H(error))|`.
pub fn two_level_identity(r: f64, beta: f64) -> f64 {
    let m = model(beta);
    let e = gmib::classify::err_two_level(r, &m).expect("R <= ln 2").error;
    (i1(r, &m).expect("R <= ln 2").relevance - (LN_2 - binary_entropy(e).expect("probability"))).abs()
}
