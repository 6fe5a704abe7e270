//! Quadrature and root-finding kernels shared by every solver.

use std::sync::OnceLock;

/// Largest supported Gauss–Hermite order.
pub const MAX_ORDER: usize = 200;

/// Gauss–Hermite rule for the standard normal weight: `E[f(Z)] ≈ Σ w_k f(x_k)`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    fn compute(n: usize) -> Self {
        // Golub–Welsch: nodes are the eigenvalues of the Jacobi matrix of the
        // probabilists' Hermite recurrence, weights the squared first components.
        let mut jacobi = nalgebra::DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let b = (k as f64).sqrt();
            jacobi[(k, k - 1)] = b;
            jacobi[(k - 1, k)] = b;
        }
        let eig = jacobi.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        // Symmetrize against eigen-solver rounding.
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let j = n - 1 - i;
            nodes[i] = 0.5 * (pairs[i].0 - pairs[j].0);
            weights[i] = 0.5 * (pairs[i].1 + pairs[j].1);
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        GaussHermite { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `E[f(Z)]` with `Z ~ N(mean, 1)`.
    pub fn expect(&self, mean: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mean + x)).sum()
    }
}

/// Cached rule of the given order.
///
/// # Panics
///
/// If `order` is zero or exceeds [`MAX_ORDER`].
pub fn gauss_hermite(order: usize) -> &'static GaussHermite {
    static RULES: OnceLock<Vec<OnceLock<GaussHermite>>> = OnceLock::new();
    assert!(
        (1..=MAX_ORDER).contains(&order),
        "Gauss-Hermite order {order} not in 1..={MAX_ORDER}"
    );
    let rules = RULES.get_or_init(|| (0..=MAX_ORDER).map(|_| OnceLock::new()).collect());
    rules[order].get_or_init(|| GaussHermite::compute(order))
}

/// `E[f(Z)]` for `Z ~ N(mean, 1)` by Gauss–Hermite quadrature.
pub fn gauss_hermite_expect(f: impl FnMut(f64) -> f64, mean: f64, order: usize) -> f64 {
    gauss_hermite(order).expect(mean, f)
}

/// Adaptive Simpson quadrature on `[a, b]` with absolute tolerance `tol`.
pub fn adaptive_simpson(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&mut f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson applied panel by panel; panels no wider than `panel`.
///
/// Pre-splitting keeps the first error estimate from missing narrow features
/// on long intervals. The tolerance is shared in proportion to panel width.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, panel: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let count = ((b - a).abs() / panel).ceil().max(1.0) as usize;
    let h = (b - a) / count as f64;
    (0..count)
        .map(|k| {
            let lo = a + h * k as f64;
            let hi = if k + 1 == count { b } else { lo + h };
            adaptive_simpson(&mut f, lo, hi, tol / count as f64)
        })
        .sum()
}

/// Root of `f` on a bracketing interval, by bisection until the bracket is narrower than `xtol`.
///
/// `f(lo)` and `f(hi)` must not share a strict sign; the endpoint with the
/// smaller magnitude is returned when they do.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, xtol: f64) -> f64 {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 {
        return hi;
    }
    if flo.signum() == fhi.signum() {
        return if flo.abs() <= fhi.abs() { lo } else { hi };
    }
    for _ in 0..400 {
        if (hi - lo).abs() <= xtol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
