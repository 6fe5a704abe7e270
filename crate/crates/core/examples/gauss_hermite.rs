//! Gauss–Hermite rules for expectations under a unit-variance normal.

use gmib::quad::{adaptive_simpson, gauss_hermite, gauss_hermite_expect};

fn main() {
    let rule = gauss_hermite(8);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        println!("{x:>10.6}  {w:.6e}");
    }
    // E[tanh(Z + 1)] by quadrature and by direct integration
    for order in [4, 8, 16, 32, 64] {
        println!("order {order:>2}: {:.12}", gauss_hermite_expect(f64::tanh, 1.0, order));
    }
    let direct = adaptive_simpson(
        |x| (x + 1.0).tanh() * (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt(),
        -12.0,
        12.0,
        1e-13,
    );
    println!("simpson : {direct:.12}");
}
