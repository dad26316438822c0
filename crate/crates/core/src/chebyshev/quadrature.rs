//! Gauss-Chebyshev quadrature of the second kind.
//!
//! With `n` nodes `cos(j pi / (n+1))` and weights `(2/(n+1)) sin^2(j pi/(n+1))`
//! the rule integrates polynomials of degree `<= 2n - 1` against `mu_ST`
//! exactly.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point rule, nodes in decreasing order.
pub fn gauss_chebyshev_u(n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = PI / (n as f64 + 1.0);
    (1..=n)
        .map(|j| {
            let th = j as f64 * h;
            (th.cos(), 2.0 / (n as f64 + 1.0) * th.sin().powi(2))
        })
        .unzip()
}

/// The `n`-point estimate of `int f d mu_ST`.
pub fn st_rule<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    let (nodes, weights) = gauss_chebyshev_u(n);
    nodes.iter().zip(&weights).map(|(t, w)| w * f(*t)).sum()
}

/// `int f d mu_ST` starting from `4(degree+1)` nodes and doubling until two
/// successive estimates differ by less than `1e-12`.
pub fn st_quadrature<F: Fn(f64) -> f64>(f: F, degree: usize) -> f64 {
    let mut n = 4 * (degree + 1);
    let mut prev = st_rule(&f, n);
    for _ in 0..20 {
        n *= 2;
        let cur = st_rule(&f, n);
        if (cur - prev).abs() < 1e-12 {
            return cur;
        }
        prev = cur;
    }
    prev
}
