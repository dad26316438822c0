//! Selberg's trigonometric minorant of an arc, pulled back through
//! `t = cos(theta)`.
//!
//! With `psi(x) = x - floor(x) - 1/2` the indicator of an arc `[a, b]` of
//! `R/Z` is `b - a + psi(x - b) + psi(a - x)` off the endpoints. Vaaler's
//! polynomial `V` of degree `K` satisfies `|psi - V| <= F / (2K + 2)` with `F`
//! the Fejer kernel, so replacing each `psi` by `V - F / (2K + 2)` gives a
//! minorant of degree `K`.

use std::f64::consts::PI;

use super::{finalize, ratio, regions, Kind, MinorantCertificate, Status, DEFAULT_TOL, VERIFY_TOL};
use crate::chebyshev::{check_degree, t_series_to_u};
use crate::error::{Error, Result};
use crate::measure::IntervalSet;

/// `g(u) = pi u (1 - u) cot(pi u) + u`, the damping factor of Vaaler's polynomial.
fn vaaler_g(u: f64) -> f64 {
    PI * u * (1.0 - u) / (PI * u).tan() + u
}

/// Cosine coefficients `d_0, d_1, ..` of the even part of the minorant of the
/// arc `[alpha, beta]` (radians): `d_0 + sum d_k cos(k theta)`.
fn arc_cosine_coeffs(alpha: f64, beta: f64, k_max: usize) -> Vec<f64> {
    let kp1 = (k_max + 1) as f64;
    let mut d = Vec::with_capacity(k_max + 1);
    d.push((beta - alpha) / (2.0 * PI) - 1.0 / kp1);
    for k in 1..=k_max {
        let kf = k as f64;
        let v = -vaaler_g(kf / kp1) / (PI * kf);
        let w = 1.0 - kf / kp1;
        d.push(v * ((kf * alpha).sin() - (kf * beta).sin()) - w / kp1 * ((kf * alpha).cos() + (kf * beta).cos()));
    }
    d
}

/// Degree prescribed by `N >= 4(1 + delta)/mu - 1`.
pub fn selberg_n_for(mu: f64, delta: f64) -> usize {
    (4.0 * (1.0 + delta) / mu - 1.0).ceil().max(1.0) as usize
}

/// Degree-`n` Selberg minorant of `1_[a,b]`, as a U-series.
///
/// `[a, b]` corresponds to the angles `[alpha, beta] u [-beta, -alpha]` with
/// `alpha = arccos b`, `beta = arccos a`; the two arcs merge into one when
/// `b = 1` or `a = -1`.
pub fn selberg_minorant(target: &IntervalSet, n: usize) -> Result<MinorantCertificate> {
    check_degree(n)?;
    if n == 0 {
        return Err(Error::invalid("the Selberg construction needs N >= 1"));
    }
    let &[(a, b)] = target.intervals() else {
        return Err(Error::invalid(format!("expected a single interval, got {target}")));
    };
    let alpha = b.acos();
    let beta = a.acos();
    if alpha >= beta {
        return Err(Error::invalid(format!("degenerate arc for [{a}, {b}]")));
    }

    let c: Vec<f64> = if a == -1.0 && b == 1.0 {
        let mut c = vec![0.0; n + 1];
        c[0] = 1.0;
        c
    } else if b == 1.0 {
        arc_cosine_coeffs(-beta, beta, n)
    } else if a == -1.0 {
        arc_cosine_coeffs(alpha, 2.0 * PI - alpha, n)
    } else {
        arc_cosine_coeffs(alpha, beta, n).into_iter().map(|d| 2.0 * d).collect()
    };
    let mut q = t_series_to_u(&c).into_coeffs();

    let regions = regions(Kind::Minorant, target);
    let check = finalize(&mut q, &regions);
    let b0 = q[0];
    let status =
        if b0 > 0.0 && check.certified && check.slack <= VERIFY_TOL { Status::Feasible } else { Status::Infeasible };
    let reason =
        (status != Status::Feasible).then(|| format!("Selberg minorant has b0 = {b0:e}, slack {:e}", check.slack));
    Ok(MinorantCertificate {
        kind: Kind::Minorant,
        target: target.clone(),
        n,
        b_ratio: if status == Status::Feasible { ratio(&q) } else { None },
        coeffs: q,
        b0,
        worst_slack: check.slack,
        status,
        tol: DEFAULT_TOL,
        reason,
    })
}
