//! Closed-form classification of Sym^4-minorizable intervals `[a, b]`.
//!
//! The five cases, tried in order (first match wins):
//!
//! 1. `a = -1` and `b > -beta0`;
//! 2. `-1 < a <= -beta0` and `b > f(a)`;
//! 3. `-beta0 <= a <= -beta1` and `b > -1/(6a)`;
//! 4. `-beta1 <= a < beta1` and `b > f(a)`;
//! 5. `beta1 <= a < beta0` and `b = 1`,
//!
//! with `beta0 = (1 + sqrt 7)/6`, `beta1 = (sqrt 7 - 1)/6` and
//! `f(a) = (a + sqrt(16a^4 - 11a^2 + 2)) / (2(1 - 4a^2))`. Nothing with
//! `a >= beta0` is minorizable.

use serde::{Deserialize, Serialize};

use crate::chebyshev::MonomialPolyOf;
use crate::error::{Error, Result};
use crate::measure::mu_st_interval;
use crate::{ChebSeries, MonomialPoly};

/// Guard band for the strict threshold comparisons.
pub const GUARD: f64 = 1e-14;

pub fn beta0() -> f64 {
    (1.0 + 7f64.sqrt()) / 6.0
}

pub fn beta1() -> f64 {
    (7f64.sqrt() - 1.0) / 6.0
}

/// `(14 + sqrt 7) / 36`, the slope of the case 1 and 5 integrals.
fn edge_slope() -> f64 {
    (14.0 + 7f64.sqrt()) / 36.0
}

/// Threshold curve of cases 2 and 4.
pub fn f_threshold(a: f64) -> f64 {
    (a + (16.0 * a.powi(4) - 11.0 * a * a + 2.0).sqrt()) / (2.0 * (1.0 - 4.0 * a * a))
}

/// The case whose `a`-range contains `a`, or `None` for `a >= beta0`.
pub fn case_for(a: f64) -> Option<u8> {
    let (b0, b1) = (beta0(), beta1());
    if a <= -1.0 {
        Some(1)
    } else if a <= -b0 {
        Some(2)
    } else if a <= -b1 {
        Some(3)
    } else if a < b1 {
        Some(4)
    } else if a < b0 {
        Some(5)
    } else {
        None
    }
}

/// Infimum of the `b` for which `[a, b]` is minorizable (the condition is
/// strict except in case 5, where only `b = 1` works).
pub fn threshold(a: f64) -> Option<f64> {
    match case_for(a)? {
        1 => Some(-beta0()),
        2 | 4 => Some(f_threshold(a)),
        3 => Some(-1.0 / (6.0 * a)),
        _ => Some(1.0),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sym4Verdict {
    pub a: f64,
    pub b: f64,
    pub minorizable: bool,
    #[serde(rename = "case")]
    pub case_id: Option<u8>,
    pub threshold_b: Option<f64>,
    pub certificate_coeffs: Option<Vec<f64>>,
    pub certificate_b0: Option<f64>,
}

impl Sym4Verdict {
    pub fn certificate(&self) -> Option<MonomialPoly> {
        self.certificate_coeffs.clone().map(MonomialPolyOf::new)
    }
}

fn check_pair(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) || a < -1.0 || b > 1.0 {
        return Err(Error::invalid(format!("[{a}, {b}] is not inside [-1, 1]")));
    }
    if a > b {
        return Err(Error::invalid(format!("a = {a} exceeds b = {b}")));
    }
    Ok(())
}

fn minorizable(a: f64, b: f64) -> bool {
    match (case_for(a), threshold(a)) {
        (Some(5), _) => b >= 1.0 - GUARD,
        (Some(_), Some(t)) => b > t + GUARD,
        _ => false,
    }
}

pub fn classify(a: f64, b: f64) -> Result<Sym4Verdict> {
    check_pair(a, b)?;
    let ok = minorizable(a, b);
    let cert = if ok { Some(certificate(a, b)?) } else { None };
    Ok(Sym4Verdict {
        a,
        b,
        minorizable: ok,
        case_id: case_for(a),
        threshold_b: threshold(a),
        certificate_b0: cert.as_ref().map(|c| c.1),
        certificate_coeffs: cert.map(|c| c.0.coeffs().to_vec()),
    })
}

fn case24_b0(a: f64, b: f64) -> f64 {
    ((1.0 - 4.0 * a * a) * b * b - a * b + a * a - 0.5) / (4.0 * (4.0 * a * b + 1.0))
}

fn case24_poly(a: f64, b: f64) -> MonomialPoly {
    let c = (a + b) / (4.0 * a * b + 1.0);
    MonomialPoly::from_roots(-1.0, &[a, b, -c, -c])
}

/// The certificate `F` (nonpositive off `[a, b]`) and its Sato-Tate integral.
///
/// In cases 2 and 4 the closed form has positive integral only for `b`
/// between `f(a)` and the point where `4ab + 1` or the integral changes sign,
/// and is badly conditioned as `4ab + 1` approaches 0. Beyond that the
/// certificate of a shorter interval `[a, b']`, `b' < b`, serves, since it
/// is nonpositive off `[a, b]` as well.
pub fn certificate(a: f64, b: f64) -> Result<(MonomialPoly, f64)> {
    check_pair(a, b)?;
    if !minorizable(a, b) {
        return Err(Error::NoCertificate(format!("[{a}, {b}] is not Sym^4-minorizable")));
    }
    let b1 = beta1();
    let out = match case_for(a) {
        Some(1) => (MonomialPoly::from_roots(1.0, &[1.0, b, b1, b1]), (b + beta0()) * edge_slope()),
        Some(3) => (MonomialPoly::from_roots(1.0, &[1.0, -1.0, a, b]), -0.75 * (a * b + 1.0 / 6.0)),
        Some(5) => (MonomialPoly::from_roots(1.0, &[-1.0, a, -b1, -b1]), (beta0() - a) * edge_slope()),
        _ => {
            let t = f_threshold(a);
            // Keep 4ab' + 1 away from 0: the double root -c runs off to
            // infinity there and the coefficients lose all precision.
            let floor = (4.0 * a * t + 1.0) / 2.0;
            let valid = |bb: f64| 4.0 * a * bb + 1.0 >= floor && case24_b0(a, bb) > 0.0;
            let mut bb = b;
            while !valid(bb) {
                bb = t + (bb - t) / 2.0;
                if bb - t <= GUARD {
                    return Err(Error::NoCertificate(format!("no positive case 2/4 certificate for [{a}, {b}]")));
                }
            }
            (case24_poly(a, bb), case24_b0(a, bb))
        }
    };
    Ok(out)
}

/// `b_0` of a certificate polynomial via the U basis, for cross-checks.
pub fn certificate_st_integral(p: &MonomialPoly) -> Result<f64> {
    Ok(ChebSeries::from_monomial(p)?.st_integral())
}

/// Euclidean distance from `(a, b)` to the boundary of the classification:
/// the threshold curve of cases 2-4, the lines `a = -1, -beta0, -beta1,
/// beta1, beta0` and `b = 1`.
pub fn boundary_distance(a: f64, b: f64) -> f64 {
    let mut d = (1.0 - b).abs();
    for k in [-1.0, -beta0(), -beta1(), beta1(), beta0()] {
        d = d.min((a - k).abs());
    }
    let lo = -1.0;
    let hi = beta1();
    // Any curve point closer than `d` lies within `d` horizontally.
    let (s0, s1) = ((a - d).max(lo), (a + d).min(hi));
    if s0 < s1 {
        let steps = 4000;
        for i in 0..=steps {
            let s = s0 + (s1 - s0) * i as f64 / steps as f64;
            if let Some(t) = threshold(s).filter(|_| s > lo) {
                d = d.min(((s - a).powi(2) + (t - b).powi(2)).sqrt());
            }
        }
    }
    d
}

/// Both estimates of the minorizable proportion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub quadrature: f64,
    pub quasi_random: f64,
    pub samples: u64,
}

/// Integrand of the area: length of the minorizable `b`-range above `a`.
fn minorizable_length(a: f64) -> f64 {
    match threshold(a) {
        Some(t) => (1.0 - t.max(a)).max(0.0),
        None => 0.0,
    }
}

/// Area of the minorizable part of `{-1 <= a <= b <= 1}` over its area, by
/// tanh-sinh quadrature on each case's `a`-range. Cases 1 and 5 are
/// segments and carry no area.
pub fn proportion_quadrature() -> f64 {
    let pieces = [(-1.0, -beta0()), (-beta0(), -beta1()), (-beta1(), beta1())];
    let area: f64 =
        pieces.iter().map(|&(lo, hi)| quadrature::integrate(minorizable_length, lo, hi, 1e-13).integral).sum();
    area / 2.0
}

/// The same ratio estimated from the first `samples` points of the R2
/// low-discrepancy sequence on `[-1, 1]^2`, keeping those with `a <= b`.
pub fn proportion_quasi_random(samples: u64) -> f64 {
    // plastic number
    let g = 1.324_717_957_244_746_f64;
    let (x1, x2) = (1.0 / g, 1.0 / (g * g));
    let mut inside = 0u64;
    let mut hits = 0u64;
    for k in 1..=samples {
        let k = k as f64;
        let u = (0.5 + k * x1).fract();
        let v = (0.5 + k * x2).fract();
        let (a, b) = (2.0 * u - 1.0, 2.0 * v - 1.0);
        if a <= b {
            inside += 1;
            if minorizable(a, b) {
                hits += 1;
            }
        }
    }
    hits as f64 / inside as f64
}

pub fn proportion_minorizable(samples: u64) -> Proportion {
    Proportion { quadrature: proportion_quadrature(), quasi_random: proportion_quasi_random(samples), samples }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Supremum of `mu_ST` over non-minorizable intervals.
    pub mu_all: f64,
    pub mu_all_at: (f64, f64),
    /// Infimum of `mu_ST` over minorizable intervals.
    pub mu_min: f64,
    pub mu_min_at: (f64, f64),
}

/// Golden-section search for the maximum of a unimodal `g` on `[lo, hi]`.
fn golden_max(g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    while hi - lo > tol {
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + r * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - r * (hi - lo);
            g1 = g(x1);
        }
    }
    (lo + hi) / 2.0
}

/// Grid scan followed by golden-section refinement around the best grid
/// point; returns the argmax.
fn maximize(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let steps = 400;
    let at = |i: usize| lo + (hi - lo) * i as f64 / steps as f64;
    let best = (0..=steps).max_by(|&i, &j| g(at(i)).total_cmp(&g(at(j)))).unwrap_or(0);
    let x = golden_max(g, at(best.saturating_sub(1)), at((best + 1).min(steps)), 1e-10);
    [lo, hi, x].into_iter().max_by(|p, q| g(*p).total_cmp(&g(*q))).unwrap_or(x)
}

/// `mu_all` and `mu_min` by 1-D optimization along each case's boundary.
pub fn measure_thresholds() -> Thresholds {
    let (b0, b1) = (beta0(), beta1());
    // mu_ST of the boundary interval [a, thr(a)] for cases 2-4
    let edge = |a: f64| {
        let t = threshold(a).unwrap_or(1.0).clamp(a, 1.0);
        mu_st_interval(a, t)
    };
    let pieces = [(-1.0 + 1e-12, -b0), (-b0, -b1), (-b1, b1)];

    // Candidates (mu, a, b) for the supremum over non-minorizable intervals:
    // the curve itself, [-1, -beta0] (case 1), [beta1, 1) (case 5) and
    // [beta0, 1].
    let mut sup = vec![
        (mu_st_interval(-1.0, -b0), -1.0, -b0),
        (mu_st_interval(b1, 1.0), b1, 1.0),
        (mu_st_interval(b0, 1.0), b0, 1.0),
    ];
    // and for the infimum over minorizable ones: case 1 with b -> -beta0,
    // case 5 with a -> beta0.
    let mut inf = vec![(mu_st_interval(-1.0, -b0), -1.0, -b0), (mu_st_interval(b0, 1.0), b0, 1.0)];
    for &(lo, hi) in &pieces {
        let a = maximize(&edge, lo, hi);
        sup.push((edge(a), a, threshold(a).unwrap_or(1.0).min(1.0)));
        let a = maximize(&|x| -edge(x), lo, hi);
        inf.push((edge(a), a, threshold(a).unwrap_or(1.0).min(1.0)));
    }
    let s = sup.into_iter().max_by(|x, y| x.0.total_cmp(&y.0)).expect("nonempty");
    let i = inf.into_iter().min_by(|x, y| x.0.total_cmp(&y.0)).expect("nonempty");
    Thresholds { mu_all: s.0, mu_all_at: (s.1, s.2), mu_min: i.0, mu_min_at: (i.1, i.2) }
}
