//! Short-interval Sato-Tate experiments on angle datasets.
//!
//! Log-weighted sums are accumulated in fixed point with unit `2^-96`. Every
//! `ln p` is a multiple of `2^-53`, so counts are exact and add up exactly
//! over any partition of a window. Minorant terms are rounded down onto the
//! grid, which keeps `minorant_sum <= weighted_count` a hard inequality
//! whenever the certificate lies below the indicator in binary64.

use rayon::prelude::*;
use serde::Serialize;

use crate::arithmetic::{AngleRecord, AngleSet};
use crate::chebyshev::eval_u_all;
use crate::error::{Error, Result};
use crate::measure::IntervalSet;
use crate::minorant::MinorantCertificate;
use crate::toolkit::{least_prime_log_bound, EffectiveConstants};
use crate::ChebSeries;

pub const FLOOR_LABEL: &str = "asymptotic target";
const FRAC_BITS: i32 = 96;

/// `x` in units of `2^-96`, rounded toward minus infinity.
fn to_units(x: f64) -> i128 {
    if x == 0.0 {
        return 0;
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i128 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1 << 52) - 1)) as i128;
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
    let m = sign * mant;
    let shift = e + FRAC_BITS;
    if shift >= 0 {
        // terms below 2^24 keep sums of many of them inside i128
        assert!(shift <= 67, "term {x:e} outside the fixed-point range");
        m << shift
    } else if shift > -127 {
        m >> -shift
    } else if m < 0 {
        -1
    } else {
        0
    }
}

fn from_units(u: i128) -> f64 {
    u as f64 * 2f64.powi(-FRAC_BITS)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalCountReport {
    #[serde(rename = "I")]
    pub interval: IntervalSet,
    pub x: f64,
    pub h: f64,
    /// Good primes in the window.
    pub primes: usize,
    pub weighted_count: f64,
    /// `sum log p` over the good primes of the window.
    pub prime_log_mass: f64,
    pub expected: f64,
    /// `b_0 h / 2` from the supplied certificate, without the `o(1)` term.
    pub minorant_floor: Option<f64>,
    pub floor_label: Option<&'static str>,
    /// `sum (sum_n b_n U_n(cos theta_p)) log p` over the same primes.
    pub minorant_sum: Option<f64>,
    pub ratio: Option<f64>,
    /// Set when the count falls below the floor.
    pub flag: bool,
    /// `weighted_count` in units of `2^-96`.
    #[serde(skip)]
    pub count_units: i128,
    #[serde(skip)]
    pub minorant_units: Option<i128>,
}

fn count_window(
    window: &[AngleRecord],
    interval: &IntervalSet,
    x: f64,
    h: f64,
    cert: Option<&MinorantCertificate>,
) -> IntervalCountReport {
    let series = cert.map(|c| ChebSeries::new(c.coeffs.clone()));
    let mut count = 0i128;
    let mut mass = 0i128;
    let mut minorant = 0i128;
    let mut primes = 0;
    for r in window.iter().filter(|r| !r.ramified) {
        let lp = (r.p as f64).ln();
        primes += 1;
        mass += to_units(lp);
        if interval.contains(r.cos_theta) {
            count += to_units(lp);
        }
        if let Some(s) = &series {
            minorant += to_units(s.eval(&r.cos_theta) * lp);
        }
    }
    let weighted_count = from_units(count);
    let prime_log_mass = from_units(mass);
    let expected = interval.mu_st() * prime_log_mass;
    let minorant_floor = cert.map(|c| c.b0 * h / 2.0);
    IntervalCountReport {
        interval: interval.clone(),
        x,
        h,
        primes,
        weighted_count,
        prime_log_mass,
        expected,
        minorant_floor,
        floor_label: minorant_floor.map(|_| FLOOR_LABEL),
        minorant_sum: series.as_ref().map(|_| from_units(minorant)),
        ratio: (expected > 0.0).then(|| weighted_count / expected),
        flag: minorant_floor.is_some_and(|f| weighted_count < f),
        count_units: count,
        minorant_units: series.map(|_| minorant),
    }
}

/// Log-weighted count of good primes in `(x, x + h]` with `cos theta_p` in `I`.
pub fn short_interval_count(
    angles: &AngleSet,
    interval: &IntervalSet,
    x: f64,
    h: f64,
    cert: Option<&MinorantCertificate>,
) -> Result<IntervalCountReport> {
    if !(x >= 2.0) || !x.is_finite() {
        return Err(Error::invalid(format!("x = {x} must be at least 2")));
    }
    if !(h > 0.0 && h <= x) {
        return Err(Error::invalid(format!("h = {h} must lie in (0, x]")));
    }
    angles.require_coverage(x + h)?;
    Ok(count_window(angles.window(x, x + h), interval, x, h, cert))
}

/// `(sum U_n(cos theta_p) log p) / (sum log p)` over good `p <= x`, for
/// `n = 1..=n_max`. Zero when no good prime is in range.
pub fn chebyshev_moment_test(angles: &AngleSet, n_max: usize, x: f64) -> Result<Vec<f64>> {
    if n_max == 0 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    let mut sums = vec![0.0; n_max + 1];
    let mut mass = 0.0;
    for r in angles.window(0.0, x).iter().filter(|r| !r.ramified) {
        let lp = (r.p as f64).ln();
        mass += lp;
        for (s, u) in sums.iter_mut().zip(eval_u_all(n_max, r.cos_theta)) {
            *s += u * lp;
        }
    }
    Ok(sums[1..].iter().map(|s| if mass > 0.0 { s / mass } else { 0.0 }).collect())
}

/// Smallest good prime of the dataset with `cos theta_p` in `I`.
pub fn least_prime_in_interval(angles: &AngleSet, interval: &IntervalSet) -> Option<u64> {
    angles.good().find(|r| interval.contains(r.cos_theta)).map(|r| r.p)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeastPrimeReport {
    #[serde(rename = "I")]
    pub interval: IntervalSet,
    pub prime: Option<u64>,
    pub searched_up_to: u64,
    pub log_p: Option<f64>,
    /// `log` of the parametric upper bound, if one was requested.
    pub log_bound: Option<f64>,
    pub within_bound: Option<bool>,
}

/// Parameters of the parametric least-prime bound.
#[derive(Clone, Debug)]
pub struct BoundInputs<'a> {
    pub n: u32,
    pub b: f64,
    pub rep: &'a crate::toolkit::RepresentationParams,
    pub constants: &'a EffectiveConstants,
    pub squarefree: bool,
}

pub fn least_prime_report(
    angles: &AngleSet,
    interval: &IntervalSet,
    bound: Option<BoundInputs<'_>>,
) -> Result<LeastPrimeReport> {
    let prime = least_prime_in_interval(angles, interval);
    let log_p = prime.map(|p| (p as f64).ln());
    let log_bound = bound.map(|b| least_prime_log_bound(b.n, b.b, b.rep, b.constants, b.squarefree)).transpose()?;
    Ok(LeastPrimeReport {
        interval: interval.clone(),
        prime,
        searched_up_to: angles.limit,
        log_p,
        log_bound,
        within_bound: log_p.zip(log_bound).map(|(l, b)| l <= b),
    })
}

/// Windows `(x, x + x^{1 - delta}]` at `x = x0 2^i`, `i < steps`.
pub fn hoheisel_scan(
    angles: &AngleSet,
    interval: &IntervalSet,
    x0: f64,
    delta: f64,
    steps: usize,
    cert: Option<&MinorantCertificate>,
) -> Result<Vec<IntervalCountReport>> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::invalid(format!("delta = {delta} outside [0, 1)")));
    }
    if steps == 0 {
        return Err(Error::invalid("steps must be at least 1"));
    }
    let windows: Vec<(f64, f64)> = (0..steps)
        .map(|i| {
            let x = x0 * 2f64.powi(i as i32);
            (x, x.powf(1.0 - delta))
        })
        .collect();
    if let Some(&(x, h)) = windows.last() {
        angles.require_coverage(x + h)?;
    }
    windows.into_par_iter().map(|(x, h)| short_interval_count(angles, interval, x, h, cert)).collect()
}

pub const CSV_HEADER: &str = "x,h,count,expected,floor,ratio,flag";

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

pub fn reports_to_csv(reports: &[IntervalCountReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.x,
            r.h,
            r.weighted_count,
            r.expected,
            opt(r.minorant_floor),
            opt(r.ratio),
            r.flag
        ));
    }
    out
}
