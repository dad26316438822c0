//! Conductor arithmetic, the parametric effective bounds, and small
//! implementations of the analytic tools (Turan power sums, `j_k`, the
//! zero-count main term).
//!
//! The absolute constants in the bounds are never known numerically; they are
//! inputs here, and every `<<`-type bound carries a multiplier that defaults
//! to one. Bounds that overflow binary64 are returned as natural logarithms.

use std::f64::consts::{E, PI};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Local data of an automorphic representation over a number field `K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepresentationParams {
    /// Degree `d` of the representation.
    pub d: u32,
    /// Arithmetic conductor.
    pub q: f64,
    /// The `d [K:Q]` Langlands parameters at infinity.
    pub kappas: Vec<Complex64>,
    pub field_degree: u32,
    /// Absolute discriminant of `K`.
    pub disc: f64,
    #[serde(default)]
    pub self_dual: bool,
    #[serde(default = "yes")]
    pub satisfies_grc: bool,
}

fn yes() -> bool {
    true
}

impl RepresentationParams {
    /// The trivial representation of `GL(1)` over `Q` (the Riemann zeta data).
    pub fn trivial() -> Self {
        Self {
            d: 1,
            q: 1.0,
            kappas: vec![Complex64::new(0.0, 0.0)],
            field_degree: 1,
            disc: 1.0,
            self_dual: true,
            satisfies_grc: true,
        }
    }

    /// Checks the hard invariants and returns soft warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.d == 0 || self.field_degree == 0 {
            return Err(Error::invalid("degree and field degree must be positive"));
        }
        if !(self.q >= 1.0 && self.q.is_finite()) || !(self.disc >= 1.0 && self.disc.is_finite()) {
            return Err(Error::invalid("conductor and discriminant must be finite and >= 1"));
        }
        let want = (self.d * self.field_degree) as usize;
        if self.kappas.len() != want {
            return Err(Error::invalid(format!(
                "expected d [K:Q] = {want} Langlands parameters, got {}",
                self.kappas.len()
            )));
        }
        let mut warnings = Vec::new();
        let soft = -0.5 + 1.0 / f64::from(self.d * self.d + 1);
        for (j, k) in self.kappas.iter().enumerate() {
            if !(k.re > -0.5) {
                return Err(Error::invalid(format!("Re(kappa_{j}) = {} is not > -1/2", k.re)));
            }
            if k.re <= soft {
                warnings.push(format!("Re(kappa_{j}) = {} is below the bound -1/2 + 1/(d^2+1) = {soft}", k.re));
            }
        }
        Ok(warnings)
    }
}

/// The unspecified absolute constants, supplied by configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveConstants {
    pub c_hoheisel: f64,
    pub c_satotate1: f64,
    pub c_satotate2: f64,
    pub c_density: f64,
    #[serde(default = "one")]
    pub symn_multiplier: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for EffectiveConstants {
    /// All constants one: the shape of each bound with no claim on its size.
    fn default() -> Self {
        Self { c_hoheisel: 1.0, c_satotate1: 1.0, c_satotate2: 1.0, c_density: 1.0, symn_multiplier: 1.0 }
    }
}

impl EffectiveConstants {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("c_hoheisel", self.c_hoheisel),
            ("c_satotate1", self.c_satotate1),
            ("c_satotate2", self.c_satotate2),
            ("c_density", self.c_density),
            ("symn_multiplier", self.symn_multiplier),
        ];
        for (name, v) in all {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} = {v} must be positive")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// `q prod_j (|s + kappa_j| + 3)`.
pub fn analytic_conductor(r: &RepresentationParams, s: Complex64) -> f64 {
    r.kappas.iter().fold(r.q, |acc, k| acc * ((s + k).norm() + 3.0))
}

fn log_analytic_conductor(r: &RepresentationParams, s: Complex64) -> f64 {
    r.q.ln() + r.kappas.iter().map(|k| ((s + k).norm() + 3.0).ln()).sum::<f64>()
}

/// The analytic conductor at `s = 0`.
pub fn conductor(r: &RepresentationParams) -> f64 {
    analytic_conductor(r, Complex64::new(0.0, 0.0))
}

/// `log( q(pi)^{d'} q(pi')^{d} (|s|+3)^{d d' [K:Q]} )`, an upper bound for the
/// log analytic conductor of the Rankin-Selberg product.
pub fn rs_conductor_bound(r: &RepresentationParams, r2: &RepresentationParams, s: Complex64) -> Result<f64> {
    if r.field_degree != r2.field_degree {
        return Err(Error::invalid("representations live over fields of different degree"));
    }
    let zero = Complex64::new(0.0, 0.0);
    let (d, d2, k) = (f64::from(r.d), f64::from(r2.d), f64::from(r.field_degree));
    Ok(d2 * log_analytic_conductor(r, zero) + d * log_analytic_conductor(r2, zero) + d * d2 * k * (s.norm() + 3.0).ln())
}

/// `log q(Sym^n pi)`: `n log q` for a squarefree-level newform, otherwise the
/// shape `multiplier * n^3 log q`.
pub fn symn_conductor_log_bound(q: f64, n: u32, squarefree_newform: bool, multiplier: f64) -> f64 {
    let n = f64::from(n);
    if squarefree_newform {
        n * q.ln()
    } else {
        multiplier * n.powi(3) * q.ln()
    }
}

/// Natural log of the least-prime bound for `Sym^N`:
/// `c N^4 log(3BN) max{N log N + N^3 log q, log D + [K:Q] log [K:Q]}`, or
/// `c N^5 log(3BN) log(N q)` for a squarefree-level newform, with
/// `q` the analytic conductor at 0 and `c = c_satotate2`.
pub fn least_prime_log_bound(
    n: u32,
    b: f64,
    r: &RepresentationParams,
    consts: &EffectiveConstants,
    squarefree_newform: bool,
) -> Result<f64> {
    if n == 0 || !(b >= 1.0) {
        return Err(Error::invalid("need N >= 1 and B >= 1"));
    }
    let nf = f64::from(n);
    let log_q = log_analytic_conductor(r, Complex64::new(0.0, 0.0));
    let l = (3.0 * b * nf).ln();
    if squarefree_newform {
        return Ok(consts.c_satotate2 * nf.powi(5) * l * (nf.ln() + log_q));
    }
    let k = f64::from(r.field_degree);
    let base = (nf * nf.ln() + nf.powi(3) * log_q).max(r.disc.ln() + k * k.ln());
    Ok(consts.c_satotate2 * nf.powi(4) * l * base)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeltaTheorem {
    /// `delta <= c / (d^4 [K:Q] log(3d))`.
    Hoheisel,
    /// `delta <= c / (N^4 [K:Q] log(3BN))`.
    SatoTate,
}

pub fn delta_bound(
    which: DeltaTheorem,
    n_or_d: u32,
    b: Option<f64>,
    field_degree: u32,
    consts: &EffectiveConstants,
) -> Result<f64> {
    if n_or_d == 0 || field_degree == 0 {
        return Err(Error::invalid("degree and field degree must be positive"));
    }
    let n = f64::from(n_or_d);
    let k = f64::from(field_degree);
    match which {
        DeltaTheorem::Hoheisel => Ok(consts.c_hoheisel / (n.powi(4) * k * (3.0 * n).ln())),
        DeltaTheorem::SatoTate => {
            let b = b.ok_or_else(|| Error::invalid("B is required for the Sato-Tate bound"))?;
            if !(b >= 1.0) {
                return Err(Error::invalid(format!("B = {b} must be >= 1")));
            }
            Ok(consts.c_satotate1 / (n.powi(4) * k * (3.0 * b * n).ln()))
        }
    }
}

/// The `k` in `[M, 2M]` maximizing `|sum z_j^k|` (smallest on ties), with
/// that modulus.
pub fn turan_witness(z: &[Complex64], m: u32) -> Result<(u32, f64)> {
    if z.is_empty() {
        return Err(Error::invalid("empty list of complex numbers"));
    }
    if (m as usize) < z.len() {
        return Err(Error::invalid(format!("M = {m} is smaller than the {} terms", z.len())));
    }
    let mut powers: Vec<Complex64> = z.iter().map(|w| w.powu(m)).collect();
    let mut best = (m, f64::NEG_INFINITY);
    for k in m..=2 * m {
        let v = powers.iter().sum::<Complex64>().norm();
        if v > best.1 {
            best = (k, v);
        }
        for (p, w) in powers.iter_mut().zip(z) {
            *p *= w;
        }
    }
    Ok(best)
}

/// The lower bound `(max_j |z_j| / 50)^k`.
pub fn turan_lower_bound(z: &[Complex64], k: u32) -> f64 {
    let r = z.iter().map(|w| w.norm()).fold(0.0, f64::max);
    (r / 50.0).powi(k as i32)
}

fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|i| f64::from(i).ln()).sum()
}

/// `j_k(u) = u^k e^{-u} / k!`, evaluated in log space.
pub fn j_k(u: f64, k: u32) -> f64 {
    if u == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (f64::from(k) * u.ln() - u - ln_factorial(k)).exp()
}

/// Main term `(T/pi) log(q (T / 2 pi e)^{d d' [K:Q]})` of the zero count up
/// to height `T`. An estimate, not a count.
pub fn zero_count_main_term(pair_degree: u32, q_rs: f64, field_degree: u32, t: f64) -> Result<f64> {
    if !(t >= 1.0) || !(q_rs >= 1.0) {
        return Err(Error::invalid("need T >= 1 and q >= 1"));
    }
    let e = f64::from(pair_degree * field_degree);
    Ok(t / PI * (q_rs.ln() + e * (t / (2.0 * PI * E)).ln()))
}
