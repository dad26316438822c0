//! Sym^N-minorants and majorants of interval indicators.
//!
//! The optimizer maximizes `b_0` over `p = sum b_n U_n` with `p <= 1_I` by
//! an exchange method: a finite LP over a node set, followed by a certified
//! global maximization of the violation that feeds new nodes back in. The
//! finite LP is solved in its dual (moment) form
//!
//! ```text
//! min  sum_i cap(t_i) y_i   s.t.  sum_i y_i U_n(t_i) = [n == 0],  y >= 0
//! ```
//!
//! whose simplex multipliers are the coefficients `b_n`.

mod extreme;
mod selberg;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::chebyshev::quadrature::gauss_chebyshev_u;
use crate::chebyshev::{check_degree, eval_u_all, TRIM_TOLERANCE};
use crate::error::{Error, Result};
use crate::lp::Lp;
use crate::measure::IntervalSet;
use crate::roots::{real_roots, ChebTSeries};
use crate::ChebSeries;

pub use extreme::{extreme_integral, extreme_minorant, extreme_threshold};
pub use selberg::{selberg_minorant, selberg_n_for};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const MAX_ROUNDS: usize = 200;
/// Slack accepted by [`MinorantCertificate::is_sound`].
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Feasible,
    Infeasible,
    Unresolved,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// `p <= 1_I`.
    Minorant,
    /// `p >= 1_I`.
    Majorant,
}

/// Coefficients of `p = sum b_n U_n` with the certified worst-case slack
/// against the target indicator.
///
/// `worst_slack` is `max (p - 1_I)` for minorants and `max (1_I - p)` for
/// majorants, both taken over the closed constraint regions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorantCertificate {
    pub kind: Kind,
    #[serde(rename = "interval_set")]
    pub target: IntervalSet,
    #[serde(rename = "N")]
    pub n: usize,
    pub coeffs: Vec<f64>,
    pub b0: f64,
    #[serde(rename = "B")]
    pub b_ratio: Option<f64>,
    pub worst_slack: f64,
    pub status: Status,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl MinorantCertificate {
    pub fn series(&self) -> ChebSeries {
        ChebSeries::new(self.coeffs.clone())
    }

    pub fn is_feasible(&self) -> bool {
        self.status == Status::Feasible
    }

    /// Evaluates `p(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        self.series().eval(&t)
    }

    /// Shifts `b_0` down (minorant) or up (majorant) so that binary64
    /// evaluation of `p` stays on the right side of the indicator, then
    /// recomputes the slack.
    pub fn with_safety_margin(&self) -> Self {
        let regions = regions(self.kind, &self.target);
        let mut q = to_q(self.kind, &self.coeffs);
        let check = finalize(&mut q, &regions);
        self.rebuilt(q, check)
    }

    fn rebuilt(&self, q: Vec<f64>, check: SlackCheck) -> Self {
        let coeffs = to_q(self.kind, &q);
        let b0 = coeffs[0];
        Self { b_ratio: ratio(&coeffs), coeffs, b0, worst_slack: check.slack, ..self.clone() }
    }

    /// True for a Feasible certificate whose recomputed slack is within
    /// [`VERIFY_TOL`].
    pub fn is_sound(&self) -> bool {
        let v = verify_certificate(self);
        self.is_feasible() && v.certified && v.slack <= VERIFY_TOL && (self.kind == Kind::Majorant || self.b0 > 0.0)
    }
}

fn ratio(coeffs: &[f64]) -> Option<f64> {
    let b0 = coeffs[0];
    (b0 > 0.0).then(|| coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs())) / b0)
}

/// `B = max_n |b_n| / b_0`.
pub fn compute_b(c: &MinorantCertificate) -> Result<f64> {
    let b0 = c.coeffs.first().copied().unwrap_or(0.0);
    if !(b0 > 0.0) {
        return Err(Error::CorruptCertificate(format!("b0 = {b0} is not positive")));
    }
    Ok(c.coeffs.iter().fold(0.0_f64, |m, x| m.max(x.abs())) / b0)
}

/// A closed constraint region `q <= cap` on `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Region {
    pub lo: f64,
    pub hi: f64,
    pub cap: f64,
}

/// Both problems are phrased as `q <= cap` on closed regions: `q = p` for
/// minorants and `q = -p` for majorants. The regions cover `[-1, 1]`, and
/// where two meet the smaller cap governs.
pub(crate) fn regions(kind: Kind, target: &IntervalSet) -> Vec<Region> {
    let mut out: Vec<Region> =
        target.complement_closure().intervals().iter().map(|&(lo, hi)| Region { lo, hi, cap: 0.0 }).collect();
    match kind {
        Kind::Minorant => out.extend(target.proper_intervals().map(|(lo, hi)| Region { lo, hi, cap: 1.0 })),
        Kind::Majorant => out.extend(target.intervals().iter().map(|&(lo, hi)| Region { lo, hi, cap: -1.0 })),
    }
    out.sort_by(|x, y| x.lo.total_cmp(&y.lo).then(x.hi.total_cmp(&y.hi)));
    out
}

fn cap_at(regions: &[Region], t: f64) -> f64 {
    regions.iter().filter(|r| r.lo <= t && t <= r.hi).map(|r| r.cap).fold(f64::INFINITY, f64::min)
}

fn to_q(kind: Kind, c: &[f64]) -> Vec<f64> {
    match kind {
        Kind::Minorant => c.to_vec(),
        Kind::Majorant => c.iter().map(|x| -x).collect(),
    }
}

/// Outcome of a certified global maximization of `q - cap`.
#[derive(Clone, Debug)]
pub struct SlackCheck {
    /// Maximum over the exact candidate set (endpoints and critical points).
    pub slack: f64,
    /// Where it is attained.
    pub at: f64,
    /// False when a dense sample exceeded the candidate maximum, i.e. root
    /// isolation missed a critical point.
    pub certified: bool,
    /// Sample maximum plus a Lipschitz allowance for the gaps; reported only
    /// when `certified` is false.
    pub fallback_bound: Option<f64>,
    /// Every candidate with its violation, in region order.
    pub candidates: Vec<(f64, f64)>,
}

impl SlackCheck {
    /// The slack when certified, otherwise the fallback upper bound.
    pub fn upper_bound(&self) -> f64 {
        self.fallback_bound.unwrap_or(self.slack)
    }
}

fn check_slack(q: &ChebSeries, regions: &[Region]) -> SlackCheck {
    let n = q.degree();
    let tq = ChebTSeries::from_u(q.coeffs());
    let crit = real_roots(&tq.derivative(), -1.0, 1.0);
    let scale: f64 = q.coeffs().iter().enumerate().map(|(k, c)| c.abs() * (k + 1) as f64).sum();
    let lip = q.lipschitz_bound();
    let samples = 32 * (n + 1) + 2;

    let mut best = (f64::NEG_INFINITY, -1.0);
    let mut certified = true;
    let mut fallback = f64::NEG_INFINITY;
    let mut candidates = Vec::new();
    for r in regions {
        let mut local = f64::NEG_INFINITY;
        let lo_i = crit.partition_point(|&x| x <= r.lo);
        let hi_i = crit.partition_point(|&x| x < r.hi);
        let pts = std::iter::once(r.lo).chain(crit[lo_i..hi_i].iter().copied()).chain((r.hi > r.lo).then_some(r.hi));
        for t in pts {
            let v = q.eval(&t) - r.cap;
            candidates.push((t, v));
            local = local.max(v);
            if v > best.0 {
                best = (v, t);
            }
        }
        if r.hi > r.lo {
            // Independent dense scan, uniform in the angle.
            let (th_hi, th_lo) = (r.lo.acos(), r.hi.acos());
            let mut sample_max = f64::NEG_INFINITY;
            let mut prev = r.hi;
            let mut gap: f64 = 0.0;
            for k in 0..=samples {
                let th = th_lo + (th_hi - th_lo) * k as f64 / samples as f64;
                let t = th.cos().clamp(r.lo, r.hi);
                gap = gap.max((prev - t).abs());
                prev = t;
                sample_max = sample_max.max(q.eval(&t) - r.cap);
            }
            let bound = sample_max + lip * gap / 2.0;
            fallback = fallback.max(bound);
            if sample_max > local + 1e-12 * scale.max(1.0) {
                certified = false;
            }
        } else {
            fallback = fallback.max(local);
        }
    }
    SlackCheck { slack: best.0, at: best.1, certified, fallback_bound: (!certified).then_some(fallback), candidates }
}

/// Certified `max (q - cap)` of a certificate over its constraint regions,
/// recomputed from scratch.
pub fn verify_certificate(c: &MinorantCertificate) -> SlackCheck {
    let regions = regions(c.kind, &c.target);
    check_slack(&ChebSeries::new(to_q(c.kind, &c.coeffs)), &regions)
}

/// Same as [`verify_certificate`] for a bare series.
pub fn max_violation(kind: Kind, target: &IntervalSet, p: &ChebSeries) -> SlackCheck {
    check_slack(&ChebSeries::new(to_q(kind, p.coeffs())), &regions(kind, target))
}

/// Bound on the binary64 evaluation error of the U-series recurrence.
fn eval_margin(q: &[f64]) -> f64 {
    let s: f64 = q.iter().enumerate().skip(1).map(|(n, c)| c.abs() * ((n + 1) * (n + 1)) as f64).sum();
    8.0 * f64::EPSILON * s
}

fn clean(q: &mut [f64]) {
    let m = q.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    for x in q.iter_mut() {
        if x.abs() <= TRIM_TOLERANCE * m {
            *x = 0.0;
        }
    }
}

/// Lowers `q_0` by the positive part of the certified violation plus the
/// evaluation margin, and returns the recomputed check.
fn finalize(q: &mut [f64], regions: &[Region]) -> SlackCheck {
    clean(q);
    let check = check_slack(&ChebSeries::new(q.to_vec()), regions);
    let shift = (check.upper_bound() + eval_margin(q)).max(0.0);
    if shift > 0.0 {
        q[0] -= shift;
    }
    check_slack(&ChebSeries::new(q.to_vec()), regions)
}

fn merge_nodes(nodes: &mut Vec<f64>, extra: impl IntoIterator<Item = f64>) -> usize {
    let before = nodes.len();
    nodes.extend(extra);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    nodes.len() - before
}

/// Solves the node LP. `nodes` must contain the `(n+1)`-point Gauss rule,
/// whose positive weights give a feasible starting basis.
fn node_lp(n: usize, nodes: &[f64], caps: &[f64], tol: f64) -> Result<(f64, Vec<f64>)> {
    let cols: Vec<Vec<f64>> = nodes.iter().map(|&t| eval_u_all(n, t)).collect();
    let a = DMatrix::from_fn(n + 1, nodes.len(), |i, j| cols[j][i]);
    let mut rhs = vec![0.0; n + 1];
    rhs[0] = 1.0;
    let start: Vec<usize> =
        gauss_chebyshev_u(n + 1).0.iter().filter_map(|g| nodes.iter().position(|t| t == g)).collect();
    let sol = Lp::new(a, rhs, caps.to_vec())
        .with_price_tolerance((tol * 1e-2).min(crate::lp::PRICE_TOL))
        .with_start_basis(start)
        .solve()?;
    Ok((sol.objective, sol.multipliers))
}

/// Largest `b_0` with `sum b_n U_n <= 1_I` on `[-1, 1]`.
pub fn solve_minorant(target: &IntervalSet, n: usize, tol: f64) -> Result<MinorantCertificate> {
    solve(Kind::Minorant, target, n, tol)
}

/// Smallest `b_0` with `sum b_n U_n >= 1_I` on `[-1, 1]`.
pub fn solve_majorant(target: &IntervalSet, n: usize, tol: f64) -> Result<MinorantCertificate> {
    solve(Kind::Majorant, target, n, tol)
}

fn solve(kind: Kind, target: &IntervalSet, n: usize, tol: f64) -> Result<MinorantCertificate> {
    check_degree(n)?;
    if !(1e-12..=1e-3).contains(&tol) {
        return Err(Error::invalid(format!("tol = {tol} outside [1e-12, 1e-3]")));
    }
    let regions = regions(kind, target);
    let mut nodes = Vec::new();
    merge_nodes(&mut nodes, gauss_chebyshev_u(n + 1).0);
    merge_nodes(&mut nodes, gauss_chebyshev_u(8 * (n + 1)).0);
    merge_nodes(&mut nodes, regions.iter().flat_map(|r| [r.lo, r.hi]));
    merge_nodes(&mut nodes, [-1.0, 1.0]);
    let full_refinement = 64 * (n + 1);

    let cert = |q: Vec<f64>, check: SlackCheck, status: Status, reason: Option<String>| {
        let coeffs = to_q(kind, &q);
        MinorantCertificate {
            kind,
            target: target.clone(),
            n,
            b0: coeffs[0],
            b_ratio: if status == Status::Feasible { ratio(&coeffs) } else { None },
            coeffs,
            worst_slack: check.slack,
            status,
            tol,
            reason,
        }
    };

    let mut threshold = tol;
    let mut prev_value = f64::INFINITY;
    let mut stall = 0;
    let mut last = None;
    for _ in 0..MAX_ROUNDS {
        let caps: Vec<f64> = nodes.iter().map(|&t| cap_at(&regions, t)).collect();
        let (value, mut q) = node_lp(n, &nodes, &caps, tol)?;
        clean(&mut q);
        if prev_value - value > tol / 10.0 {
            stall = 0;
        } else {
            stall += 1;
        }
        prev_value = value;
        let check = check_slack(&ChebSeries::new(q.clone()), &regions);

        // The node LP relaxes the semi-infinite one, so `value` bounds the
        // true optimum from above.
        if kind == Kind::Minorant && value <= tol {
            if nodes.len() < full_refinement {
                merge_nodes(&mut nodes, gauss_chebyshev_u(full_refinement).0);
                stall = 0;
                prev_value = f64::INFINITY;
                continue;
            }
            if stall >= 3 {
                let reason = format!("node LP optimum {value:e} <= tol after refinement to {} nodes", nodes.len());
                return Ok(cert(q, check, Status::Infeasible, Some(reason)));
            }
        }

        if check.certified && check.slack <= tol {
            let mut fin = q.clone();
            let fcheck = finalize(&mut fin, &regions);
            let done = match kind {
                Kind::Majorant => true,
                Kind::Minorant => fin[0] > tol,
            };
            if done && fcheck.certified {
                return Ok(cert(fin, fcheck, Status::Feasible, None));
            }
            // Positive value but not clearly above tol once shifted: keep
            // refining with a finer exchange threshold.
            threshold = (threshold * 0.1).max(1e-15);
        }

        let mut extra: Vec<f64> = check.candidates.iter().filter(|(_, v)| *v > threshold).map(|(t, _)| *t).collect();
        if !check.certified {
            extra.push(check.at);
        }
        merge_nodes(&mut nodes, extra);
        last = Some((q, check));
    }
    let (q, check) = last.expect("at least one round ran");
    let reason = format!("no verdict after {MAX_ROUNDS} exchange rounds");
    Ok(cert(q, check, Status::Unresolved, Some(reason)))
}
