//! Dense revised simplex for `min c.x  s.t.  A x = b, x >= 0`.
//!
//! Two phases with one artificial per row. Entering and leaving variables are
//! chosen by Bland's rule (lowest eligible index), so a given problem always
//! follows the same pivot path. The basis is refactorized from scratch every
//! iteration; the problems solved here have few rows and the extra LU is cheap
//! next to pricing.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("the linear program is infeasible")]
    Infeasible,
    #[error("the linear program is unbounded")]
    Unbounded,
    #[error("iteration limit reached")]
    IterationLimit,
    #[error("basis matrix became singular")]
    Singular,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    /// Optimal primal point.
    pub x: Vec<f64>,
    /// Simplex multipliers `B^{-T} c_B`, one per equality row.
    pub multipliers: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct Lp {
    a: DMatrix<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    price_tol: f64,
    start: Option<Vec<usize>>,
}

/// Default threshold below which a negative reduced cost counts as zero.
pub const PRICE_TOL: f64 = 1e-11;
const PIVOT_TOL: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-10;
const ZERO_TOL: f64 = 1e-13;
const RATIO_TIE: f64 = 1e-12;

impl Lp {
    /// Panics if the dimensions of `a`, `b` and `c` disagree.
    pub fn new(a: DMatrix<f64>, b: Vec<f64>, c: Vec<f64>) -> Self {
        assert_eq!(a.nrows(), b.len(), "row count mismatch");
        assert_eq!(a.ncols(), c.len(), "column count mismatch");
        Self { a, b, c, price_tol: PRICE_TOL, start: None }
    }

    /// Starts phase 2 directly from the given columns when they form a
    /// nonsingular, primal feasible basis; otherwise the hint is ignored.
    pub fn with_start_basis(mut self, basis: Vec<usize>) -> Self {
        self.start = Some(basis);
        self
    }

    /// Overrides the optimality threshold on reduced costs.
    pub fn with_price_tolerance(mut self, tol: f64) -> Self {
        self.price_tol = tol;
        self
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        let (m, n) = self.a.shape();
        // Rows with a negative right-hand side are negated so that the
        // all-artificial basis starts feasible.
        let sign: Vec<f64> = self.b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
        let mut a = self.a.clone();
        for (i, s) in sign.iter().enumerate() {
            if *s < 0.0 {
                a.row_mut(i).neg_mut();
            }
        }
        let b = DVector::from_iterator(m, self.b.iter().zip(&sign).map(|(v, s)| v * s));

        let column = |j: usize| -> DVector<f64> {
            if j < n {
                a.column(j).into_owned()
            } else {
                let mut e = DVector::zeros(m);
                e[j - n] = 1.0;
                e
            }
        };

        let mut basis: Vec<usize> = (n..n + m).collect();
        let mut phases = vec![1, 2];
        if let Some(start) = self.start.as_ref().filter(|s| s.len() == m && s.iter().all(|&j| j < n)) {
            let bmat = DMatrix::from_columns(&start.iter().map(|&j| column(j)).collect::<Vec<_>>());
            if let Some(x) = bmat.lu().solve(&b) {
                if x.iter().all(|&v| v >= -FEAS_TOL) {
                    basis = start.clone();
                    phases = vec![2];
                }
            }
        }
        let limit = 20_000 + 50 * (m + n);
        let mut iterations = 0;

        let phase1_cost: Vec<f64> = (0..n + m).map(|j| if j < n { 0.0 } else { 1.0 }).collect();
        let phase2_cost: Vec<f64> = (0..n + m).map(|j| if j < n { self.c[j] } else { 0.0 }).collect();

        for phase in phases {
            let cost = if phase == 1 { &phase1_cost } else { &phase2_cost };
            loop {
                iterations += 1;
                if iterations > limit {
                    return Err(LpError::IterationLimit);
                }
                let bmat = DMatrix::from_columns(&basis.iter().map(|&j| column(j)).collect::<Vec<_>>());
                let lu = bmat.clone().lu();
                let x_b = lu.solve(&b).ok_or(LpError::Singular)?;
                let c_b = DVector::from_iterator(m, basis.iter().map(|&j| cost[j]));
                let pi = bmat.transpose().lu().solve(&c_b).ok_or(LpError::Singular)?;

                // Bland: lowest-index column with negative reduced cost.
                // Artificials never re-enter.
                let entering = (0..n).find(|&j| {
                    if basis.contains(&j) {
                        return false;
                    }
                    let r = cost[j] - pi.dot(&a.column(j));
                    r < -self.price_tol * (1.0 + cost[j].abs())
                });
                let Some(q) = entering else {
                    if phase == 1 {
                        let infeas: f64 =
                            basis.iter().zip(x_b.iter()).filter(|(j, _)| **j >= n).map(|(_, v)| v.abs()).sum();
                        if infeas > FEAS_TOL * (1.0 + b.amax()) {
                            return Err(LpError::Infeasible);
                        }
                        break;
                    }
                    let mut x = vec![0.0; n];
                    for (k, &j) in basis.iter().enumerate() {
                        if j < n {
                            x[j] = x_b[k].max(0.0);
                        }
                    }
                    let objective = basis.iter().zip(x_b.iter()).map(|(&j, v)| cost[j] * v).sum();
                    let multipliers = pi.iter().zip(&sign).map(|(p, s)| p * s).collect();
                    return Ok(LpSolution { x, multipliers, objective, iterations });
                };

                let d = lu.solve(&column(q)).ok_or(LpError::Singular)?;
                let x_scale = 1.0 + x_b.amax();
                // Ratio test; a basic artificial in phase 2 blocks at zero
                // whenever the direction touches it, so it leaves instead of
                // drifting away from zero.
                let mut leave: Option<(usize, f64)> = None;
                for k in 0..m {
                    let level = if x_b[k] <= ZERO_TOL * x_scale { 0.0 } else { x_b[k] };
                    let theta = if phase == 2 && basis[k] >= n && d[k].abs() > PIVOT_TOL {
                        0.0
                    } else if d[k] > PIVOT_TOL {
                        level / d[k]
                    } else {
                        continue;
                    };
                    // Ratios within a relative hair of each other count as a
                    // tie, which Bland breaks by the lowest variable index.
                    leave = match leave {
                        None => Some((k, theta)),
                        Some((r, t)) => {
                            let tie = (theta - t).abs() <= RATIO_TIE * t.max(theta);
                            if (!tie && theta < t) || (tie && basis[k] < basis[r]) {
                                Some((k, theta))
                            } else {
                                Some((r, t))
                            }
                        }
                    };
                }
                let Some((r, _)) = leave else {
                    return Err(LpError::Unbounded);
                };
                basis[r] = q;
            }
        }
        unreachable!("phase 2 always returns")
    }
}
