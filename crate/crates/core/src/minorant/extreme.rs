//! The even minorant `(x^2 - a^2) x^{2n-2}` of `1_{|x| >= a}`.
//!
//! It vanishes at `+-a`, is `<= 0` between them and at most `1 - a^2` outside,
//! so it lies below the indicator without rescaling. Feasible certificates
//! still get the usual rounding shift of `b_0` (about `1e-14`), since binary64
//! evaluation at the exact zeros can land slightly above 0.

use num_traits::ToPrimitive;

use super::{verify_certificate, Kind, MinorantCertificate, Status, DEFAULT_TOL, VERIFY_TOL};
use crate::chebyshev::{catalan, check_degree};
use crate::error::{Error, Result};
use crate::measure::IntervalSet;
use crate::{ChebSeries, MonomialPoly};

/// `(C_{n-1} / 4^{n-1}) (1 - a^2 - (3/2)/(n+1))`.
pub fn extreme_integral(n: usize, a: f64) -> f64 {
    let m = (n - 1) as u64;
    let moment = catalan(m).to_f64().unwrap_or(f64::INFINITY) / 4f64.powi(m as i32);
    moment * (1.0 - a * a - 1.5 / (n as f64 + 1.0))
}

/// `sqrt(1 - (3/2)/(n+1))`: the integral is positive exactly below it.
pub fn extreme_threshold(n: usize) -> f64 {
    (1.0 - 1.5 / (n as f64 + 1.0)).max(0.0).sqrt()
}

pub fn extreme_minorant(n: usize, a: f64) -> Result<MinorantCertificate> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    check_degree(2 * n)?;
    if !(0.0..1.0).contains(&a) {
        return Err(Error::invalid(format!("a = {a} outside [0, 1)")));
    }
    let mut mono = vec![0.0; 2 * n + 1];
    mono[2 * n] = 1.0;
    mono[2 * n - 2] = -a * a;
    let series = ChebSeries::from_monomial(&MonomialPoly::new(mono))?;
    let target = IntervalSet::new([(-1.0, -a), (a, 1.0)])?;
    let coeffs = series.into_coeffs();
    let b0 = coeffs[0];
    let mut c = MinorantCertificate {
        kind: Kind::Minorant,
        target,
        n: 2 * n,
        coeffs,
        b0,
        b_ratio: None,
        worst_slack: 0.0,
        status: Status::Infeasible,
        tol: DEFAULT_TOL,
        reason: None,
    };
    let check = verify_certificate(&c);
    c.worst_slack = check.slack;
    if b0 > 0.0 && check.certified && check.slack <= VERIFY_TOL {
        c.status = Status::Feasible;
        // the exact zeros at 0 and +-a can round to tiny positive values
        c = c.with_safety_margin();
    } else {
        c.reason = Some(format!("integral {b0:e} is not positive"));
    }
    Ok(c)
}
