//! Chebyshev polynomials of the second kind and integrals against the
//! Sato-Tate measure `(2/pi) sqrt(1 - t^2) dt`.
//!
//! The `U_n` are orthonormal for this measure, so the integral of a series
//! `sum b_n U_n` is simply `b_0`. Everything here is generic over
//! [`Scalar`]; the crate root exposes `f64` and exact-rational aliases.

mod monomial;
pub mod quadrature;

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use monomial::MonomialPolyOf;

/// Largest degree accepted by basis conversions and the solvers.
pub const MAX_DEGREE: usize = 1024;

/// Relative size below which trailing coefficients are dropped by
/// [`ChebSeriesOf::normalized`].
pub const TRIM_TOLERANCE: f64 = 1e-14;

pub(crate) fn check_degree(degree: usize) -> Result<()> {
    if degree > MAX_DEGREE {
        return Err(Error::DegreeTooLarge { degree, cap: MAX_DEGREE });
    }
    Ok(())
}

/// `U_n(t)` by the three-term recurrence. Values of `t` outside `[-1, 1]`
/// are accepted and extrapolate the polynomial.
pub fn eval_u<T: Scalar>(n: usize, t: &T) -> T {
    let mut prev = T::zero();
    let mut cur = T::one();
    let two_t = T::two() * t.clone();
    for _ in 0..n {
        let next = two_t.clone() * cur.clone() - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All of `U_0(t), ..., U_n(t)`.
pub fn eval_u_all(n: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut prev = 0.0;
    let mut cur = 1.0;
    out.push(cur);
    for _ in 0..n {
        let next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// `T_n(t)` by the three-term recurrence.
pub fn eval_t<T: Scalar>(n: usize, t: &T) -> T {
    if n == 0 {
        return T::one();
    }
    let mut prev = T::one();
    let mut cur = t.clone();
    let two_t = T::two() * t.clone();
    for _ in 1..n {
        let next = two_t.clone() * cur.clone() - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// A polynomial `sum_{n=0}^{N} b_n U_n(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebSeriesOf<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> ChebSeriesOf<T> {
    /// Wraps the coefficients `b_0..b_N` as given. An empty vector is the
    /// zero series.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![T::zero()])
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The single basis polynomial `U_n`.
    pub fn basis(n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    /// Drops trailing coefficients that are zero (exact types) or below
    /// [`TRIM_TOLERANCE`] relative to the largest coefficient.
    pub fn normalized(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        if T::EXACT {
            while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
                coeffs.pop();
            }
        } else {
            let scale = coeffs.iter().map(|c| c.approx().abs()).fold(0.0, f64::max);
            while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.approx().abs() <= TRIM_TOLERANCE * scale) {
                coeffs.pop();
            }
        }
        Self::new(coeffs)
    }

    /// Backward (Clenshaw) evaluation of `sum b_n U_n(t)`.
    pub fn eval(&self, t: &T) -> T {
        let two_t = T::two() * t.clone();
        let mut y1 = T::zero();
        let mut y2 = T::zero();
        for b in self.coeffs.iter().rev() {
            let y0 = b.clone() + two_t.clone() * y1.clone() - y2;
            y2 = y1;
            y1 = y0;
        }
        y1
    }

    /// Integral against the Sato-Tate measure, which is `b_0`.
    pub fn st_integral(&self) -> T {
        self.coeffs[0].clone()
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    /// Product of two series, linearized with `U_m U_n = sum_k U_{m+n-2k}`.
    pub fn mul_series(&self, other: &Self) -> Self {
        let mut out = vec![T::zero(); self.degree() + other.degree() + 1];
        for (m, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (n, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a.clone() * b.clone();
                for k in 0..=m.min(n) {
                    let idx = m + n - 2 * k;
                    out[idx] = out[idx].clone() + ab.clone();
                }
            }
        }
        Self::new(out)
    }

    /// Power-basis form, by Clenshaw's recurrence run on polynomials.
    pub fn to_monomial(&self) -> Result<MonomialPolyOf<T>> {
        check_degree(self.degree())?;
        // y_k = b_k + 2x y_{k+1} - y_{k+2}; the series equals y_0.
        let mut y1: Vec<T> = Vec::new();
        let mut y2: Vec<T> = Vec::new();
        for b in self.coeffs.iter().rev() {
            let mut y0 = vec![T::zero(); y1.len() + 1];
            y0[0] = b.clone();
            for (i, c) in y1.iter().enumerate() {
                y0[i + 1] = y0[i + 1].clone() + T::two() * c.clone();
            }
            for (i, c) in y2.iter().enumerate() {
                y0[i] = y0[i].clone() - c.clone();
            }
            y2 = y1;
            y1 = y0;
        }
        Ok(MonomialPolyOf::new(y1))
    }

    /// Series from power-basis coefficients, by Horner's scheme with
    /// `x U_0 = U_1 / 2` and `x U_k = (U_{k+1} + U_{k-1}) / 2`.
    pub fn from_monomial(p: &MonomialPolyOf<T>) -> Result<Self> {
        check_degree(p.degree())?;
        let half = T::half();
        let mut acc: Vec<T> = Vec::new();
        for a in p.coeffs().iter().rev() {
            let mut next = vec![T::zero(); acc.len() + 1];
            for (k, c) in acc.iter().enumerate() {
                let hc = half.clone() * c.clone();
                next[k + 1] = next[k + 1].clone() + hc.clone();
                if k > 0 {
                    next[k - 1] = next[k - 1].clone() + hc;
                }
            }
            next[0] = next[0].clone() + a.clone();
            acc = next;
        }
        Ok(Self::new(acc))
    }
}

impl ChebSeriesOf<f64> {
    /// Largest absolute coefficient divided by `b_0`.
    pub fn coefficient_ratio(&self) -> f64 {
        let m = self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        m / self.coeffs[0]
    }

    /// Upper bound on `|p'(t)|` over `[-1, 1]`, using `|U_n'| <= n(n+1)(n+2)/3`.
    pub fn lipschitz_bound(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                let n = n as f64;
                c.abs() * n * (n + 1.0) * (n + 2.0) / 3.0
            })
            .sum()
    }
}

impl<T: Scalar> Add for &ChebSeriesOf<T> {
    type Output = ChebSeriesOf<T>;

    fn add(self, rhs: Self) -> ChebSeriesOf<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        ChebSeriesOf::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &ChebSeriesOf<T> {
    type Output = ChebSeriesOf<T>;

    fn sub(self, rhs: Self) -> ChebSeriesOf<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        ChebSeriesOf::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &ChebSeriesOf<T> {
    type Output = ChebSeriesOf<T>;

    fn mul(self, rhs: Self) -> ChebSeriesOf<T> {
        self.mul_series(rhs)
    }
}

impl<T: Scalar> Neg for &ChebSeriesOf<T> {
    type Output = ChebSeriesOf<T>;

    fn neg(self) -> ChebSeriesOf<T> {
        ChebSeriesOf::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

/// `U_m U_n` as a series; every coefficient is 0 or 1.
pub fn u_product<T: Scalar>(m: usize, n: usize) -> ChebSeriesOf<T> {
    let mut coeffs = vec![T::zero(); m + n + 1];
    for k in 0..=m.min(n) {
        coeffs[m + n - 2 * k] = T::one();
    }
    ChebSeriesOf::new(coeffs)
}

/// `<U_m, U_n>` in `L^2(mu_ST)`.
pub fn st_inner(m: usize, n: usize) -> f64 {
    if m == n {
        1.0
    } else {
        0.0
    }
}

/// `T_k` expressed in the U basis.
pub fn t_to_u<T: Scalar>(k: usize) -> ChebSeriesOf<T> {
    let mut coeffs = vec![T::zero(); k + 1];
    match k {
        0 => coeffs[0] = T::one(),
        1 => coeffs[1] = T::half(),
        _ => {
            coeffs[k] = T::half();
            coeffs[k - 2] = -T::half();
        }
    }
    ChebSeriesOf::new(coeffs)
}

/// Converts `sum c_k T_k` to the U basis.
pub fn t_series_to_u<T: Scalar>(c: &[T]) -> ChebSeriesOf<T> {
    let mut out = vec![T::zero(); c.len().max(1)];
    for (k, ck) in c.iter().enumerate() {
        match k {
            0 => out[0] = out[0].clone() + ck.clone(),
            1 => out[1] = out[1].clone() + ck.clone() * T::half(),
            _ => {
                let h = ck.clone() * T::half();
                out[k] = out[k].clone() + h.clone();
                out[k - 2] = out[k - 2].clone() - h;
            }
        }
    }
    ChebSeriesOf::new(out)
}

/// `m`-th Catalan number.
pub fn catalan(m: u64) -> BigInt {
    binomial(BigInt::from(2 * m), BigInt::from(m)) / BigInt::from(m + 1)
}

/// `int x^{2m} d mu_ST = Catalan(m) / 4^m`, exactly.
pub fn st_moment(m: u64) -> BigRational {
    let four_m = BigInt::one() << (2 * m);
    BigRational::new(catalan(m), four_m)
}

/// `int x^k d mu_ST`; zero for odd `k`.
pub fn st_power_moment(k: u64) -> BigRational {
    if k % 2 == 1 {
        BigRational::zero()
    } else {
        st_moment(k / 2)
    }
}
