//! Traces of Frobenius of `y^2 = x^3 + a x + b` by Legendre-symbol sums.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCurve {
    pub a: i64,
    pub b: i64,
}

impl EllipticCurve {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        let c = EllipticCurve { a, b };
        if c.disc_core() == 0 {
            return Err(Error::invalid(format!("y^2 = x^3 + {a}x + {b} is singular")));
        }
        Ok(c)
    }

    /// `4a^3 + 27b^2`.
    fn disc_core(&self) -> i128 {
        let (a, b) = (self.a as i128, self.b as i128);
        4 * a * a * a + 27 * b * b
    }

    /// `-16(4a^3 + 27b^2)`.
    pub fn discriminant(&self) -> i128 {
        -16 * self.disc_core()
    }

    /// Primes dividing `2 * disc` are treated as bad without looking at the
    /// reduction type.
    pub fn is_bad_prime(&self, p: u64) -> bool {
        p == 2 || self.disc_core().rem_euclid(p as i128) == 0
    }
}

/// Bitset of nonzero squares mod `p`.
fn residue_bits(p: u64) -> Vec<u64> {
    let mut bits = vec![0u64; (p as usize).div_ceil(64)];
    let mut s = 0u64;
    for i in 1..=(p - 1) / 2 {
        // i^2 = (i-1)^2 + 2i - 1
        s += 2 * i - 1;
        s = if s >= p { s - p } else { s };
        bits[(s >> 6) as usize] |= 1 << (s & 63);
    }
    bits
}

/// `a_p = -sum_x (x^3 + ax + b | p)` for a good prime `p`; `None` when `p`
/// divides `2 * disc`.
pub fn ec_ap(curve: &EllipticCurve, p: u64) -> Option<i64> {
    if curve.is_bad_prime(p) {
        return None;
    }
    let bits = residue_bits(p);
    let pi = p as i128;
    let red = |v: i128| v.rem_euclid(pi) as u64;
    // f(x) = x^3 + ax + b by finite differences: f(0) = b, df(0) = 1 + a, d2f(0) = 6, d3f = 6
    let mut f = red(curve.b as i128);
    let mut d1 = red(1 + curve.a as i128);
    let mut d2 = 6 % p;
    let d3 = 6 % p;
    let add = |x: u64, y: u64| {
        let s = x + y;
        if s >= p {
            s - p
        } else {
            s
        }
    };
    let mut zeros = 0u64;
    let mut residues = 0u64;
    for _ in 0..p {
        zeros += (f == 0) as u64;
        residues += (bits[(f >> 6) as usize] >> (f & 63)) & 1;
        f = add(f, d1);
        d1 = add(d1, d2);
        d2 = add(d2, d3);
    }
    let non_residues = p - zeros - residues;
    Some(non_residues as i64 - residues as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let e = EllipticCurve::new(1, 1).unwrap();
        assert_eq!(ec_ap(&e, 5), Some(-3));
        assert_eq!(ec_ap(&e, 2), None);
        // 4 + 27 = 31
        assert_eq!(ec_ap(&e, 31), None);
        assert_eq!(e.discriminant(), -496);
        assert!(EllipticCurve::new(0, 0).is_err());
        assert!(EllipticCurve::new(-3, 2).is_err());
    }

    #[test]
    fn hasse_bound() {
        let e = EllipticCurve::new(-7, 13).unwrap();
        for p in crate::arithmetic::primes_up_to(3000) {
            if let Some(a) = ec_ap(&e, p) {
                assert!((a * a) as u64 <= 4 * p, "p = {p}, a = {a}");
            }
        }
    }
}
