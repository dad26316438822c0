//! Scalar abstraction for the basis-change algebra.
//!
//! Polynomial algebra in the U and power bases only needs a field, so it is
//! written once over [`Scalar`] and used with `f64` for numerics, `f32` where
//! memory matters, and [`BigRational`] when an exact answer is wanted.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + Signed + FromPrimitive + ToPrimitive {
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable in scalar type")
    }

    /// Best-effort conversion to binary64.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
}

impl Scalar for f64 {
    const EXACT: bool = false;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}
