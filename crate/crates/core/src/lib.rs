//! Sato-Tate minorants of interval indicators in the Chebyshev-U basis,
//! the closed-form Sym^4 classification, effective-constant calculators and
//! Satake-angle data for empirical short-interval counts.
//!
//! The Chebyshev algebra is generic over the scalar type; everything that
//! optimizes or samples works in binary64. The aliases below name the
//! instantiations the rest of the crate uses.

// `!(x >= c)` is the NaN-rejecting form of `x < c` and is used on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arithmetic;
pub mod chebyshev;
pub mod error;
pub mod harness;
pub mod lp;
pub mod measure;
pub mod minorant;
pub mod roots;
pub mod scalar;
pub mod sym4;
pub mod toolkit;

pub use error::{Error, Result};
pub use measure::IntervalSet;
pub use scalar::Scalar;

/// A U-series with binary64 coefficients.
pub type ChebSeries = chebyshev::ChebSeriesOf<f64>;
/// A power-basis polynomial with binary64 coefficients.
pub type MonomialPoly = chebyshev::MonomialPolyOf<f64>;
/// A U-series with exact rational coefficients.
pub type RationalChebSeries = chebyshev::ChebSeriesOf<num_rational::BigRational>;
/// A power-basis polynomial with exact rational coefficients.
pub type RationalMonomialPoly = chebyshev::MonomialPolyOf<num_rational::BigRational>;
