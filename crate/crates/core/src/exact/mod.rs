//! Exact arithmetic over the rationals: polynomials and dense linear algebra.

mod matrix;
mod poly;

pub use matrix::{LinearError, Matrix};
pub use poly::{Poly, PolyError};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Reduced fraction of arbitrary-precision integers.
pub type Rational = BigRational;

/// `n/d` as a reduced rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}
