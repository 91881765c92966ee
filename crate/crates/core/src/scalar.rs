//! Scalar traits shared by the exact and numeric halves of the crate.
//!
//! Exact code is written against [`Ring`] / [`Field`] and instantiated with
//! [`Rational`](crate::Rational) or [`FieldElem`](crate::FieldElem); numeric
//! code is written against [`Real`] and instantiated with `f64` or the
//! double-double [`Extended`](crate::Extended).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, One, ToPrimitive, Zero};

/// Commutative ring with identity. Equality is assumed to be exact.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A [`Ring`] where every nonzero element can be divided by.
pub trait Field: Ring + Div<Output = Self> {}

impl<T> Field for T where T: Ring + Div<Output = T> {}

/// Involution used to form adjoints. Identity on real scalars.
pub trait Conjugate {
    fn conjugate(&self) -> Self;
}

impl Conjugate for BigRational {
    fn conjugate(&self) -> Self {
        self.clone()
    }
}

impl Conjugate for f32 {
    fn conjugate(&self) -> Self {
        *self
    }
}

impl Conjugate for f64 {
    fn conjugate(&self) -> Self {
        *self
    }
}

impl<F: Float> Conjugate for Complex<F> {
    fn conjugate(&self) -> Self {
        self.conj()
    }
}

/// Floating point scalar for the numeric side: `f32`, `f64` or double-double.
pub trait Real: Float + FloatConst + Debug + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FloatConst + Debug + Send + Sync + 'static {}

/// Converts an arbitrary-size integer to `F`, accumulating 32-bit limbs so
/// that wide types keep more than 53 bits.
pub fn bigint_to_real<F: Real>(n: &BigInt) -> F {
    let (sign, digits) = n.to_u32_digits();
    let base = F::from(4_294_967_296.0_f64).unwrap();
    let mut acc = F::zero();
    for d in digits.iter().rev() {
        acc = acc * base + F::from(*d).unwrap();
    }
    if sign == Sign::Minus {
        -acc
    } else {
        acc
    }
}

/// Nearest `F` to an exact rational.
pub fn rational_to_real<F: Real>(q: &BigRational) -> F {
    if q.is_zero() {
        return F::zero();
    }
    let (n, d) = (q.numer(), q.denom());
    // Small operands convert exactly through f64.
    if let (Some(a), Some(b)) = (n.to_i64(), d.to_i64()) {
        if a.unsigned_abs() < (1 << 53) && b < (1 << 53) {
            return F::from(a).unwrap() / F::from(b).unwrap();
        }
    }
    bigint_to_real::<F>(n) / bigint_to_real::<F>(d)
}

/// Exact rational value of a finite `f64`.
pub fn f64_to_rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use twofloat::TwoFloat;

    #[test]
    fn bigint_conversion_keeps_extended_bits() {
        // 2^80 + 1 is not representable in f64 but is in double-double.
        let n = (BigInt::one() << 80) + BigInt::one();
        let x: TwoFloat = bigint_to_real(&n);
        let back = x - TwoFloat::from(2f64.powi(80));
        assert_eq!(back, TwoFloat::from(1.0));
        let y: f64 = bigint_to_real(&-n);
        assert_eq!(y, -(2f64.powi(80)));
    }

    #[test]
    fn rational_conversion() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        let x: f64 = rational_to_real(&q);
        assert!((x - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(rational_to_real::<f64>(&BigRational::zero()), 0.0);
    }
}
