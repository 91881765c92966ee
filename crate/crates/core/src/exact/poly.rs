use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("shift degree {given} does not match polynomial degree {degree}")]
    ShiftDegree { given: usize, degree: usize },
    #[error("zero polynomial has no degree")]
    ZeroPolynomial,
}

/// Dense univariate polynomial; `coeffs[k]` multiplies `t^k`.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial is
/// the empty vector and the last entry (if any) is the leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c * t^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Poly::monomial(T::one(), 1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Horner evaluation at `x`.
    pub fn eval(&self, x: &T) -> T {
        self.eval_with(x, T::clone)
    }

    /// Evaluates at a point of another ring, lifting coefficients through `lift`.
    pub fn eval_with<S: Ring>(&self, x: &S, lift: impl Fn(&T) -> S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + lift(c))
    }

    /// Coefficient sequence reads the same in both directions.
    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|k| self.coeffs[k] == self.coeffs[n - 1 - k])
    }

    /// `t^n p(t + 1/t)` for `n = deg p`, a polynomial of degree `2n`.
    pub fn eval_shifted(&self, n: usize) -> Result<Self, PolyError> {
        let degree = self.degree().ok_or(PolyError::ZeroPolynomial)?;
        if degree != n {
            return Err(PolyError::ShiftDegree { given: n, degree });
        }
        // t^n (t + 1/t)^k = t^(n-k) (t^2 + 1)^k
        let t2p1 = Poly::new(vec![T::one(), T::zero(), T::one()]);
        let mut acc = Poly::zero();
        let mut power = Poly::one();
        for (k, c) in self.coeffs.iter().enumerate() {
            let term = &Poly::monomial(c.clone(), n - k) * &power;
            acc = &acc + &term;
            power = &power * &t2p1;
        }
        Ok(acc)
    }
}

impl Poly<BigRational> {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// Divides by the leading coefficient. `None` for the zero polynomial.
    pub fn monic(&self) -> Option<Self> {
        let lead = self.leading()?.clone();
        Some(Poly::new(self.coeffs.iter().map(|c| c / &lead).collect()))
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            content = -content;
        }
        Poly::new(
            ints.into_iter()
                .map(|c| BigRational::from_integer(c / &content))
                .collect(),
        )
    }

    /// All coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }
}

impl<T: Ring> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: Self) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Ring> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: Self) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Ring> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: Self) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Ring> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Ring> $tr for Poly<T> {
            type Output = Poly<T>;

            fn $m(self, rhs: Self) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Ring> Zero for Poly<T> {
    fn zero() -> Self {
        Poly::zero()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: fmt::Debug> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

/// Renders as e.g. `t^4 - 6t^2 + 4`; non-integer coefficients are
/// parenthesised: `(1/2)t^2 - 1/3`.
impl fmt::Display for Poly<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match k {
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    type P = Poly<BigRational>;

    #[test]
    fn difference_of_squares() {
        let a = P::from_ints(&[1, 1]);
        let b = P::from_ints(&[-1, 1]);
        assert_eq!(&a * &b, P::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn additive_identity() {
        let p = P::from_ints(&[4, 0, -6, 0, 1]);
        assert_eq!(&p + &P::zero(), p);
    }

    #[test]
    fn hand_expanded_cubic() {
        let sq = P::from_ints(&[1, 2, 1]);
        let lin = P::from_ints(&[-1, 1]);
        assert_eq!(&sq * &lin, P::from_ints(&[-1, -1, 1, 1]));
        assert_eq!((&sq * &lin).degree(), Some(3));
    }

    #[test]
    fn shifted_evaluation() {
        assert_eq!(P::t().eval_shifted(1).unwrap(), P::from_ints(&[1, 0, 1]));
        let px = P::from_ints(&[4, 0, -6, 0, 1]);
        assert_eq!(
            px.eval_shifted(4).unwrap(),
            P::from_ints(&[1, 0, -2, 0, -2, 0, -2, 0, 1])
        );
        // (t + 1/t)^2 - 2 = t^2 + 1/t^2
        let p = P::from_ints(&[-2, 0, 1]);
        assert_eq!(p.eval_shifted(2).unwrap(), P::from_ints(&[1, 0, 0, 0, 1]));
    }

    #[test]
    fn shifted_evaluation_rejects_wrong_degree() {
        let p = P::from_ints(&[-2, 0, 1]);
        assert_eq!(
            p.eval_shifted(3),
            Err(PolyError::ShiftDegree { given: 3, degree: 2 })
        );
        assert_eq!(P::zero().eval_shifted(0), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn primitive_form() {
        let p = P::new(vec![rat(-1, 2), rat(0, 1), rat(-3, 4)]);
        assert_eq!(p.primitive(), P::from_ints(&[2, 0, 3]));
        assert_eq!(p.monic().unwrap(), P::new(vec![rat(2, 3), rat(0, 1), rat(1, 1)]));
        let q = P::from_ints(&[6, 4, -2]);
        assert_eq!(q.primitive(), P::from_ints(&[-3, -2, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(P::from_ints(&[4, 0, -6, 0, 1]).to_string(), "t^4 - 6t^2 + 4");
        assert_eq!(P::from_ints(&[1, 1]).to_string(), "t + 1");
        assert_eq!(P::new(vec![rat(-1, 3), rat(0, 1), rat(1, 2)]).to_string(), "(1/2)t^2 - 1/3");
        assert_eq!(P::from_ints(&[0, -2]).to_string(), "-2t");
        assert_eq!(P::zero().to_string(), "0");
    }

    #[test]
    fn eval_and_palindrome() {
        let p = P::from_ints(&[1, 0, -2, 0, -2, 0, -2, 0, 1]);
        assert!(p.is_palindromic());
        assert!(!P::from_ints(&[4, 0, -6, 0, 1]).is_palindromic());
        assert_eq!(P::from_ints(&[-1, 0, 1]).eval(&rat(3, 1)), rat(8, 1));
    }
}
