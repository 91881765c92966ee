//! The splitting field `F₂ = Q(u, r)` of `t⁸ − 2t⁶ − 2t⁴ − 2t² + 1`.
//!
//! Elements are stored as 16 rational coordinates over the basis
//! `1, u, …, u⁷, r, ru, …, ru⁷`. Products are reduced with
//!
//! * `u⁸ = 2u⁶ + 2u⁴ + 2u² − 1`
//! * `r² = −c·r − 1` where `c = 2/(u + 1/u)` lies in `Q(u)`
//!
//! so the representation of every element is unique and equality is a
//! coordinate comparison.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use thiserror::Error;

use crate::exact::{int, rat, Matrix, Rational};
use crate::scalar::{rational_to_real, Conjugate, Real};

/// Degree of `Q(u)` over `Q`.
pub const BASE_DEGREE: usize = 8;
/// Degree of `Q(u, r)` over `Q`.
pub const DEGREE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero in field")]
    DivisionByZero,
    #[error("unknown constant `{name}`; valid names: {valid}")]
    UnknownConstant { name: String, valid: String },
}

type Half = [Rational; BASE_DEGREE];

fn half_zero() -> Half {
    std::array::from_fn(|_| Rational::zero())
}

fn half_add(a: &Half, b: &Half) -> Half {
    std::array::from_fn(|k| &a[k] + &b[k])
}

fn half_sub(a: &Half, b: &Half) -> Half {
    std::array::from_fn(|k| &a[k] - &b[k])
}

fn half_is_zero(a: &Half) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Product in `Q(u)`, reduced modulo the minimal polynomial of `u`.
fn half_mul(a: &Half, b: &Half) -> Half {
    let mut wide: Vec<Rational> = vec![Rational::zero(); 2 * BASE_DEGREE - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                wide[i + j] += x * y;
            }
        }
    }
    for k in (BASE_DEGREE..wide.len()).rev() {
        let c = std::mem::take(&mut wide[k]);
        if c.is_zero() {
            continue;
        }
        let two_c = &c * int(2);
        wide[k - 2] += &two_c;
        wide[k - 4] += &two_c;
        wide[k - 6] += &two_c;
        wide[k - 8] -= c;
    }
    std::array::from_fn(|k| std::mem::take(&mut wide[k]))
}

/// Inverse in `Q(u)` via the 8x8 multiplication matrix.
fn half_inv(a: &Half) -> Option<Half> {
    if half_is_zero(a) {
        return None;
    }
    let mut basis = half_zero();
    let cols: Vec<Half> = (0..BASE_DEGREE)
        .map(|k| {
            basis[k] = Rational::one();
            let col = half_mul(a, &basis);
            basis[k] = Rational::zero();
            col
        })
        .collect();
    let m = Matrix::from_fn(BASE_DEGREE, BASE_DEGREE, |i, j| cols[j][i].clone());
    let mut rhs = vec![Rational::zero(); BASE_DEGREE];
    rhs[0] = Rational::one();
    let x = m.solve(&rhs).ok()?;
    Some(std::array::from_fn(|k| x[k].clone()))
}

/// `2/(u + 1/u)`, the linear coefficient of the minimal polynomial of `r` over `Q(u)`.
static R_LINEAR_COEFF: Lazy<Half> = Lazy::new(|| {
    let mut u = half_zero();
    u[1] = Rational::one();
    let inv_u = half_inv(&u).expect("u is nonzero");
    let x = half_add(&u, &inv_u);
    let inv_x = half_inv(&x).expect("u + 1/u is nonzero");
    std::array::from_fn(|k| &inv_x[k] * int(2))
});

/// Powers `(1/u)^k`, `k < 8`, used by complex conjugation.
static INV_U_POWERS: Lazy<Vec<Half>> = Lazy::new(|| {
    let mut u = half_zero();
    u[1] = Rational::one();
    let inv_u = half_inv(&u).expect("u is nonzero");
    let mut out = Vec::with_capacity(BASE_DEGREE);
    let mut acc = half_zero();
    acc[0] = Rational::one();
    for _ in 0..BASE_DEGREE {
        out.push(acc.clone());
        acc = half_mul(&acc, &inv_u);
    }
    out
});

/// Element of `Q(u, r)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    coords: [Rational; DEGREE],
}

impl FieldElem {
    pub fn from_coords(coords: [Rational; DEGREE]) -> Self {
        FieldElem { coords }
    }

    /// Panics unless `coords.len() == 16`.
    pub fn from_slice(coords: &[Rational]) -> Self {
        assert_eq!(coords.len(), DEGREE, "field elements have 16 coordinates");
        FieldElem { coords: std::array::from_fn(|k| coords[k].clone()) }
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut coords: [Rational; DEGREE] = std::array::from_fn(|_| Rational::zero());
        coords[0] = q;
        FieldElem { coords }
    }

    pub fn from_int(n: i64) -> Self {
        FieldElem::from_rational(int(n))
    }

    /// The basis monomial `u^a` (`a < 8`) or `r·u^(a-8)` (`8 ≤ a < 16`).
    pub fn basis(a: usize) -> Self {
        let mut e = FieldElem::zero();
        e.coords[a] = Rational::one();
        e
    }

    pub fn u() -> Self {
        FieldElem::basis(1)
    }

    pub fn r() -> Self {
        FieldElem::basis(BASE_DEGREE)
    }

    pub fn coords(&self) -> &[Rational; DEGREE] {
        &self.coords
    }

    fn halves(&self) -> (Half, Half) {
        (
            std::array::from_fn(|k| self.coords[k].clone()),
            std::array::from_fn(|k| self.coords[BASE_DEGREE + k].clone()),
        )
    }

    fn from_halves(lo: Half, hi: Half) -> Self {
        let mut lo = lo.into_iter();
        let mut hi = hi.into_iter();
        FieldElem {
            coords: std::array::from_fn(|k| {
                if k < BASE_DEGREE {
                    lo.next().unwrap()
                } else {
                    hi.next().unwrap()
                }
            }),
        }
    }

    /// Rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then_some(&self.coords[0])
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// No `r` component, i.e. the element lies in `Q(u)`.
    pub fn in_base_field(&self) -> bool {
        self.coords[BASE_DEGREE..].iter().all(Zero::is_zero)
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        FieldElem { coords: std::array::from_fn(|k| &self.coords[k] * q) }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // Column k of the multiplication map is self * e_k.
        let cols: Vec<FieldElem> = (0..DEGREE).map(|k| self * &FieldElem::basis(k)).collect();
        let m = Matrix::from_fn(DEGREE, DEGREE, |i, j| cols[j].coords[i].clone());
        let mut rhs = vec![Rational::zero(); DEGREE];
        rhs[0] = Rational::one();
        let x = m.solve(&rhs).map_err(|_| FieldError::DivisionByZero)?;
        Ok(FieldElem::from_slice(&x))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        Ok(self * &rhs.inv()?)
    }

    /// Integer power; negative exponents go through [`FieldElem::inv`].
    pub fn pow(&self, e: i64) -> Result<Self, FieldError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = FieldElem::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        Ok(acc)
    }

    /// Complex conjugation, realised as the automorphism `u ↦ 1/u`, `r ↦ r`.
    pub fn conj(&self) -> Self {
        let (lo, hi) = self.halves();
        let powers = &*INV_U_POWERS;
        let mut new_lo = half_zero();
        let mut new_hi = half_zero();
        for k in 0..BASE_DEGREE {
            if !lo[k].is_zero() {
                for (dst, p) in new_lo.iter_mut().zip(&powers[k]) {
                    *dst += &lo[k] * p;
                }
            }
            if !hi[k].is_zero() {
                for (dst, p) in new_hi.iter_mut().zip(&powers[k]) {
                    *dst += &hi[k] * p;
                }
            }
        }
        FieldElem::from_halves(new_lo, new_hi)
    }

    /// `|z|²` as a field element, i.e. `z · conj(z)`.
    pub fn norm_sqr(&self) -> Self {
        self * &self.conj()
    }

    /// Numeric value in double precision.
    pub fn embed(&self) -> Complex<f64> {
        self.embed_in::<f64>()
    }

    /// Numeric value with `u` and `r` at their distinguished complex values.
    pub fn embed_in<F: Real>(&self) -> Complex<F> {
        let (u, r) = generator_values::<F>();
        let mut lo = Complex::new(F::zero(), F::zero());
        let mut hi = Complex::new(F::zero(), F::zero());
        for k in (0..BASE_DEGREE).rev() {
            lo = lo * u + Complex::new(rational_to_real(&self.coords[k]), F::zero());
            hi = hi * u + Complex::new(rational_to_real(&self.coords[BASE_DEGREE + k]), F::zero());
        }
        lo + hi * r
    }
}

/// Numeric values of `u` and `r`:
/// `u = (√5−1)/(2√2) + i·√(√5+1)/2` and `r = −(√5+1)/(2√2) − √(√5−1)/2`.
pub fn generator_values<F: Real>() -> (Complex<F>, Complex<F>) {
    let one = F::one();
    let two = one + one;
    let s5 = F::from(5).unwrap().sqrt();
    let s2 = two.sqrt();
    let u = Complex::new((s5 - one) / (two * s2), (s5 + one).sqrt() / two);
    let r = Complex::new(-(s5 + one) / (two * s2) - (s5 - one).sqrt() / two, F::zero());
    (u, r)
}

impl Zero for FieldElem {
    fn zero() -> Self {
        FieldElem { coords: std::array::from_fn(|_| Rational::zero()) }
    }

    fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl One for FieldElem {
    fn one() -> Self {
        FieldElem::from_int(1)
    }
}

impl Add for &FieldElem {
    type Output = FieldElem;

    fn add(self, rhs: Self) -> FieldElem {
        FieldElem { coords: std::array::from_fn(|k| &self.coords[k] + &rhs.coords[k]) }
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;

    fn sub(self, rhs: Self) -> FieldElem {
        FieldElem { coords: std::array::from_fn(|k| &self.coords[k] - &rhs.coords[k]) }
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;

    fn mul(self, rhs: Self) -> FieldElem {
        let (a, b) = self.halves();
        let (c, d) = rhs.halves();
        // (a + rb)(c + rd) = (ac − bd) + r(ad + bc − k·bd), with r² = −k r − 1.
        let ac = half_mul(&a, &c);
        let bd = half_mul(&b, &d);
        let lo = half_sub(&ac, &bd);
        let hi = if half_is_zero(&bd) {
            half_add(&half_mul(&a, &d), &half_mul(&b, &c))
        } else {
            half_sub(
                &half_add(&half_mul(&a, &d), &half_mul(&b, &c)),
                &half_mul(&R_LINEAR_COEFF, &bd),
            )
        };
        FieldElem::from_halves(lo, hi)
    }
}

/// Panics on division by zero; use [`FieldElem::checked_div`] to handle it.
impl Div for &FieldElem {
    type Output = FieldElem;

    fn div(self, rhs: Self) -> FieldElem {
        self.checked_div(rhs).expect("division by zero in field")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;

    fn neg(self) -> FieldElem {
        FieldElem { coords: std::array::from_fn(|k| -&self.coords[k]) }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;

    fn neg(self) -> FieldElem {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElem {
            type Output = FieldElem;

            fn $m(self, rhs: Self) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Conjugate for FieldElem {
    fn conjugate(&self) -> Self {
        self.conj()
    }
}

impl From<Rational> for FieldElem {
    fn from(q: Rational) -> Self {
        FieldElem::from_rational(q)
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> Self {
        FieldElem::from_int(n)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem({self})")
    }
}

/// Writes the element as a sum of basis monomials, e.g. `1/2 + u - 3u^2r`.
impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let a = k % BASE_DEGREE;
            let has_r = k >= BASE_DEGREE;
            let mono = match (a, has_r) {
                (0, false) => String::new(),
                (0, true) => "r".to_string(),
                (1, _) => format!("u{}", if has_r { "r" } else { "" }),
                (_, _) => format!("u^{a}{}", if has_r { "r" } else { "" }),
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else if mag.is_integer() {
                write!(f, "{mag}{mono}")?;
            } else {
                write!(f, "({mag}){mono}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Named elements of the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    U,
    InvU,
    R,
    InvR,
    /// `u + 1/u`
    X,
    Sqrt5,
    Sqrt2,
    /// `i√(√5 + 1) = u − 1/u`
    ISqrtSqrt5p1,
    I,
    /// `τ = −(1 + i)/√2`
    Tau,
    Minus1,
    U1,
    U2,
    U3,
    U4,
    U5,
}

impl Constant {
    pub const ALL: [Constant; 16] = [
        Constant::U,
        Constant::InvU,
        Constant::R,
        Constant::InvR,
        Constant::X,
        Constant::Sqrt5,
        Constant::Sqrt2,
        Constant::ISqrtSqrt5p1,
        Constant::I,
        Constant::Tau,
        Constant::Minus1,
        Constant::U1,
        Constant::U2,
        Constant::U3,
        Constant::U4,
        Constant::U5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constant::U => "u",
            Constant::InvU => "inv_u",
            Constant::R => "r",
            Constant::InvR => "inv_r",
            Constant::X => "x",
            Constant::Sqrt5 => "sqrt5",
            Constant::Sqrt2 => "sqrt2",
            Constant::ISqrtSqrt5p1 => "isqrt_sqrt5p1",
            Constant::I => "i",
            Constant::Tau => "tau",
            Constant::Minus1 => "minus1",
            Constant::U1 => "u1",
            Constant::U2 => "u2",
            Constant::U3 => "u3",
            Constant::U4 => "u4",
            Constant::U5 => "u5",
        }
    }

    pub fn value(self) -> FieldElem {
        CONSTANTS[self as usize].clone()
    }
}

impl FromStr for Constant {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, FieldError> {
        Constant::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| FieldError::UnknownConstant {
                name: s.to_string(),
                valid: Constant::ALL.map(Constant::name).join(", "),
            })
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Looks a constant up by name.
pub fn constant(name: &str) -> Result<FieldElem, FieldError> {
    Ok(name.parse::<Constant>()?.value())
}

static CONSTANTS: Lazy<Vec<FieldElem>> = Lazy::new(|| {
    let one = FieldElem::one();
    let half = rat(1, 2);
    let u = FieldElem::u();
    let r = FieldElem::r();
    let inv_u = u.inv().expect("u is a unit");
    let inv_r = r.inv().expect("r is a unit");
    let x = &u + &inv_u;
    let sqrt5 = &FieldElem::from_int(3) - &(&x * &x);
    let u_minus = &u - &inv_u;
    let sqrt2 = (&x * &(&u_minus * &u_minus)).mul_rational(&-half.clone());
    let r_minus = &r - &inv_r;
    let i = (&u_minus * &r_minus).mul_rational(&-half.clone());
    let inv_sqrt2 = sqrt2.inv().expect("sqrt2 is nonzero");
    let tau = -(&(&one + &i) * &inv_sqrt2);
    let u1 = &one + &sqrt2;
    let u2 = &u_minus * &inv_sqrt2;
    let sqrt5_m1 = &sqrt5 - &one;
    let u3 = &(&sqrt5_m1 * &inv_sqrt2).mul_rational(&half) + &u_minus.mul_rational(&half);
    let u4 = &(&sqrt5_m1 * &inv_sqrt2)
        + &(&(&FieldElem::from_int(3) - &sqrt5).mul_rational(&half) * &u2);
    let u5 = &u2 + &u3;
    let table = [
        (Constant::U, u),
        (Constant::InvU, inv_u),
        (Constant::R, r),
        (Constant::InvR, inv_r),
        (Constant::X, x),
        (Constant::Sqrt5, sqrt5),
        (Constant::Sqrt2, sqrt2),
        (Constant::ISqrtSqrt5p1, u_minus),
        (Constant::I, i),
        (Constant::Tau, tau),
        (Constant::Minus1, -one),
        (Constant::U1, u1),
        (Constant::U2, u2),
        (Constant::U3, u3),
        (Constant::U4, u4),
        (Constant::U5, u5),
    ];
    debug_assert!(table.iter().enumerate().all(|(k, (c, _))| *c as usize == k));
    table.into_iter().map(|(_, v)| v).collect()
});

/// Shorthand for [`Constant::value`].
pub fn c(k: Constant) -> FieldElem {
    k.value()
}
