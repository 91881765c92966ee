//! Minimal polynomials over `Q`, palindromic reduction, and
//! algebraic-integer / unit predicates.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{Matrix, Rational};
use crate::field::{FieldElem, DEGREE};
use crate::PolyQ;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinPolyError {
    #[error("polynomial is not palindromic")]
    NotPalindromic,
    #[error("palindromic reduction needs even degree, got {0}")]
    OddDegree(usize),
    #[error("palindromic reduction needs a non-constant polynomial")]
    Constant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinPolyResult {
    pub monic: PolyQ,
    /// Integer coefficients, content 1, positive leading coefficient.
    pub primitive: PolyQ,
    pub degree: usize,
}

/// Lowest-degree monic rational polynomial vanishing at `a`.
///
/// The first linear dependence among `1, a, …, a^16`, read off a single
/// row reduction of the power matrix.
pub fn minimal_polynomial(a: &FieldElem) -> MinPolyResult {
    let mut powers = vec![FieldElem::one()];
    for _ in 0..DEGREE {
        let next = powers.last().unwrap() * a;
        powers.push(next);
    }
    let m = Matrix::from_fn(DEGREE, DEGREE + 1, |i, j| powers[j].coords()[i].clone());
    let (r, pivots) = m.rref();
    // The first non-pivot column k is the lowest dependent power; in reduced
    // form it is Σ r[row][k] · (pivot column of row).
    let k = (0..=DEGREE)
        .find(|&j| pivots.get(j) != Some(&j))
        .expect("17 vectors in a 16-dimensional space are dependent");
    let mut coeffs = vec![Rational::zero(); k + 1];
    for (row, &col) in pivots.iter().take(k).enumerate() {
        coeffs[col] = -r.get(row, k).clone();
    }
    coeffs[k] = Rational::one();
    let monic = PolyQ::new(coeffs);
    let primitive = monic.primitive();
    MinPolyResult { monic, primitive, degree: k }
}

/// `p(a)` computed in the field.
pub fn eval_at(p: &PolyQ, a: &FieldElem) -> FieldElem {
    p.eval_with(a, |q| FieldElem::from_rational(q.clone()))
}

pub fn is_algebraic_integer(a: &FieldElem) -> bool {
    minimal_polynomial(a).monic.is_integral()
}

/// Algebraic integer whose monic minimal polynomial has constant term ±1.
pub fn is_unit(a: &FieldElem) -> bool {
    let mp = minimal_polynomial(a);
    mp.monic.is_integral() && mp.monic.coeff(0).abs().is_one()
}

/// For palindromic `p` of degree `2n`, the `q` of degree `n` with
/// `p(t) = tⁿ q(t + 1/t)`.
pub fn palindrome_reduce(p: &PolyQ) -> Result<PolyQ, MinPolyError> {
    let degree = p.degree().ok_or(MinPolyError::Constant)?;
    if degree == 0 {
        return Err(MinPolyError::Constant);
    }
    if !p.is_palindromic() {
        return Err(MinPolyError::NotPalindromic);
    }
    if degree % 2 == 1 {
        return Err(MinPolyError::OddDegree(degree));
    }
    let n = degree / 2;
    let t2p1 = PolyQ::new(vec![Rational::one(), Rational::zero(), Rational::one()]);
    let mut rest = p.clone();
    let mut q = vec![Rational::zero(); n + 1];
    // Peel off the top coefficient with t^(n-k) (t^2 + 1)^k, degree n + k.
    for k in (0..=n).rev() {
        let c = rest.coeff(n + k);
        if c.is_zero() {
            continue;
        }
        let term = &PolyQ::monomial(c.clone(), n - k) * &t2p1.pow(k as u32);
        rest = &rest - &term;
        q[k] = c;
    }
    debug_assert!(rest.is_zero());
    Ok(PolyQ::new(q))
}

/// Whether `lc(p) · Π (t − root)` equals `p` exactly.
pub fn verify_split(p: &PolyQ, roots: &[FieldElem]) -> bool {
    let Some(degree) = p.degree() else {
        return false;
    };
    if roots.len() != degree {
        return false;
    }
    // Coefficients of the product, lowest first.
    let mut prod = vec![FieldElem::one()];
    for root in roots {
        let mut next = vec![FieldElem::zero(); prod.len() + 1];
        for (k, c) in prod.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &(c * root);
        }
        prod = next;
    }
    let lead = p.leading().unwrap();
    prod.iter()
        .enumerate()
        .all(|(k, c)| c.as_rational().is_some_and(|q| q * lead == p.coeff(k)))
}
