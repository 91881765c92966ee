//! Clock and shift operators and the displacement operators
//! `D_{i,j} = τ^{ij} X^i Z^j` with `ω = e^{2πi/d}` and `τ = −e^{iπ/d}`.
//!
//! Operators are generic over the scalar: [`FieldElem`] gives exact matrices
//! (only for `d = 4`, where `ω = i` and `τ = −(1+i)/√2` live in the field),
//! `Complex<F>` gives floating point matrices for any `d ≥ 2`.

use num_complex::Complex;
use num_traits::One;
use thiserror::Error;

use crate::exact::Matrix;
use crate::field::{c, Constant, FieldElem};
use crate::scalar::{Conjugate, Real, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("exact operators are only available for d = 4, got {0}")]
    ExactDimension(usize),
    #[error("index ({i}, {j}) out of range for d = {d}")]
    Index { i: usize, j: usize, d: usize },
    #[error("state has {got} components, expected {expected}")]
    StateDimension { expected: usize, got: usize },
}

pub type OpMatrix<T> = Matrix<T>;

/// Scalars that can host the phases `ω^k` and `τ^k` for a given `d`.
pub trait WeylScalar: Ring + Conjugate {
    fn omega_power(d: usize, k: usize) -> Result<Self, WeylError>;
    fn tau_power(d: usize, k: usize) -> Result<Self, WeylError>;
}

impl WeylScalar for FieldElem {
    fn omega_power(d: usize, k: usize) -> Result<Self, WeylError> {
        if d != 4 {
            return Err(WeylError::ExactDimension(d));
        }
        Ok(match k % 4 {
            0 => FieldElem::one(),
            1 => c(Constant::I),
            2 => FieldElem::from_int(-1),
            _ => -c(Constant::I),
        })
    }

    fn tau_power(d: usize, k: usize) -> Result<Self, WeylError> {
        if d != 4 {
            return Err(WeylError::ExactDimension(d));
        }
        Ok(c(Constant::Tau).pow((k % 8) as i64).expect("nonnegative power"))
    }
}

impl<F: Real> WeylScalar for Complex<F> {
    fn omega_power(d: usize, k: usize) -> Result<Self, WeylError> {
        let k = k % d;
        let angle = F::TAU() * F::from(k).unwrap() / F::from(d).unwrap();
        Ok(Complex::from_polar(F::one(), angle))
    }

    fn tau_power(d: usize, k: usize) -> Result<Self, WeylError> {
        // τ^k = (−1)^k e^{iπk/d}; the period is 2d.
        let k = k % (2 * d);
        let angle = F::PI() * F::from(k).unwrap() / F::from(d).unwrap();
        let z = Complex::from_polar(F::one(), angle);
        Ok(if k % 2 == 1 { -z } else { z })
    }
}

/// Index pair `(i, j)` with `0 ≤ i, j < d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylIndex {
    i: usize,
    j: usize,
    d: usize,
}

impl WeylIndex {
    pub fn new(i: usize, j: usize, d: usize) -> Result<Self, WeylError> {
        if d < 2 {
            return Err(WeylError::Dimension(d));
        }
        if i >= d || j >= d {
            return Err(WeylError::Index { i, j, d });
        }
        Ok(WeylIndex { i, j, d })
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// All `d²` indices in row-major order.
    pub fn all(d: usize) -> Result<Vec<WeylIndex>, WeylError> {
        if d < 2 {
            return Err(WeylError::Dimension(d));
        }
        Ok((0..d).flat_map(|i| (0..d).map(move |j| WeylIndex { i, j, d })).collect())
    }

    /// `(−i, −j) mod d`.
    pub fn negated(&self) -> WeylIndex {
        WeylIndex { i: (self.d - self.i) % self.d, j: (self.d - self.j) % self.d, d: self.d }
    }

    pub fn is_origin(&self) -> bool {
        self.i == 0 && self.j == 0
    }
}

fn check_dim<T: WeylScalar>(d: usize) -> Result<(), WeylError> {
    if d < 2 {
        return Err(WeylError::Dimension(d));
    }
    T::omega_power(d, 0).map(|_| ())
}

/// `(Z, X)` with `Z|k⟩ = ω^k|k⟩` and `X|k⟩ = |k+1 mod d⟩`.
pub fn clock_shift<T: WeylScalar>(d: usize) -> Result<(OpMatrix<T>, OpMatrix<T>), WeylError> {
    check_dim::<T>(d)?;
    let phases = (0..d).map(|k| T::omega_power(d, k)).collect::<Result<Vec<_>, _>>()?;
    let z = Matrix::from_fn(d, d, |a, b| if a == b { phases[a].clone() } else { T::zero() });
    let x = Matrix::from_fn(d, d, |a, b| if a == (b + 1) % d { T::one() } else { T::zero() });
    Ok((z, x))
}

/// `D_{i,j} = τ^{ij} X^i Z^j`.
pub fn displacement<T: WeylScalar>(idx: WeylIndex) -> Result<OpMatrix<T>, WeylError> {
    let d = idx.d;
    check_dim::<T>(d)?;
    let tau = T::tau_power(d, idx.i * idx.j)?;
    let mut m = Matrix::zeros(d, d);
    // X^i Z^j |k⟩ = ω^{jk} |k + i⟩
    for k in 0..d {
        let v = tau.clone() * T::omega_power(d, idx.j * k)?;
        m.set((k + idx.i) % d, k, v);
    }
    Ok(m)
}

/// All `d²` displacement operators in row-major `(i, j)` order.
pub fn all_displacements<T: WeylScalar>(d: usize) -> Result<Vec<OpMatrix<T>>, WeylError> {
    WeylIndex::all(d)?.into_iter().map(displacement).collect()
}

/// `D_{i,j}|ψ₀⟩` for every `(i, j)`, row-major.
pub fn orbit<T: WeylScalar>(psi0: &[T], d: usize) -> Result<Vec<Vec<T>>, WeylError> {
    if psi0.len() != d {
        return Err(WeylError::StateDimension { expected: d, got: psi0.len() });
    }
    Ok(all_displacements::<T>(d)?.iter().map(|m| m.mul_vec(psi0)).collect())
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner<T: WeylScalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.conjugate() * y.clone())
}
