use std::fmt;
use std::ops::{Add, Mul, Sub};

use thiserror::Error;

use crate::scalar::{Conjugate, Field, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("entry count {len} does not match {rows}x{cols}")]
    Shape { rows: usize, cols: usize, len: usize },
    #[error("right-hand side has length {got}, expected {expected}")]
    RhsLength { expected: usize, got: usize },
    #[error("inconsistent linear system")]
    Inconsistent,
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinearError> {
        if data.len() != rows * cols {
            return Err(LinearError::Shape { rows, cols, len: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&T) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, k| acc + self.get(k, k).clone())
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, j| acc + self.get(i, j).clone() * v[j].clone())
            })
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> T {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = T::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc = acc + self.get(i, k).clone() * other.get(k, i).clone();
            }
        }
        acc
    }
}

impl<T: Ring + Conjugate> Matrix<T> {
    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conjugate())
    }
}

impl<T: Field> Matrix<T> {
    /// Reduced row echelon form and pivot columns. The pivot in each column
    /// is the first nonzero entry at or below the current row.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = T::one() / m.get(row, col).clone();
            for j in col..m.cols {
                let v = m.get(row, j).clone() * inv.clone();
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = m.get(r, j).clone() - factor.clone() * m.get(row, j).clone();
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column; each basis
    /// vector has a 1 in its free column.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![T::zero(); self.cols];
                v[fc] = T::one();
                for (prow, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(prow, fc).clone();
                }
                v
            })
            .collect()
    }

    /// A solution of `self · x = rhs`; free variables are set to zero.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>, LinearError> {
        if rhs.len() != self.rows {
            return Err(LinearError::RhsLength { expected: self.rows, got: rhs.len() });
        }
        let aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(LinearError::Inconsistent);
        }
        let mut x = vec![T::zero(); self.cols];
        for (prow, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(prow, self.cols).clone();
        }
        Ok(x)
    }
}

impl<T: Ring> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        let mut out = Matrix::<T>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j).clone() + a.clone() * rhs.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl<T: Ring> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Ring> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols.max(1)) {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}
