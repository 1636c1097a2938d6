//! Dense matrices over a semiring.
//!
//! A morphism between finite sets is stored as a matrix whose **rows are
//! indexed by the source** and whose **columns are indexed by the target**;
//! `entry(a, b)` is the weight of going from source element `a` to target
//! element `b`. Under this convention a kernel is row-stochastic and
//! `f.compose(&g)` is "first `f`, then `g`" — plain matrix multiplication
//! `f · g` with the inner dimension matched.
//!
//! The matrix itself is purely numeric; diagrams pair matrices with named
//! objects and enforce dimension compatibility there.

use alloc::vec::Vec;

use thiserror::Error;

use crate::semiring::{Rat, Semiring};

/// Errors from dimension-sensitive matrix operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("cannot compose {0}x{1} with {2}x{3}: inner dimensions differ")]
    Compose(usize, usize, usize, usize),
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    Shape(usize, usize, usize, usize),
}

/// A dense `rows x cols` matrix with entries in a semiring `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Semiring> Matrix<S> {
    /// The all-zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: alloc::vec![S::zero(); rows * cols],
        }
    }

    /// The `n x n` identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    /// Builds a matrix entrywise from `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// The graph of a total function: `entry(a, f(a)) = 1`, all else `0`.
    ///
    /// Panics if `f` maps some row outside `0..cols`.
    pub fn from_function(rows: usize, cols: usize, mut f: impl FnMut(usize) -> usize) -> Self {
        let mut m = Matrix::zero(rows, cols);
        for a in 0..rows {
            let b = f(a);
            assert!(b < cols, "function value {b} out of range 0..{cols}");
            m.set(a, b, S::one());
        }
        m
    }

    /// A `1 x n` matrix from one row of entries.
    pub fn row_vector(entries: Vec<S>) -> Self {
        Matrix {
            rows: 1,
            cols: entries.len(),
            data: entries,
        }
    }

    /// An `n x 1` matrix from one column of entries.
    pub fn col_vector(entries: Vec<S>) -> Self {
        Matrix {
            rows: entries.len(),
            cols: 1,
            data: entries,
        }
    }

    /// The unique total map to a one-element set: the all-ones column.
    pub fn to_unit(rows: usize) -> Self {
        Matrix::from_fn(rows, 1, |_, _| S::one())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> &S {
        debug_assert!(row < self.rows && col < self.cols);
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: S) {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[row * self.cols + col] = value;
    }

    /// One row as a slice.
    pub fn row(&self, row: usize) -> &[S] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    /// `self · other` — "first `self`, then `other`".
    pub fn compose(&self, other: &Matrix<S>) -> Result<Matrix<S>, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Compose(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out: Matrix<S> = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.entry(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.cols {
                    let term = a.mul(other.entry(j, k));
                    let cur = out.entry(i, k).add(&term);
                    out.set(i, k, cur);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product: `entry((a,c),(b,d)) = self(a,b) · other(c,d)`,
    /// with pair indices flattened row-major, matching flat product sets.
    pub fn kron(&self, other: &Matrix<S>) -> Matrix<S> {
        Matrix::from_fn(
            self.rows * other.rows,
            self.cols * other.cols,
            |r, c| {
                let (a, x) = (r / other.rows, r % other.rows);
                let (b, y) = (c / other.cols, c % other.cols);
                self.entry(a, b).mul(other.entry(x, y))
            },
        )
    }

    pub fn transpose(&self) -> Matrix<S> {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.entry(c, r).clone())
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Matrix<S>) -> Result<Matrix<S>, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::Shape(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |r, c| {
            self.entry(r, c).add(other.entry(r, c))
        }))
    }

    /// Multiplies every entry by a scalar.
    pub fn scale(&self, s: &S) -> Matrix<S> {
        Matrix::from_fn(self.rows, self.cols, |r, c| self.entry(r, c).mul(s))
    }

    /// Applies `f` to every entry, possibly changing the scalar type.
    pub fn map<T: Semiring>(&self, mut f: impl FnMut(&S) -> T) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |r, c| f(self.entry(r, c)))
    }
}

impl Matrix<Rat> {
    /// Sum of the entries in one row.
    pub fn row_sum(&self, row: usize) -> Rat {
        let mut acc = Rat::zero();
        for c in 0..self.cols {
            acc += self.entry(row, c);
        }
        acc
    }

    /// Entries nonnegative and every row sums to exactly 1.
    pub fn is_row_stochastic(&self) -> bool {
        self.is_nonnegative() && (0..self.rows).all(|r| self.row_sum(r) == Semiring::one())
    }

    /// Entries nonnegative and every row sums to at most 1.
    pub fn is_row_substochastic(&self) -> bool {
        self.is_nonnegative() && (0..self.rows).all(|r| self.row_sum(r) <= Semiring::one())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| *x >= Rat::zero())
    }

    /// Forgets magnitudes: nonzero entries become `true`.
    pub fn support(&self) -> Matrix<bool> {
        self.map(|x| !Semiring::is_zero(x))
    }
}
