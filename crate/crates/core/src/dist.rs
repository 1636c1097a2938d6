//! Exact finite probability distributions.
//!
//! A [`Dist`] assigns a nonnegative rational mass to each index of a finite
//! set, summing to exactly 1. Viewed as a `1 x n` row vector it composes
//! with stochastic matrices on the right, which is how priors turn into
//! output distributions.

use alloc::vec::Vec;

use thiserror::Error;

use crate::matrix::{Matrix, MatrixError};
use crate::semiring::{abs_diff, rat, recip, Rat, Semiring};

/// Errors from distribution construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistError {
    #[error("negative mass at index {0}")]
    Negative(usize),
    #[error("masses sum to {0}, expected 1")]
    BadSum(Rat),
    #[error("a distribution needs at least one element")]
    Empty,
    #[error("index {0} out of range for {1} elements")]
    OutOfRange(usize, usize),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A probability distribution over `0..len`, stored as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dist {
    probs: Vec<Rat>,
}

impl Dist {
    /// Validates nonnegativity and total mass exactly 1.
    pub fn new(probs: Vec<Rat>) -> Result<Self, DistError> {
        if probs.is_empty() {
            return Err(DistError::Empty);
        }
        let mut total = Rat::zero();
        for (i, p) in probs.iter().enumerate() {
            if *p < Rat::zero() {
                return Err(DistError::Negative(i));
            }
            total += p;
        }
        if total != rat(1, 1) {
            return Err(DistError::BadSum(total));
        }
        Ok(Dist { probs })
    }

    /// The uniform distribution on `n` elements.
    pub fn uniform(n: usize) -> Result<Self, DistError> {
        if n == 0 {
            return Err(DistError::Empty);
        }
        Ok(Dist {
            probs: alloc::vec![recip(n as i64); n],
        })
    }

    /// All mass on element `i`.
    pub fn point(n: usize, i: usize) -> Result<Self, DistError> {
        if n == 0 {
            return Err(DistError::Empty);
        }
        if i >= n {
            return Err(DistError::OutOfRange(i, n));
        }
        let mut probs = alloc::vec![Rat::zero(); n];
        probs[i] = rat(1, 1);
        Ok(Dist { probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, i: usize) -> &Rat {
        &self.probs[i]
    }

    pub fn probs(&self) -> &[Rat] {
        &self.probs
    }

    /// Indices with strictly positive mass.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.probs[i] > Rat::zero())
            .collect()
    }

    /// The distribution as a `1 x n` row vector.
    pub fn as_row(&self) -> Matrix<Rat> {
        Matrix::row_vector(self.probs.clone())
    }

    /// Pushforward along a row-(sub)stochastic matrix: row vector times
    /// matrix. The result's entries are the output masses; they are returned
    /// raw, since substochastic kernels may lose mass.
    pub fn push(&self, kernel: &Matrix<Rat>) -> Result<Vec<Rat>, DistError> {
        let out = self.as_row().compose(kernel)?;
        Ok(out.row(0).to_vec())
    }

    /// Total variation distance: half the L1 distance.
    pub fn tv(&self, other: &Dist) -> Rat {
        tv_vectors(&self.probs, &other.probs)
    }
}

/// Half the L1 distance between two equal-length mass vectors.
///
/// Accepts raw vectors (not just distributions) so substochastic rows can be
/// compared too; callers guarantee equal length.
pub fn tv_vectors(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len(), "total variation needs equal lengths");
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += abs_diff(x, y);
    }
    acc / rat(2, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rejects_bad_mass() {
        assert_eq!(
            Dist::new(alloc::vec![rat(1, 2), rat(1, 4)]).unwrap_err(),
            DistError::BadSum(rat(3, 4))
        );
        assert_eq!(
            Dist::new(alloc::vec![rat(3, 2), rat(-1, 2)]).unwrap_err(),
            DistError::Negative(1)
        );
    }

    #[test]
    fn uniform_and_point_are_distributions() {
        let u = Dist::uniform(4).unwrap();
        assert_eq!(u.prob(3), &rat(1, 4));
        let p = Dist::point(4, 2).unwrap();
        assert_eq!(p.support(), alloc::vec![2]);
        assert_eq!(u.tv(&p), rat(3, 4));
    }

    #[test]
    fn pushforward_is_row_times_matrix() {
        // Kernel sending everything to index 1.
        let k: Matrix<Rat> = Matrix::from_function(2, 2, |_| 1);
        let d = Dist::new(alloc::vec![rat(1, 3), rat(2, 3)]).unwrap();
        assert_eq!(d.push(&k).unwrap(), alloc::vec![rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn tv_of_identical_distributions_is_zero() {
        let d = Dist::new(alloc::vec![rat(2, 5), rat(3, 5)]).unwrap();
        assert_eq!(d.tv(&d), rat(0, 1));
    }
}
