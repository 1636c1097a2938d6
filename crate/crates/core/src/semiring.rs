//! Scalar algebras for matrix entries.
//!
//! Matrices over two scalar types drive everything here: Boolean truth
//! values (possibilistic reachability) and exact rationals (probability).
//! Both are commutative semirings; rationals additionally subtract, which
//! the distance computations use. Keeping the interface to the handful of
//! operations below lets one matrix type serve both worlds.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// A commutative semiring, the minimum structure matrix algebra needs.
pub trait Semiring: Clone + PartialEq + core::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

/// The Boolean semiring: `add` is ∨, `mul` is ∧.
pub type Bool = bool;

impl Semiring for bool {
    fn zero() -> Self {
        false
    }
    fn one() -> Self {
        true
    }
    fn add(&self, other: &Self) -> Self {
        *self || *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self && *other
    }
}

/// Exact rational scalars; arbitrary-precision, no rounding anywhere.
pub type Rat = BigRational;

impl Semiring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// `p / q` as an exact rational; panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    BigRational::new(p.into(), q.into())
}

/// `1 / q` as an exact rational; panics if `q == 0`.
pub fn recip(q: i64) -> Rat {
    rat(1, q)
}

/// `1 / 2^k` as an exact rational.
pub fn half_pow(k: usize) -> Rat {
    use num_bigint::BigInt;
    BigRational::new(BigInt::from(1), BigInt::from(2).pow(k as u32))
}

/// Absolute value of a rational difference.
pub fn abs_diff(a: &Rat, b: &Rat) -> Rat {
    let d = a - b;
    if d < Zero::zero() {
        -d
    } else {
        d
    }
}
