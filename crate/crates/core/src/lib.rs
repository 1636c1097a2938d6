//! Exact matrix semantics for finite cipher systems.
//!
//! This crate decides security properties of finite, explicitly tabulated
//! cipher systems by two deliberately independent means and insists they
//! agree:
//!
//! 1. **directly**, from the defining quantifiers and probabilities — sets
//!    of possible plaintexts, Bayes posteriors, exhaustive game play;
//! 2. **diagrammatically**, as commutativity of small squares of matrices
//!    over a semiring — Boolean matrices for possibilistic security,
//!    exact-rational stochastic matrices for statistical security, and
//!    parameter-indexed families of substochastic matrices for
//!    indistinguishability against tabulated adversaries.
//!
//! The layers, bottom up:
//!
//! * [`bits`], [`semiring`], [`encoded`], [`matrix`], [`dist`] — bitstrings,
//!   Boolean/rational scalars, labeled index sets, dense matrices, exact
//!   distributions;
//! * [`diagram`] — path enumeration and commutativity checking;
//! * [`symbolic`] — Dolev-Yao systems and possibilistic perfect security;
//! * [`shannon`] — key/plaintext distributions and statistical perfect
//!   security;
//! * [`ensemble`] — seeded lookup-table functions, security-parameter-
//!   indexed ensembles, negligibility policies, and the IND-CPA / IND-CCA2
//!   games;
//! * [`gen`] — seeded random generators for systems, used by the
//!   cross-check sweeps.
//!
//! All arithmetic is exact (`BigRational`); verdicts never depend on
//! floating-point rounding. The crate is `no_std` (with `alloc`) so the
//! decision procedures can be embedded anywhere; everything is pure and
//! immutable.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bits;
pub mod diagram;
pub mod dist;
pub mod encoded;
pub mod ensemble;
pub mod gen;
pub mod matrix;
pub mod semiring;
pub mod shannon;
pub mod symbolic;

pub use bits::Bits;
pub use diagram::Diagram;
pub use dist::Dist;
pub use encoded::{EncodedSet, FinSet};
pub use matrix::Matrix;
pub use semiring::Rat;
pub use shannon::ShannonSystem;
pub use symbolic::DolevYaoSystem;
