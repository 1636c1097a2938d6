//! Randomized functions as finite seed-indexed lookup tables.
//!
//! A [`RandomizedFn`] is a partial map from (seed, input) bitstring pairs to
//! output bitstrings, with fixed seed, input, and output lengths. It stands
//! in for "feasible randomized computation" extensionally: whatever table is
//! supplied counts as computable. Probabilities come from seed counting —
//! the chance of output `y` on input `x` is the fraction of seeds mapping
//! `(seed, x)` to `y` — so a partially defined table yields substochastic
//! behavior, the missing seeds being mass that never produces an output.
//!
//! Composition splices tables: running `f` then `g` consumes a seed that is
//! `g`'s seed followed by `f`'s. Under that convention the seedless identity
//! table is neutral and composition is associative — randomized functions of
//! matching lengths form a monoid, which the tests exercise exhaustively on
//! small tables.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::bits::{Bits, BitsError, MAX_BITS};
use crate::semiring::Rat;

/// Errors from table construction and composition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RandomizedFnError {
    #[error("table key has seed length {got}, function declares {expected}")]
    SeedLen { expected: usize, got: usize },
    #[error("table key has input length {got}, function declares {expected}")]
    InputLen { expected: usize, got: usize },
    #[error("table value has output length {got}, function declares {expected}")]
    OutputLen { expected: usize, got: usize },
    #[error("cannot compose: outer input length {outer_in} != inner output length {inner_out}")]
    ComposeLen { outer_in: usize, inner_out: usize },
    #[error("combined seed length {0} exceeds the supported maximum {MAX_BITS}")]
    SeedTooLong(usize),
    #[error(transparent)]
    Bits(#[from] BitsError),
}

/// A partial randomized function `2^seed_len x 2^in_len -> 2^out_len`,
/// tabulated explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomizedFn {
    seed_len: usize,
    in_len: usize,
    out_len: usize,
    table: BTreeMap<(Bits, Bits), Bits>,
}

impl RandomizedFn {
    /// An empty (nowhere-defined) table with the given lengths.
    pub fn empty(seed_len: usize, in_len: usize, out_len: usize) -> Self {
        RandomizedFn {
            seed_len,
            in_len,
            out_len,
            table: BTreeMap::new(),
        }
    }

    /// Builds a table from entries, validating every length.
    pub fn from_entries(
        seed_len: usize,
        in_len: usize,
        out_len: usize,
        entries: impl IntoIterator<Item = ((Bits, Bits), Bits)>,
    ) -> Result<Self, RandomizedFnError> {
        let mut f = RandomizedFn::empty(seed_len, in_len, out_len);
        for ((seed, input), output) in entries {
            f.define(seed, input, output)?;
        }
        Ok(f)
    }

    /// Tabulates a total function of (seed, input).
    pub fn tabulate(
        seed_len: usize,
        in_len: usize,
        out_len: usize,
        mut f: impl FnMut(Bits, Bits) -> Bits,
    ) -> Result<Self, RandomizedFnError> {
        let mut out = RandomizedFn::empty(seed_len, in_len, out_len);
        for seed in Bits::all(seed_len) {
            for input in Bits::all(in_len) {
                let value = f(seed, input);
                out.define(seed, input, value)?;
            }
        }
        Ok(out)
    }

    /// The seedless identity on `len`-bit strings.
    pub fn identity(len: usize) -> Self {
        RandomizedFn::tabulate(0, len, len, |_, x| x).expect("identity lengths are consistent")
    }

    /// Adds (or overwrites) one table entry.
    pub fn define(&mut self, seed: Bits, input: Bits, output: Bits) -> Result<(), RandomizedFnError> {
        if seed.len() != self.seed_len {
            return Err(RandomizedFnError::SeedLen {
                expected: self.seed_len,
                got: seed.len(),
            });
        }
        if input.len() != self.in_len {
            return Err(RandomizedFnError::InputLen {
                expected: self.in_len,
                got: input.len(),
            });
        }
        if output.len() != self.out_len {
            return Err(RandomizedFnError::OutputLen {
                expected: self.out_len,
                got: output.len(),
            });
        }
        self.table.insert((seed, input), output);
        Ok(())
    }

    pub fn seed_len(&self) -> usize {
        self.seed_len
    }

    pub fn in_len(&self) -> usize {
        self.in_len
    }

    pub fn out_len(&self) -> usize {
        self.out_len
    }

    /// The table value at (seed, input), if defined.
    pub fn eval(&self, seed: &Bits, input: &Bits) -> Option<Bits> {
        self.table.get(&(*seed, *input)).copied()
    }

    /// Number of defined entries.
    pub fn defined_entries(&self) -> usize {
        self.table.len()
    }

    /// Iterates `((seed, input), output)` in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&(Bits, Bits), &Bits)> {
        self.table.iter()
    }

    /// `2^seed_len` as an exact integer.
    fn seed_space(&self) -> BigInt {
        BigInt::from(1) << self.seed_len
    }

    /// Probability of observing `y` on input `x`: the number of seeds whose
    /// table entry at `x` equals `y`, divided by the size of the seed space.
    /// Counting scans the table, so undefined seeds simply never match.
    pub fn seed_prob(&self, x: &Bits, y: &Bits) -> Result<Rat, RandomizedFnError> {
        if x.len() != self.in_len {
            return Err(RandomizedFnError::InputLen {
                expected: self.in_len,
                got: x.len(),
            });
        }
        if y.len() != self.out_len {
            return Err(RandomizedFnError::OutputLen {
                expected: self.out_len,
                got: y.len(),
            });
        }
        let count = self
            .table
            .iter()
            .filter(|((_, input), output)| input == x && *output == y)
            .count();
        Ok(BigRational::new(BigInt::from(count), self.seed_space()))
    }

    /// The full output distribution on input `x`, as a map from outputs to
    /// exact probabilities. Sums to at most 1; strictly less when some seeds
    /// are undefined at `x`.
    pub fn output_distribution(&self, x: &Bits) -> Result<Vec<(Bits, Rat)>, RandomizedFnError> {
        if x.len() != self.in_len {
            return Err(RandomizedFnError::InputLen {
                expected: self.in_len,
                got: x.len(),
            });
        }
        let mut counts: BTreeMap<Bits, usize> = BTreeMap::new();
        for ((_, input), output) in &self.table {
            if input == x {
                *counts.entry(*output).or_insert(0) += 1;
            }
        }
        let denom = self.seed_space();
        Ok(counts
            .into_iter()
            .map(|(y, c)| (y, BigRational::new(BigInt::from(c), denom.clone())))
            .collect())
    }

    /// Sequential composition "first `inner`, then `self`".
    ///
    /// The composite's seed is `self`'s seed followed by `inner`'s, so the
    /// outer stage reads the leading bits. Defined exactly where both stages
    /// are: entries where `inner` is defined but `self` is not simply drop
    /// out, losing probability mass.
    pub fn rcompose(&self, inner: &RandomizedFn) -> Result<RandomizedFn, RandomizedFnError> {
        if self.in_len != inner.out_len {
            return Err(RandomizedFnError::ComposeLen {
                outer_in: self.in_len,
                inner_out: inner.out_len,
            });
        }
        let seed_len = self.seed_len + inner.seed_len;
        if seed_len > MAX_BITS {
            return Err(RandomizedFnError::SeedTooLong(seed_len));
        }
        // Index the outer table by input value for the splice.
        let mut outer_by_input: BTreeMap<Bits, Vec<(Bits, Bits)>> = BTreeMap::new();
        for ((outer_seed, input), output) in &self.table {
            outer_by_input
                .entry(*input)
                .or_default()
                .push((*outer_seed, *output));
        }
        let mut out = RandomizedFn::empty(seed_len, inner.in_len, self.out_len);
        for ((inner_seed, input), mid) in &inner.table {
            if let Some(outers) = outer_by_input.get(mid) {
                for (outer_seed, output) in outers {
                    let seed = outer_seed.concat(inner_seed)?;
                    out.define(seed, *input, *output)?;
                }
            }
        }
        Ok(out)
    }
}
