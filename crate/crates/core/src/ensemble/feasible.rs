//! Security-parameter-indexed families of randomized functions.
//!
//! A [`FeasibleEnsemble`] stores one [`RandomizedFn`] sector per level
//! `1..=L`. Conceptually the level-`ℓ` function is the union of sectors
//! `1..=ℓ` — a partial function on all bitstrings — and storing disjoint
//! sectors (lengths grow strictly with the level) makes the smaller levels
//! restrictions of the larger ones by construction.
//!
//! Profiles must grow strictly in input and output length. Seed lengths
//! either grow strictly too, or are identically zero — the deterministic
//! case, where there is nothing to randomize and a forced fake seed growth
//! would only bloat tables.
//!
//! Level-wise composition of two ensembles has to reconcile their level
//! indexings: the inner function's level-`ℓ` outputs have some length, and
//! the outer ensemble is consulted at the first level able to read them.
//! When the outer ensemble has a sector of exactly that input length, the
//! tables splice; when its levels jump past it, the relevant restriction of
//! the outer function is nowhere defined and the composite level is an
//! empty table that loses all mass — substochastic semantics, not an error.
//! A second, literal alignment rule (matching the outer *output* length
//! against the inner *input* length) is provided behind [`AlignmentRule`]
//! for comparison; it coincides with the first on square profiles and
//! reports an explicit defect error where it is incoherent.

use alloc::vec::Vec;

use thiserror::Error;

use super::randomized::{RandomizedFn, RandomizedFnError};

/// Errors from ensemble construction and composition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnsembleError {
    #[error("{what} lengths must grow strictly with the level; violated at level {level}")]
    NotStrictlyIncreasing { what: &'static str, level: usize },
    #[error(
        "seed lengths must grow strictly with the level or all be zero; violated at level {level}"
    )]
    SeedProfile { level: usize },
    #[error("level {0} out of range 1..={1}")]
    LevelOutOfRange(usize, usize),
    #[error("no outer level can read {needed} bits (inner level {level})")]
    NoAlignment { level: usize, needed: usize },
    #[error(
        "literal alignment is incoherent at inner level {level}: aligned outer level {aligned} \
         reads {outer_in} bits but the inner output is {inner_out} bits"
    )]
    LiteralRuleDefect {
        level: usize,
        aligned: usize,
        outer_in: usize,
        inner_out: usize,
    },
    #[error(transparent)]
    Fn(#[from] RandomizedFnError),
}

/// How [`FeasibleEnsemble::compose`] matches outer levels to inner outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlignmentRule {
    /// Align the outer *input* length with the inner *output* length — the
    /// reading under which composition actually type-checks. Default.
    #[default]
    Composable,
    /// Align the outer *output* length with the inner *input* length, as
    /// sometimes stated; incoherent unless profiles are square, and then an
    /// explicit error.
    Literal,
}

/// A level-indexed family of randomized functions with growing profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleEnsemble {
    levels: Vec<RandomizedFn>,
}

fn strictly_increasing(values: impl Iterator<Item = usize>) -> Option<usize> {
    let mut prev: Option<usize> = None;
    for (i, v) in values.enumerate() {
        if let Some(p) = prev {
            if v <= p {
                return Some(i + 1);
            }
        }
        prev = Some(v);
    }
    None
}

impl FeasibleEnsemble {
    /// Validates the level profiles; `levels[0]` is level 1.
    pub fn new(levels: Vec<RandomizedFn>) -> Result<Self, EnsembleError> {
        if let Some(level) = strictly_increasing(levels.iter().map(|f| f.in_len())) {
            return Err(EnsembleError::NotStrictlyIncreasing {
                what: "input",
                level,
            });
        }
        if let Some(level) = strictly_increasing(levels.iter().map(|f| f.out_len())) {
            return Err(EnsembleError::NotStrictlyIncreasing {
                what: "output",
                level,
            });
        }
        let deterministic = levels.iter().all(|f| f.seed_len() == 0);
        if !deterministic {
            if let Some(level) = strictly_increasing(levels.iter().map(|f| f.seed_len())) {
                return Err(EnsembleError::SeedProfile { level });
            }
        }
        Ok(FeasibleEnsemble { levels })
    }

    /// The identity ensemble on the given (strictly increasing) widths.
    pub fn identity(widths: &[usize]) -> Result<Self, EnsembleError> {
        FeasibleEnsemble::new(widths.iter().map(|&w| RandomizedFn::identity(w)).collect())
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// The sector at 1-based `level`.
    pub fn level(&self, level: usize) -> Result<&RandomizedFn, EnsembleError> {
        if level == 0 || level > self.levels.len() {
            return Err(EnsembleError::LevelOutOfRange(level, self.levels.len()));
        }
        Ok(&self.levels[level - 1])
    }

    pub fn levels(&self) -> &[RandomizedFn] {
        &self.levels
    }

    /// True when every level is seedless.
    pub fn is_deterministic(&self) -> bool {
        self.levels.iter().all(|f| f.seed_len() == 0)
    }

    /// Level-wise composition "first `inner`, then `self`". See the module
    /// docs for the alignment semantics.
    pub fn compose(
        &self,
        inner: &FeasibleEnsemble,
        rule: AlignmentRule,
    ) -> Result<FeasibleEnsemble, EnsembleError> {
        let mut levels = Vec::with_capacity(inner.level_count());
        for (i, inner_fn) in inner.levels.iter().enumerate() {
            let level = i + 1;
            let aligned = match rule {
                AlignmentRule::Composable => self
                    .levels
                    .iter()
                    .position(|f| f.in_len() >= inner_fn.out_len())
                    .ok_or(EnsembleError::NoAlignment {
                        level,
                        needed: inner_fn.out_len(),
                    })?,
                AlignmentRule::Literal => self
                    .levels
                    .iter()
                    .position(|f| f.out_len() >= inner_fn.in_len())
                    .ok_or(EnsembleError::NoAlignment {
                        level,
                        needed: inner_fn.in_len(),
                    })?,
            };
            let outer = &self.levels[aligned];
            let composite = if outer.in_len() == inner_fn.out_len() {
                outer.rcompose(inner_fn)?
            } else if rule == AlignmentRule::Literal {
                return Err(EnsembleError::LiteralRuleDefect {
                    level,
                    aligned: aligned + 1,
                    outer_in: outer.in_len(),
                    inner_out: inner_fn.out_len(),
                });
            } else {
                // The outer levels jump past the inner output length, so the
                // restriction of the outer function to that length is empty:
                // an everywhere-undefined composite level.
                RandomizedFn::empty(
                    outer.seed_len() + inner_fn.seed_len(),
                    inner_fn.in_len(),
                    outer.out_len(),
                )
            };
            levels.push(composite);
        }
        FeasibleEnsemble::new(levels)
    }

    /// The outer level index that [`Self::compose`] consults for the given
    /// inner level, under the composable rule. Exposed for the matrix-
    /// product cross-check.
    pub fn alignment_level(&self, inner_out_len: usize) -> Option<usize> {
        self.levels
            .iter()
            .position(|f| f.in_len() >= inner_out_len)
            .map(|i| i + 1)
    }
}
