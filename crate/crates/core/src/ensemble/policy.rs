//! Finite-horizon negligibility.
//!
//! Asymptotic statements ("the advantage is negligible") are made decidable
//! by fixing a horizon `L` and a threshold family `t(ℓ)`: two per-level
//! probability sequences count as equivalent when they differ by at most
//! `t(ℓ)` at every level `1..=L`. The comparison is inclusive — a gap of
//! exactly `t(ℓ)` still passes — and a failure always comes with the first
//! level where the gap exceeds the threshold.

use alloc::vec::Vec;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::semiring::{abs_diff, half_pow, recip, Rat};

/// Errors from policy construction and use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("the horizon must be at least 1")]
    BadMaxLevel,
    #[error("threshold table has {have} entries but the horizon is {need}")]
    TableTooShort { have: usize, need: usize },
    #[error("threshold at level {level} must lie in (0, 1] and not increase")]
    BadThreshold { level: usize },
    #[error("{what} has {have} levels but the horizon is {need}")]
    LengthMismatch {
        what: &'static str,
        have: usize,
        need: usize,
    },
}

/// A per-level bound on how large a gap still counts as nothing.
#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdFamily {
    /// `1 / ℓ^c`.
    RecipPow(u32),
    /// `2^{-ℓ}`.
    ExpHalving,
    /// Explicit values for levels `1, 2, …`.
    Table(Vec<Rat>),
}

impl ThresholdFamily {
    fn value(&self, level: usize) -> Rat {
        match self {
            ThresholdFamily::RecipPow(c) => recip((level as i64).pow(*c).max(1)),
            ThresholdFamily::ExpHalving => half_pow(level),
            ThresholdFamily::Table(values) => values[level - 1].clone(),
        }
    }
}

/// First level at which two sequences drift apart further than allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct GapWitness {
    pub level: usize,
    pub gap: Rat,
    pub threshold: Rat,
}

/// Outcome of a negligible-equivalence comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivReport {
    pub equivalent: bool,
    pub witness: Option<GapWitness>,
}

/// A horizon together with a threshold family valid on it.
#[derive(Debug, Clone, PartialEq)]
pub struct NegligibilityPolicy {
    max_level: usize,
    threshold: ThresholdFamily,
}

impl NegligibilityPolicy {
    pub fn new(max_level: usize, threshold: ThresholdFamily) -> Result<Self, PolicyError> {
        if max_level == 0 {
            return Err(PolicyError::BadMaxLevel);
        }
        if let ThresholdFamily::Table(values) = &threshold {
            if values.len() < max_level {
                return Err(PolicyError::TableTooShort {
                    have: values.len(),
                    need: max_level,
                });
            }
        }
        let policy = NegligibilityPolicy {
            max_level,
            threshold,
        };
        let mut prev: Option<Rat> = None;
        for level in 1..=max_level {
            let t = policy.threshold.value(level);
            let in_range = t > Rat::zero() && t <= Rat::one();
            let nonincreasing = prev.as_ref().is_none_or(|p| &t <= p);
            if !in_range || !nonincreasing {
                return Err(PolicyError::BadThreshold { level });
            }
            prev = Some(t);
        }
        Ok(policy)
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    /// The allowed gap at 1-based `level`.
    pub fn threshold(&self, level: usize) -> Result<Rat, PolicyError> {
        if level == 0 || level > self.max_level {
            return Err(PolicyError::LengthMismatch {
                what: "requested level",
                have: level,
                need: self.max_level,
            });
        }
        Ok(self.threshold.value(level))
    }

    /// Compares two per-level sequences (entry `i` is level `i+1`) up to the
    /// horizon: equivalent iff `|σ_ℓ - τ_ℓ| ≤ t(ℓ)` for every level.
    pub fn negligible_equiv(&self, sigma: &[Rat], tau: &[Rat]) -> Result<EquivReport, PolicyError> {
        for (what, have) in [("left sequence", sigma.len()), ("right sequence", tau.len())] {
            if have < self.max_level {
                return Err(PolicyError::LengthMismatch {
                    what,
                    have,
                    need: self.max_level,
                });
            }
        }
        for level in 1..=self.max_level {
            let gap = abs_diff(&sigma[level - 1], &tau[level - 1]);
            let threshold = self.threshold.value(level);
            if gap > threshold {
                return Ok(EquivReport {
                    equivalent: false,
                    witness: Some(GapWitness {
                        level,
                        gap,
                        threshold,
                    }),
                });
            }
        }
        Ok(EquivReport {
            equivalent: true,
            witness: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::rat;
    use alloc::vec;

    #[test]
    fn constant_quarter_gap_against_reciprocal_fails_at_level_five() {
        let policy = NegligibilityPolicy::new(5, ThresholdFamily::RecipPow(1)).unwrap();
        let sigma = vec![rat(1, 4); 5];
        let tau = vec![rat(0, 1); 5];
        let report = policy.negligible_equiv(&sigma, &tau).unwrap();
        assert!(!report.equivalent);
        let w = report.witness.unwrap();
        assert_eq!(w.level, 5);
        assert_eq!(w.gap, rat(1, 4));
        assert_eq!(w.threshold, rat(1, 5));
    }

    #[test]
    fn gap_exactly_at_the_threshold_passes() {
        // At horizon 4 the same quarter gap survives: 1/4 <= 1/4 at level 4.
        let policy = NegligibilityPolicy::new(4, ThresholdFamily::RecipPow(1)).unwrap();
        let sigma = vec![rat(1, 4); 4];
        let tau = vec![rat(0, 1); 4];
        assert!(policy.negligible_equiv(&sigma, &tau).unwrap().equivalent);
    }

    #[test]
    fn halving_thresholds_are_computed_exactly() {
        let policy = NegligibilityPolicy::new(3, ThresholdFamily::ExpHalving).unwrap();
        assert_eq!(policy.threshold(1).unwrap(), rat(1, 2));
        assert_eq!(policy.threshold(3).unwrap(), rat(1, 8));
    }

    #[test]
    fn table_thresholds_are_validated() {
        let short = NegligibilityPolicy::new(3, ThresholdFamily::Table(vec![rat(1, 2)]));
        assert_eq!(
            short.unwrap_err(),
            PolicyError::TableTooShort { have: 1, need: 3 }
        );
        let increasing = NegligibilityPolicy::new(
            2,
            ThresholdFamily::Table(vec![rat(1, 4), rat(1, 2)]),
        );
        assert_eq!(
            increasing.unwrap_err(),
            PolicyError::BadThreshold { level: 2 }
        );
        let zero = NegligibilityPolicy::new(1, ThresholdFamily::Table(vec![rat(0, 1)]));
        assert_eq!(zero.unwrap_err(), PolicyError::BadThreshold { level: 1 });
    }

    #[test]
    fn comparison_is_reflexive_and_symmetric() {
        let policy = NegligibilityPolicy::new(4, ThresholdFamily::ExpHalving).unwrap();
        let sigma = vec![rat(1, 3), rat(1, 5), rat(1, 7), rat(1, 2)];
        let tau = vec![rat(1, 3), rat(1, 4), rat(1, 7), rat(1, 2)];
        assert!(policy.negligible_equiv(&sigma, &sigma).unwrap().equivalent);
        assert_eq!(
            policy.negligible_equiv(&sigma, &tau).unwrap(),
            policy.negligible_equiv(&tau, &sigma).unwrap()
        );
    }

    #[test]
    fn sequences_shorter_than_the_horizon_are_rejected() {
        let policy = NegligibilityPolicy::new(3, ThresholdFamily::RecipPow(2)).unwrap();
        let err = policy
            .negligible_equiv(&[rat(1, 2)], &[rat(1, 2), rat(1, 2), rat(1, 2)])
            .unwrap_err();
        assert_eq!(
            err,
            PolicyError::LengthMismatch {
                what: "left sequence",
                have: 1,
                need: 3
            }
        );
    }
}
