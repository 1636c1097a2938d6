//! Level-indexed substochastic matrices over encoded sorts.
//!
//! A [`SortFamily`] is a fixed label set encoded into bitstrings whose
//! width grows with the level — the finite shadow of a sort whose carrier
//! expands as the security parameter does. A [`StochasticEnsemble`] assigns
//! each level a substochastic matrix between two sort families (rows are
//! the source labels, following the crate-wide convention), and
//! [`StochasticEnsemble::realizes`] decides whether those matrices are
//! exactly the seed-counting probabilities of a function family — the
//! bridge between the operational and the linear-algebraic picture.

use alloc::vec::Vec;

use thiserror::Error;

use crate::encoded::{EncodedSet, FinSet, SetError};
use crate::matrix::Matrix;
use crate::semiring::{rat, Rat};

use super::feasible::FeasibleEnsemble;
use super::randomized::RandomizedFnError;

/// Errors from sort families and matrix ensembles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StochasticError {
    #[error("code widths must grow strictly with the level; violated at level {level}")]
    WidthsNotIncreasing { level: usize },
    #[error("expected {need} levels, got {have}")]
    LevelCount { have: usize, need: usize },
    #[error("level {level}: matrix is {rows}x{cols}, expected {need_rows}x{need_cols}")]
    Shape {
        level: usize,
        rows: usize,
        cols: usize,
        need_rows: usize,
        need_cols: usize,
    },
    #[error("level {level}: row {row} is not substochastic")]
    NotSubstochastic { level: usize, row: usize },
    #[error("level {level}: {side} codes are {have} bits wide but the function takes {need}")]
    WidthMismatch {
        level: usize,
        side: &'static str,
        have: usize,
        need: usize,
    },
    #[error("level {0} out of range 1..={1}")]
    LevelOutOfRange(usize, usize),
    #[error(transparent)]
    Encoding(#[from] SetError),
    #[error(transparent)]
    Fn(#[from] RandomizedFnError),
}

/// One label set with a bit encoding per level, widths strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortFamily {
    labels: FinSet,
    levels: Vec<EncodedSet>,
}

/// Smallest width that can carry `n` distinct codes (at least 1).
pub fn default_width(n: usize) -> usize {
    let mut w = 0;
    while (1usize << w) < n {
        w += 1;
    }
    w.max(1)
}

impl SortFamily {
    /// Encodes the labels at each of the given widths (padded indices).
    pub fn new(labels: FinSet, widths: &[usize]) -> Result<Self, StochasticError> {
        let mut levels = Vec::with_capacity(widths.len());
        let mut prev: Option<usize> = None;
        for (i, &w) in widths.iter().enumerate() {
            if prev.is_some_and(|p| w <= p) {
                return Err(StochasticError::WidthsNotIncreasing { level: i + 1 });
            }
            prev = Some(w);
            levels.push(EncodedSet::with_padded_codes(labels.clone(), w)?);
        }
        Ok(SortFamily { labels, levels })
    }

    /// Default widths: the minimal width at level 1, then one more bit per
    /// level.
    pub fn with_default_widths(labels: FinSet, level_count: usize) -> Result<Self, StochasticError> {
        let base = default_width(labels.len());
        let widths: Vec<usize> = (0..level_count).map(|i| base + i).collect();
        SortFamily::new(labels, &widths)
    }

    pub fn labels(&self) -> &FinSet {
        &self.labels
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// The encoding at 1-based `level`.
    pub fn level(&self, level: usize) -> Result<&EncodedSet, StochasticError> {
        if level == 0 || level > self.levels.len() {
            return Err(StochasticError::LevelOutOfRange(level, self.levels.len()));
        }
        Ok(&self.levels[level - 1])
    }

    pub fn width(&self, level: usize) -> Result<usize, StochasticError> {
        Ok(self.level(level)?.width())
    }
}

/// Where a matrix family and a function family disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationWitness {
    pub level: usize,
    pub row: usize,
    pub col: usize,
    pub expected: Rat,
    pub got: Rat,
}

/// A per-level substochastic matrix between two sort families.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticEnsemble {
    source: SortFamily,
    target: SortFamily,
    matrices: Vec<Matrix<Rat>>,
}

impl StochasticEnsemble {
    /// Validates shapes and substochasticity; `matrices[0]` is level 1.
    pub fn new(
        source: SortFamily,
        target: SortFamily,
        matrices: Vec<Matrix<Rat>>,
    ) -> Result<Self, StochasticError> {
        if source.level_count() != target.level_count()
            || matrices.len() != source.level_count()
        {
            return Err(StochasticError::LevelCount {
                have: matrices.len(),
                need: source.level_count(),
            });
        }
        for (i, m) in matrices.iter().enumerate() {
            if m.rows() != source.size() || m.cols() != target.size() {
                return Err(StochasticError::Shape {
                    level: i + 1,
                    rows: m.rows(),
                    cols: m.cols(),
                    need_rows: source.size(),
                    need_cols: target.size(),
                });
            }
            if let Some(row) = (0..m.rows()).find(|&r| {
                m.row(r).iter().any(|x| *x < rat(0, 1)) || m.row_sum(r) > rat(1, 1)
            }) {
                return Err(StochasticError::NotSubstochastic { level: i + 1, row });
            }
        }
        Ok(StochasticEnsemble {
            source,
            target,
            matrices,
        })
    }

    /// Tabulates the exact seed-counting probabilities of `psi` between the
    /// given sort families. Code widths must match the function profile at
    /// every level.
    pub fn from_feasible(
        psi: &FeasibleEnsemble,
        source: SortFamily,
        target: SortFamily,
    ) -> Result<Self, StochasticError> {
        if psi.level_count() != source.level_count() {
            return Err(StochasticError::LevelCount {
                have: source.level_count(),
                need: psi.level_count(),
            });
        }
        let mut matrices = Vec::with_capacity(psi.level_count());
        for level in 1..=psi.level_count() {
            let f = psi.level(level).expect("level in range");
            let src = source.level(level)?;
            let tgt = target.level(level)?;
            if src.width() != f.in_len() {
                return Err(StochasticError::WidthMismatch {
                    level,
                    side: "source",
                    have: src.width(),
                    need: f.in_len(),
                });
            }
            if tgt.width() != f.out_len() {
                return Err(StochasticError::WidthMismatch {
                    level,
                    side: "target",
                    have: tgt.width(),
                    need: f.out_len(),
                });
            }
            let mut m = Matrix::zero(src.len(), tgt.len());
            for a in 0..src.len() {
                for b in 0..tgt.len() {
                    m.set(a, b, f.seed_prob(&src.code(a), &tgt.code(b))?);
                }
            }
            matrices.push(m);
        }
        StochasticEnsemble::new(source, target, matrices)
    }

    pub fn source(&self) -> &SortFamily {
        &self.source
    }

    pub fn target(&self) -> &SortFamily {
        &self.target
    }

    pub fn level_count(&self) -> usize {
        self.matrices.len()
    }

    /// The matrix at 1-based `level`.
    pub fn matrix(&self, level: usize) -> Result<&Matrix<Rat>, StochasticError> {
        if level == 0 || level > self.matrices.len() {
            return Err(StochasticError::LevelOutOfRange(level, self.matrices.len()));
        }
        Ok(&self.matrices[level - 1])
    }

    /// Checks entry-by-entry that these matrices are the seed-counting
    /// probabilities of `psi`; on failure names the first wrong entry.
    pub fn realizes(
        &self,
        psi: &FeasibleEnsemble,
    ) -> Result<Option<RealizationWitness>, StochasticError> {
        if psi.level_count() != self.level_count() {
            return Err(StochasticError::LevelCount {
                have: self.level_count(),
                need: psi.level_count(),
            });
        }
        for level in 1..=self.level_count() {
            let f = psi.level(level).expect("level in range");
            let src = self.source.level(level)?;
            let tgt = self.target.level(level)?;
            if src.width() != f.in_len() {
                return Err(StochasticError::WidthMismatch {
                    level,
                    side: "source",
                    have: src.width(),
                    need: f.in_len(),
                });
            }
            if tgt.width() != f.out_len() {
                return Err(StochasticError::WidthMismatch {
                    level,
                    side: "target",
                    have: tgt.width(),
                    need: f.out_len(),
                });
            }
            let m = &self.matrices[level - 1];
            for row in 0..src.len() {
                for col in 0..tgt.len() {
                    let expected = f.seed_prob(&src.code(row), &tgt.code(col))?;
                    if *m.entry(row, col) != expected {
                        return Ok(Some(RealizationWitness {
                            level,
                            row,
                            col,
                            expected,
                            got: m.entry(row, col).clone(),
                        }));
                    }
                }
            }
        }
        Ok(None)
    }
}
