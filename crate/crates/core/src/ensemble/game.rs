//! The IND-CPA and IND-CCA2 experiments against finite adversaries.
//!
//! Adversaries are themselves leveled function families, so "for every
//! efficient adversary" becomes "for every adversary in this finite list" —
//! decidable, at the price of quantifying over a corpus instead of all
//! machines.
//!
//! IND-CPA is decided twice, by independent evaluation strategies:
//!
//! - [`ind_cpa_guess_prob`] plays the game operationally — enumerate key
//!   generation, the adversary's message choice, the coin, the encryption,
//!   and the guess, multiplying branch probabilities.
//! - [`cpa_guess_prob_by_matrices`] evaluates the same experiment as a
//!   pipeline of stochastic matrices over the label sorts, one product per
//!   message-choice atom, summed by linearity.
//!
//! Both yield the exact per-level probability of a correct guess; a system
//! passes when that probability is negligibly close to the fair coin under
//! the chosen policy. The comparison uses the two-sided leg `(1-p, p)`
//! against `(1/2, 1/2)`, which reduces to the gap `|p - 1/2|`.
//!
//! Conventions shared by both games:
//!
//! - A guess output decodes as 0 when all bits are zero, as 1 when the
//!   value is exactly one (all zeros then a trailing 1); anything else is
//!   never a correct guess.
//! - Key-generation mass on bit patterns that are no key label's code is
//!   dropped: it can never score a correct guess. The same applies to
//!   chosen messages that are no message label's code, to challenge
//!   ciphertexts the encryption table emits outside the ciphertext sort's
//!   codes (mass off the target object falls off the experiment, exactly
//!   as in the matrix semantics), and to branches where a table is
//!   undefined. Lost mass pushes the correct-guess probability away from
//!   1/2, so modeling sloppiness surfaces as insecurity rather than
//!   hiding.

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::bits::{Bits, BitsError};
use crate::matrix::{Matrix, MatrixError};
use crate::semiring::{rat, Rat};

use super::feasible::{EnsembleError, FeasibleEnsemble};
use super::policy::{GapWitness, NegligibilityPolicy, PolicyError};
use super::randomized::RandomizedFnError;
use super::system::{AbstractCryptoSystem, SystemError};

/// Largest ciphertext width for which the subset-enumeration route of
/// [`max_ind_cpa_advantage`] is attempted (2^(2^w) subsets).
pub const ENUMERATION_WIDTH_CAP: usize = 4;

/// Errors from game evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("adversary stage {stage} has {have} levels, expected {need}")]
    LevelCount {
        stage: &'static str,
        have: usize,
        need: usize,
    },
    #[error("level {level}: adversary stage {stage} {what} is {have} bits, expected {need}")]
    StageShape {
        stage: &'static str,
        level: usize,
        what: &'static str,
        have: usize,
        need: usize,
    },
    #[error("policy horizon {have} exceeds the system's {need} levels")]
    PolicyHorizon { have: usize, need: usize },
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error(transparent)]
    Fn(#[from] RandomizedFnError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Bits(#[from] BitsError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// `Some(0)` for all-zeros, `Some(1)` for the value one, `None` otherwise.
pub fn decode_guess(bits: &Bits) -> Option<u8> {
    match bits.val() {
        0 => Some(0),
        1 => Some(1),
        _ => None,
    }
}

/// A two-stage chosen-plaintext adversary.
///
/// Stage `a0` emits `m0 ‖ m1 ‖ s` (two chosen messages and private state);
/// stage `a1` reads `c ‖ m0 ‖ m1 ‖ s` and emits a guess. When
/// `a0_takes_key` is set, `a0` is fed the encryption key — formally legal
/// in the wiring, and the resulting success probability shows exactly what
/// that extra wire is worth; an honest adversary ignores its input, which
/// is then the all-zeros string.
#[derive(Debug, Clone, PartialEq)]
pub struct CpaAdversary {
    pub name: String,
    pub a0: FeasibleEnsemble,
    pub a1: FeasibleEnsemble,
    pub a0_takes_key: bool,
}

impl CpaAdversary {
    /// Private-state width at a level: whatever `a0` emits beyond the two
    /// messages.
    pub fn state_width(
        &self,
        system: &AbstractCryptoSystem,
        level: usize,
    ) -> Result<usize, GameError> {
        let mw = system.msg_sort().width(level).map_err(SystemError::Sort)?;
        let out = self.a0.level(level)?.out_len();
        if out < 2 * mw {
            return Err(GameError::StageShape {
                stage: "a0",
                level,
                what: "output",
                have: out,
                need: 2 * mw,
            });
        }
        Ok(out - 2 * mw)
    }

    /// Checks every stage profile against the system's widths.
    pub fn validate_against(&self, system: &AbstractCryptoSystem) -> Result<(), GameError> {
        let levels = system.level_count();
        for (stage, family) in [("a0", &self.a0), ("a1", &self.a1)] {
            if family.level_count() != levels {
                return Err(GameError::LevelCount {
                    stage,
                    have: family.level_count(),
                    need: levels,
                });
            }
        }
        for level in 1..=levels {
            let kw = system.key_sort().width(level).map_err(SystemError::Sort)?;
            let mw = system.msg_sort().width(level).map_err(SystemError::Sort)?;
            let cw = system
                .cipher_sort()
                .width(level)
                .map_err(SystemError::Sort)?;
            if self.a0_takes_key {
                let have = self.a0.level(level)?.in_len();
                if have != kw {
                    return Err(GameError::StageShape {
                        stage: "a0",
                        level,
                        what: "input",
                        have,
                        need: kw,
                    });
                }
            }
            let sw = self.state_width(system, level)?;
            let have = self.a1.level(level)?.in_len();
            let need = cw + 2 * mw + sw;
            if have != need {
                return Err(GameError::StageShape {
                    stage: "a1",
                    level,
                    what: "input",
                    have,
                    need,
                });
            }
        }
        Ok(())
    }

    /// The first-stage input at a level: the key when `a0_takes_key`, the
    /// all-zeros string otherwise.
    fn a0_input(&self, level: usize, key: &Bits) -> Result<Bits, GameError> {
        if self.a0_takes_key {
            Ok(*key)
        } else {
            Ok(Bits::zeros(self.a0.level(level)?.in_len())?)
        }
    }
}

/// Per-level correct-guess probability, played out branch by branch.
pub fn ind_cpa_guess_prob(
    system: &AbstractCryptoSystem,
    adversary: &CpaAdversary,
) -> Result<Vec<Rat>, GameError> {
    adversary.validate_against(system)?;
    let half = rat(1, 2);
    let mut probs = Vec::with_capacity(system.level_count());
    for level in 1..=system.level_count() {
        let keys = system.key_sort().level(level).map_err(SystemError::Sort)?;
        let msgs = system.msg_sort().level(level).map_err(SystemError::Sort)?;
        let ciphers = system
            .cipher_sort()
            .level(level)
            .map_err(SystemError::Sort)?;
        let mw = msgs.width();
        let sw = adversary.state_width(system, level)?;
        let mut correct = rat(0, 1);
        for (k, _, p_key) in system.keygen_splits(level)? {
            if keys.index_of_code(&k).is_none() {
                continue;
            }
            let a0_in = adversary.a0_input(level, &k)?;
            for (choice, p_choice) in adversary.a0.level(level)?.output_distribution(&a0_in)? {
                let (m0, rest) = choice.split_at(mw)?;
                let (m1, state) = rest.split_at(mw)?;
                debug_assert_eq!(state.len(), sw);
                for b in 0..2u8 {
                    let m_b = if b == 0 { &m0 } else { &m1 };
                    if msgs.index_of_code(m_b).is_none() {
                        continue;
                    }
                    for (c, p_c) in system.encrypt_dist(level, &k, m_b)? {
                        if ciphers.index_of_code(&c).is_none() {
                            continue;
                        }
                        let a1_in = c.concat(&choice)?;
                        for (g, p_g) in
                            adversary.a1.level(level)?.output_distribution(&a1_in)?
                        {
                            if decode_guess(&g) == Some(b) {
                                correct += p_key.clone()
                                    * half.clone()
                                    * p_choice.clone()
                                    * p_c.clone()
                                    * p_g;
                            }
                        }
                    }
                }
            }
        }
        probs.push(correct);
    }
    Ok(probs)
}

/// Per-level correct-guess probability, evaluated as stochastic-matrix
/// products over the label sorts.
///
/// For each atom `y = m0 ‖ m1 ‖ s` the first stage can emit, the pipeline
/// `keydist ⋅ ⟨id, A0⟩ ⋅ π_b ⋅ (E × id) ⋅ A1` collapses to a product of
/// three small matrices: a weighted key row, the encryption matrix with
/// the chosen message fixed, and the guess matrix with the ciphertext
/// varying. Summing the products over atoms and coins by linearity gives
/// the same experiment the operational route plays out.
pub fn cpa_guess_prob_by_matrices(
    system: &AbstractCryptoSystem,
    adversary: &CpaAdversary,
) -> Result<Vec<Rat>, GameError> {
    adversary.validate_against(system)?;
    let mut probs = Vec::with_capacity(system.level_count());
    for level in 1..=system.level_count() {
        let keys = system.key_sort().level(level).map_err(SystemError::Sort)?;
        let msgs = system.msg_sort().level(level).map_err(SystemError::Sort)?;
        let ciphers = system
            .cipher_sort()
            .level(level)
            .map_err(SystemError::Sort)?;
        let mw = msgs.width();
        let keyrow = system.keydist_row(level)?;
        let encm = system.enc_matrix(level)?;
        let a0 = adversary.a0.level(level)?;
        let a1 = adversary.a1.level(level)?;

        // First-stage output distribution per key label (they coincide
        // unless the adversary reads the key wire).
        let mut choice_dists = Vec::with_capacity(keys.len());
        for ki in 0..keys.len() {
            let input = adversary.a0_input(level, &keys.code(ki))?;
            choice_dists.push(a0.output_distribution(&input)?);
        }
        // Union of atoms across keys, deduplicated.
        let mut atoms: Vec<Bits> = Vec::new();
        for dist in &choice_dists {
            for (y, _) in dist {
                if !atoms.contains(y) {
                    atoms.push(*y);
                }
            }
        }

        // Guess accumulators: v[b] = (mass on guess 0, mass on guess 1)
        // conditioned on coin b.
        let mut v = [[rat(0, 1), rat(0, 1)], [rat(0, 1), rat(0, 1)]];
        for y in &atoms {
            let (m0, rest) = y.split_at(mw)?;
            let (m1, _state) = rest.split_at(mw)?;
            // Key row weighted by this atom's first-stage probability.
            let w_y: Matrix<Rat> = Matrix::from_fn(1, keys.len(), |_, ki| {
                let p_y = choice_dists[ki]
                    .iter()
                    .find(|(out, _)| out == y)
                    .map(|(_, p)| p.clone())
                    .unwrap_or_else(|| rat(0, 1));
                keyrow.entry(0, ki).clone() * p_y
            });
            // Guess matrix: rows ciphertext labels, cols the two guesses.
            let mut a1_y: Matrix<Rat> = Matrix::zero(ciphers.len(), 2);
            for ci in 0..ciphers.len() {
                let input = ciphers.code(ci).concat(y)?;
                for (g, p) in a1.output_distribution(&input)? {
                    if let Some(guess) = decode_guess(&g) {
                        let cur = a1_y.entry(ci, guess as usize).clone();
                        a1_y.set(ci, guess as usize, cur + p);
                    }
                }
            }
            for (b, m_b) in [(0usize, &m0), (1, &m1)] {
                let mi = match msgs.index_of_code(m_b) {
                    Some(mi) => mi,
                    None => continue,
                };
                // Encryption with the chosen message fixed.
                let e_m: Matrix<Rat> = Matrix::from_fn(keys.len(), ciphers.len(), |ki, ci| {
                    encm.entry(ki * msgs.len() + mi, ci).clone()
                });
                let out = w_y.compose(&e_m)?.compose(&a1_y)?;
                for (g, slot) in v[b].iter_mut().enumerate() {
                    *slot = slot.clone() + out.entry(0, g).clone();
                }
            }
        }
        probs.push((v[0][0].clone() + v[1][1].clone()) * rat(1, 2));
    }
    Ok(probs)
}

/// One level's outcome in a chosen-plaintext report.
#[derive(Debug, Clone, PartialEq)]
pub struct CpaLevelReport {
    pub level: usize,
    /// Exact probability of a correct guess.
    pub correct: Rat,
    /// `|correct - 1/2|`.
    pub gap: Rat,
}

/// One adversary's outcome across the policy horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct CpaAdversaryReport {
    pub name: String,
    pub levels: Vec<CpaLevelReport>,
    pub passes: bool,
    pub witness: Option<GapWitness>,
}

/// Whole-corpus chosen-plaintext verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct CpaDiagramReport {
    /// True when every adversary's guess probability stays negligibly
    /// close to the fair coin; vacuously true for an empty corpus.
    pub secure: bool,
    pub adversaries: Vec<CpaAdversaryReport>,
}

fn assemble_cpa_report(
    names_and_probs: Vec<(String, Vec<Rat>)>,
    policy: &NegligibilityPolicy,
) -> Result<CpaDiagramReport, GameError> {
    let half = rat(1, 2);
    let halves = alloc::vec![half.clone(); policy.max_level()];
    let mut adversaries = Vec::with_capacity(names_and_probs.len());
    let mut secure = true;
    for (name, probs) in names_and_probs {
        let report = policy.negligible_equiv(&probs, &halves)?;
        let levels = probs
            .iter()
            .take(policy.max_level())
            .enumerate()
            .map(|(i, p)| CpaLevelReport {
                level: i + 1,
                correct: p.clone(),
                gap: crate::semiring::abs_diff(p, &half),
            })
            .collect();
        secure &= report.equivalent;
        adversaries.push(CpaAdversaryReport {
            name,
            levels,
            passes: report.equivalent,
            witness: report.witness,
        });
    }
    Ok(CpaDiagramReport {
        secure,
        adversaries,
    })
}

fn check_policy_horizon(
    system: &AbstractCryptoSystem,
    policy: &NegligibilityPolicy,
) -> Result<(), GameError> {
    if policy.max_level() > system.level_count() {
        return Err(GameError::PolicyHorizon {
            have: policy.max_level(),
            need: system.level_count(),
        });
    }
    Ok(())
}

/// Chosen-plaintext verdict via the matrix-pipeline route.
pub fn check_ind_cpa(
    system: &AbstractCryptoSystem,
    adversaries: &[CpaAdversary],
    policy: &NegligibilityPolicy,
) -> Result<CpaDiagramReport, GameError> {
    check_policy_horizon(system, policy)?;
    let mut rows = Vec::with_capacity(adversaries.len());
    for adv in adversaries {
        rows.push((adv.name.clone(), cpa_guess_prob_by_matrices(system, adv)?));
    }
    assemble_cpa_report(rows, policy)
}

/// Chosen-plaintext verdict via the operational route.
pub fn check_ind_cpa_direct(
    system: &AbstractCryptoSystem,
    adversaries: &[CpaAdversary],
    policy: &NegligibilityPolicy,
) -> Result<CpaDiagramReport, GameError> {
    check_policy_horizon(system, policy)?;
    let mut rows = Vec::with_capacity(adversaries.len());
    for adv in adversaries {
        rows.push((adv.name.clone(), ind_cpa_guess_prob(system, adv)?));
    }
    assemble_cpa_report(rows, policy)
}

/// Best chosen-plaintext advantage at one level, by two routes.
#[derive(Debug, Clone, PartialEq)]
pub struct AdvantageReport {
    /// `max` over ordered message pairs of half the positive drift
    /// `Σ_c (P1(c) - P0(c))⁺` — the exact optimum over all distinguishers.
    pub advantage: Rat,
    /// The same optimum found by brute force over every accept-set of raw
    /// ciphertext patterns; `None` when the width exceeds
    /// [`ENUMERATION_WIDTH_CAP`].
    pub enumeration: Option<Rat>,
    /// Message label indices attaining the optimum, when positive.
    pub best_pair: Option<(usize, usize)>,
}

/// Exact best advantage of any (unbounded) single-challenge distinguisher
/// at `level`: the adversary picks two message labels, sees one encryption
/// under the keygen marginal, and accepts by an arbitrary set of raw
/// ciphertext patterns.
pub fn max_ind_cpa_advantage(
    system: &AbstractCryptoSystem,
    level: usize,
) -> Result<AdvantageReport, GameError> {
    let keys = system.key_sort().level(level).map_err(SystemError::Sort)?;
    let msgs = system.msg_sort().level(level).map_err(SystemError::Sort)?;
    let cw = system
        .cipher_sort()
        .width(level)
        .map_err(SystemError::Sort)?;
    let keyrow = system.keydist_row(level)?;

    // P[m] = distribution of raw ciphertext patterns for message label m,
    // keys drawn from the (possibly substochastic) keygen marginal.
    let mut cipher_dists: Vec<Vec<(Bits, Rat)>> = Vec::with_capacity(msgs.len());
    for mi in 0..msgs.len() {
        let mut acc: alloc::collections::BTreeMap<Bits, Rat> = alloc::collections::BTreeMap::new();
        for ki in 0..keys.len() {
            let p_k = keyrow.entry(0, ki).clone();
            if p_k == rat(0, 1) {
                continue;
            }
            for (c, p_c) in system.encrypt_dist(level, &keys.code(ki), &msgs.code(mi))? {
                let entry = acc.entry(c).or_insert_with(|| rat(0, 1));
                *entry += p_k.clone() * p_c;
            }
        }
        cipher_dists.push(acc.into_iter().collect());
    }

    let prob_of = |dist: &[(Bits, Rat)], c: &Bits| -> Rat {
        dist.iter()
            .find(|(b, _)| b == c)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(|| rat(0, 1))
    };

    // Oracle route: half the positive part of the drift.
    let mut best = rat(0, 1);
    let mut best_pair = None;
    for m0 in 0..msgs.len() {
        for m1 in 0..msgs.len() {
            let mut union: Vec<Bits> = cipher_dists[m0].iter().map(|(c, _)| *c).collect();
            for (c, _) in &cipher_dists[m1] {
                if !union.contains(c) {
                    union.push(*c);
                }
            }
            let mut drift = rat(0, 1);
            for c in &union {
                let d = prob_of(&cipher_dists[m1], c) - prob_of(&cipher_dists[m0], c);
                if d > rat(0, 1) {
                    drift += d;
                }
            }
            let adv = drift * rat(1, 2);
            if adv > best {
                best = adv;
                best_pair = Some((m0, m1));
            }
        }
    }

    // Enumeration route: every subset of raw patterns as the accept set.
    // Patterns outside both supports carry no probability, so each accept
    // probability a subset can realize is realized by a subset of the
    // union support; enumerating those covers the whole power set.
    let enumeration = if cw <= ENUMERATION_WIDTH_CAP {
        let mut best_enum = rat(0, 1);
        for m0 in 0..msgs.len() {
            for m1 in 0..msgs.len() {
                let mut patterns: Vec<Bits> =
                    cipher_dists[m0].iter().map(|(c, _)| *c).collect();
                for (c, _) in &cipher_dists[m1] {
                    if !patterns.contains(c) {
                        patterns.push(*c);
                    }
                }
                let p0: Vec<Rat> = patterns
                    .iter()
                    .map(|c| prob_of(&cipher_dists[m0], c))
                    .collect();
                let p1: Vec<Rat> = patterns
                    .iter()
                    .map(|c| prob_of(&cipher_dists[m1], c))
                    .collect();
                for mask in 0u64..(1u64 << patterns.len()) {
                    let mut accept0 = rat(0, 1);
                    let mut accept1 = rat(0, 1);
                    for i in 0..patterns.len() {
                        if mask >> i & 1 == 1 {
                            accept0 += p0[i].clone();
                            accept1 += p1[i].clone();
                        }
                    }
                    // Correct-guess probability of "guess 1 iff c accepted",
                    // minus the fair coin.
                    let adv = (accept1 - accept0) * rat(1, 2);
                    if adv > best_enum {
                        best_enum = adv;
                    }
                }
            }
        }
        Some(best_enum)
    } else {
        None
    };

    Ok(AdvantageReport {
        advantage: best,
        enumeration,
        best_pair,
    })
}

/// What to do when the second-stage oracle is asked for the challenge
/// ciphertext itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChallengeReusePolicy {
    /// The branch can never score a correct guess. Default.
    #[default]
    ScoreWrong,
    /// The branch scores as a forced fair coin: half its mass counts as
    /// correct.
    ScoreFairCoin,
}

/// A four-stage adaptive chosen-ciphertext adversary.
///
/// Stage inputs and outputs, in display order:
///
/// - `a0`: all-zeros input → `c0 ‖ s0` (pre-challenge oracle query);
/// - `a1`: `c0 ‖ m ‖ s0` → `m0 ‖ m1 ‖ s1`, where `m = dec(k̄, c0)`;
/// - `a2`: `c0 ‖ m ‖ m0 ‖ m1 ‖ c ‖ s1` → `c1 ‖ s2` (post-challenge query);
/// - `a3`: `c0 ‖ m ‖ m0 ‖ m1 ‖ c ‖ c1 ‖ m̃ ‖ s2` → guess, where
///   `m̃ = dec(k̄, c1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CcaAdversary {
    pub name: String,
    pub a0: FeasibleEnsemble,
    pub a1: FeasibleEnsemble,
    pub a2: FeasibleEnsemble,
    pub a3: FeasibleEnsemble,
}

impl CcaAdversary {
    /// State widths `(s0, s1, s2)` at a level, derived from the stage
    /// output lengths.
    pub fn state_widths(
        &self,
        system: &AbstractCryptoSystem,
        level: usize,
    ) -> Result<(usize, usize, usize), GameError> {
        let mw = system.msg_sort().width(level).map_err(SystemError::Sort)?;
        let cw = system
            .cipher_sort()
            .width(level)
            .map_err(SystemError::Sort)?;
        let shapes = [
            ("a0", self.a0.level(level)?.out_len(), cw),
            ("a1", self.a1.level(level)?.out_len(), 2 * mw),
            ("a2", self.a2.level(level)?.out_len(), cw),
        ];
        let mut widths = [0usize; 3];
        for (i, (stage, have, need)) in shapes.into_iter().enumerate() {
            if have < need {
                return Err(GameError::StageShape {
                    stage,
                    level,
                    what: "output",
                    have,
                    need,
                });
            }
            widths[i] = have - need;
        }
        Ok((widths[0], widths[1], widths[2]))
    }

    /// Checks every stage profile against the system's widths.
    pub fn validate_against(&self, system: &AbstractCryptoSystem) -> Result<(), GameError> {
        let levels = system.level_count();
        for (stage, family) in [
            ("a0", &self.a0),
            ("a1", &self.a1),
            ("a2", &self.a2),
            ("a3", &self.a3),
        ] {
            if family.level_count() != levels {
                return Err(GameError::LevelCount {
                    stage,
                    have: family.level_count(),
                    need: levels,
                });
            }
        }
        for level in 1..=levels {
            let mw = system.msg_sort().width(level).map_err(SystemError::Sort)?;
            let cw = system
                .cipher_sort()
                .width(level)
                .map_err(SystemError::Sort)?;
            let (s0, s1, s2) = self.state_widths(system, level)?;
            let expectations = [
                ("a1", self.a1.level(level)?.in_len(), cw + mw + s0),
                (
                    "a2",
                    self.a2.level(level)?.in_len(),
                    cw + mw + 2 * mw + cw + s1,
                ),
                (
                    "a3",
                    self.a3.level(level)?.in_len(),
                    cw + mw + 2 * mw + cw + cw + mw + s2,
                ),
            ];
            for (stage, have, need) in expectations {
                if have != need {
                    return Err(GameError::StageShape {
                        stage,
                        level,
                        what: "input",
                        have,
                        need,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Per-level correct-guess probability of the adaptive chosen-ciphertext
/// experiment, played out branch by branch.
pub fn ind_cca2_guess_prob(
    system: &AbstractCryptoSystem,
    adversary: &CcaAdversary,
    reuse: ChallengeReusePolicy,
) -> Result<Vec<Rat>, GameError> {
    adversary.validate_against(system)?;
    let half = rat(1, 2);
    let mut probs = Vec::with_capacity(system.level_count());
    for level in 1..=system.level_count() {
        let keys = system.key_sort().level(level).map_err(SystemError::Sort)?;
        let msgs = system.msg_sort().level(level).map_err(SystemError::Sort)?;
        let ciphers = system
            .cipher_sort()
            .level(level)
            .map_err(SystemError::Sort)?;
        let mw = msgs.width();
        let mut correct = rat(0, 1);
        for (k, shadow, p_key) in system.keygen_splits(level)? {
            if keys.index_of_code(&k).is_none() {
                continue;
            }
            let a0_in = Bits::zeros(adversary.a0.level(level)?.in_len())?;
            for (a0_out, p0) in adversary.a0.level(level)?.output_distribution(&a0_in)? {
                let cw = system
                    .cipher_sort()
                    .width(level)
                    .map_err(SystemError::Sort)?;
                let (c0, _s0) = a0_out.split_at(cw)?;
                // Pre-challenge decryption oracle.
                let m_oracle = match system.decrypt(level, &shadow, &c0)? {
                    Some(m) => m,
                    None => continue,
                };
                let a1_in = c0.concat(&m_oracle)?.concat(&a0_out.split_at(cw)?.1)?;
                for (a1_out, p1) in adversary.a1.level(level)?.output_distribution(&a1_in)? {
                    let (m0, rest) = a1_out.split_at(mw)?;
                    let (m1, s1) = rest.split_at(mw)?;
                    for b in 0..2u8 {
                        let m_b = if b == 0 { &m0 } else { &m1 };
                        if msgs.index_of_code(m_b).is_none() {
                            continue;
                        }
                        for (c, p_c) in system.encrypt_dist(level, &k, m_b)? {
                            if ciphers.index_of_code(&c).is_none() {
                                continue;
                            }
                            let a2_in = c0
                                .concat(&m_oracle)?
                                .concat(&m0)?
                                .concat(&m1)?
                                .concat(&c)?
                                .concat(&s1)?;
                            for (a2_out, p2) in
                                adversary.a2.level(level)?.output_distribution(&a2_in)?
                            {
                                let (c1, s2) = a2_out.split_at(cw)?;
                                let weight = p_key.clone()
                                    * half.clone()
                                    * p0.clone()
                                    * p1.clone()
                                    * p_c.clone()
                                    * p2.clone();
                                if c1 == c {
                                    // The oracle refuses the challenge.
                                    if reuse == ChallengeReusePolicy::ScoreFairCoin {
                                        correct += weight * half.clone();
                                    }
                                    continue;
                                }
                                let m_tilde = match system.decrypt(level, &shadow, &c1)? {
                                    Some(m) => m,
                                    None => continue,
                                };
                                let a3_in = c0
                                    .concat(&m_oracle)?
                                    .concat(&m0)?
                                    .concat(&m1)?
                                    .concat(&c)?
                                    .concat(&c1)?
                                    .concat(&m_tilde)?
                                    .concat(&s2)?;
                                for (g, p3) in
                                    adversary.a3.level(level)?.output_distribution(&a3_in)?
                                {
                                    if decode_guess(&g) == Some(b) {
                                        correct += weight.clone() * p3;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        probs.push(correct);
    }
    Ok(probs)
}
