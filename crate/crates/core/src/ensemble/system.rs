//! Encryption systems assembled from leveled ensembles.
//!
//! An [`AbstractCryptoSystem`] fixes three sort families — keys, messages,
//! ciphertexts — and four function families over their codes:
//!
//! - `enc : K × M → C`, possibly seeded, input laid out as `k ‖ m`;
//! - `dec : K × C → M`, deterministic, input laid out as `k̄ ‖ c`;
//! - `pair : K → K`, deterministic — maps an encryption key to the key
//!   that undoes it;
//! - `keygen : 1 → K × K`, seeded, consulted at the all-zeros input; its
//!   output splits as `k ‖ k̄` where `k` encrypts and `k̄` answers
//!   decryption queries.
//!
//! The constructor checks only that the widths cohere level by level.
//! Whether decryption actually undoes encryption is a separate validation
//! ([`AbstractCryptoSystem::check_unique_decryption`]) that returns a
//! defect witness instead of failing construction — deliberately broken
//! systems are legitimate objects of study for the games.

use alloc::vec::Vec;

use thiserror::Error;

use crate::bits::{Bits, BitsError};
use crate::dist::Dist;
use crate::matrix::Matrix;
use crate::semiring::{rat, Rat};

use super::feasible::{EnsembleError, FeasibleEnsemble};
use super::randomized::RandomizedFnError;
use super::stochastic::{SortFamily, StochasticError};

/// Errors from system assembly.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("{what} has {have} levels, expected {need}")]
    LevelCount {
        what: &'static str,
        have: usize,
        need: usize,
    },
    #[error("level {level}: {what} is {have} bits wide, expected {need}")]
    WidthCoherence {
        level: usize,
        what: &'static str,
        have: usize,
        need: usize,
    },
    #[error("{what} must be deterministic (no seed bits)")]
    MustBeDeterministic { what: &'static str },
    #[error("message distribution has {have} entries for {need} message labels")]
    MuLength { have: usize, need: usize },
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error(transparent)]
    Fn(#[from] RandomizedFnError),
    #[error(transparent)]
    Sort(#[from] StochasticError),
    #[error(transparent)]
    Bits(#[from] BitsError),
}

/// A level and label pair at which decryption fails to undo encryption.
#[derive(Debug, Clone, PartialEq)]
pub struct DecryptionDefect {
    pub level: usize,
    /// Key label index.
    pub key: usize,
    /// Message label index.
    pub message: usize,
    /// The offending ciphertext; `None` when `pair` itself is undefined at
    /// the key.
    pub cipher: Option<Bits>,
    /// What decryption produced; `None` when it is undefined there.
    pub decrypted: Option<Bits>,
}

/// A keygen output whose second half is not `pair` of its first half.
#[derive(Debug, Clone, PartialEq)]
pub struct KeygenPairingDefect {
    pub level: usize,
    pub key: Bits,
    pub shadow: Bits,
    pub expected: Option<Bits>,
}

/// Sorts, function families, and a message prior, coherent level by level.
#[derive(Debug, Clone, PartialEq)]
pub struct AbstractCryptoSystem {
    key_sort: SortFamily,
    msg_sort: SortFamily,
    cipher_sort: SortFamily,
    enc: FeasibleEnsemble,
    dec: FeasibleEnsemble,
    pair: FeasibleEnsemble,
    keygen: FeasibleEnsemble,
    mu: Dist,
}

impl AbstractCryptoSystem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        key_sort: SortFamily,
        msg_sort: SortFamily,
        cipher_sort: SortFamily,
        enc: FeasibleEnsemble,
        dec: FeasibleEnsemble,
        pair: FeasibleEnsemble,
        keygen: FeasibleEnsemble,
        mu: Dist,
    ) -> Result<Self, SystemError> {
        let levels = key_sort.level_count();
        if levels == 0 {
            return Err(SystemError::LevelCount {
                what: "key sort",
                have: 0,
                need: 1,
            });
        }
        let counts = [
            ("message sort", msg_sort.level_count()),
            ("ciphertext sort", cipher_sort.level_count()),
            ("encryption", enc.level_count()),
            ("decryption", dec.level_count()),
            ("pairing", pair.level_count()),
            ("key generation", keygen.level_count()),
        ];
        for (what, have) in counts {
            if have != levels {
                return Err(SystemError::LevelCount {
                    what,
                    have,
                    need: levels,
                });
            }
        }
        for (what, family) in [("decryption", &dec), ("pairing", &pair)] {
            if !family.is_deterministic() {
                return Err(SystemError::MustBeDeterministic { what });
            }
        }
        for level in 1..=levels {
            let kw = key_sort.width(level)?;
            let mw = msg_sort.width(level)?;
            let cw = cipher_sort.width(level)?;
            let expectations: [(&'static str, usize, usize); 7] = [
                ("encryption input", enc.level(level)?.in_len(), kw + mw),
                ("encryption output", enc.level(level)?.out_len(), cw),
                ("decryption input", dec.level(level)?.in_len(), kw + cw),
                ("decryption output", dec.level(level)?.out_len(), mw),
                ("pairing input", pair.level(level)?.in_len(), kw),
                ("pairing output", pair.level(level)?.out_len(), kw),
                ("key generation output", keygen.level(level)?.out_len(), 2 * kw),
            ];
            for (what, have, need) in expectations {
                if have != need {
                    return Err(SystemError::WidthCoherence {
                        level,
                        what,
                        have,
                        need,
                    });
                }
            }
        }
        if mu.probs().len() != msg_sort.size() {
            return Err(SystemError::MuLength {
                have: mu.probs().len(),
                need: msg_sort.size(),
            });
        }
        Ok(AbstractCryptoSystem {
            key_sort,
            msg_sort,
            cipher_sort,
            enc,
            dec,
            pair,
            keygen,
            mu,
        })
    }

    pub fn level_count(&self) -> usize {
        self.key_sort.level_count()
    }

    pub fn key_sort(&self) -> &SortFamily {
        &self.key_sort
    }

    pub fn msg_sort(&self) -> &SortFamily {
        &self.msg_sort
    }

    pub fn cipher_sort(&self) -> &SortFamily {
        &self.cipher_sort
    }

    pub fn enc(&self) -> &FeasibleEnsemble {
        &self.enc
    }

    pub fn dec(&self) -> &FeasibleEnsemble {
        &self.dec
    }

    pub fn pair(&self) -> &FeasibleEnsemble {
        &self.pair
    }

    pub fn keygen(&self) -> &FeasibleEnsemble {
        &self.keygen
    }

    pub fn mu(&self) -> &Dist {
        &self.mu
    }

    /// Key generation output distribution at a level, split as
    /// `(k, k̄, probability)`.
    pub fn keygen_splits(&self, level: usize) -> Result<Vec<(Bits, Bits, Rat)>, SystemError> {
        let gen = self.keygen.level(level)?;
        let kw = self.key_sort.width(level)?;
        let input = Bits::zeros(gen.in_len())?;
        let mut splits = Vec::new();
        for (out, p) in gen.output_distribution(&input)? {
            let (k, shadow) = out.split_at(kw)?;
            splits.push((k, shadow, p));
        }
        Ok(splits)
    }

    /// Key marginal as a row over key labels; keygen mass on bit patterns
    /// that are no label's code is dropped, so the row may be substochastic.
    pub fn keydist_row(&self, level: usize) -> Result<Matrix<Rat>, SystemError> {
        let codes = self.key_sort.level(level)?;
        let mut row: Matrix<Rat> = Matrix::zero(1, codes.len());
        for (k, _, p) in self.keygen_splits(level)? {
            if let Some(i) = codes.index_of_code(&k) {
                let cur = row.entry(0, i).clone();
                row.set(0, i, cur + p);
            }
        }
        Ok(row)
    }

    /// Encryption as a matrix from key-message label pairs (key-major) to
    /// ciphertext labels.
    pub fn enc_matrix(&self, level: usize) -> Result<Matrix<Rat>, SystemError> {
        let keys = self.key_sort.level(level)?;
        let msgs = self.msg_sort.level(level)?;
        let ciphers = self.cipher_sort.level(level)?;
        let f = self.enc.level(level)?;
        let mut m = Matrix::zero(keys.len() * msgs.len(), ciphers.len());
        for ki in 0..keys.len() {
            for mi in 0..msgs.len() {
                let input = keys.code(ki).concat(&msgs.code(mi))?;
                for ci in 0..ciphers.len() {
                    m.set(
                        ki * msgs.len() + mi,
                        ci,
                        f.seed_prob(&input, &ciphers.code(ci))?,
                    );
                }
            }
        }
        Ok(m)
    }

    /// Output distribution of encrypting `m` under `k` (raw code bits).
    pub fn encrypt_dist(
        &self,
        level: usize,
        key: &Bits,
        msg: &Bits,
    ) -> Result<Vec<(Bits, Rat)>, SystemError> {
        let f = self.enc.level(level)?;
        Ok(f.output_distribution(&key.concat(msg)?)?)
    }

    /// Deterministic decryption of `c` under the oracle key `k̄`; `None`
    /// when the table is undefined there.
    pub fn decrypt(&self, level: usize, shadow: &Bits, cipher: &Bits) -> Result<Option<Bits>, SystemError> {
        let f = self.dec.level(level)?;
        Ok(f.eval(&Bits::empty(), &shadow.concat(cipher)?))
    }

    /// `pair` applied to raw key bits.
    pub fn pair_of(&self, level: usize, key: &Bits) -> Result<Option<Bits>, SystemError> {
        let f = self.pair.level(level)?;
        Ok(f.eval(&Bits::empty(), key))
    }

    /// Checks `dec(pair(k) ‖ c) = m` for every key label, message label,
    /// and ciphertext that encryption can produce; returns the first defect.
    pub fn check_unique_decryption(&self) -> Result<Option<DecryptionDefect>, SystemError> {
        for level in 1..=self.level_count() {
            let keys = self.key_sort.level(level)?;
            let msgs = self.msg_sort.level(level)?;
            for ki in 0..keys.len() {
                let shadow = match self.pair_of(level, &keys.code(ki))? {
                    Some(s) => s,
                    None => {
                        return Ok(Some(DecryptionDefect {
                            level,
                            key: ki,
                            message: 0,
                            cipher: None,
                            decrypted: None,
                        }))
                    }
                };
                for mi in 0..msgs.len() {
                    for (c, p) in self.encrypt_dist(level, &keys.code(ki), &msgs.code(mi))? {
                        if p == rat(0, 1) {
                            continue;
                        }
                        let back = self.decrypt(level, &shadow, &c)?;
                        if back.as_ref() != Some(&msgs.code(mi)) {
                            return Ok(Some(DecryptionDefect {
                                level,
                                key: ki,
                                message: mi,
                                cipher: Some(c),
                                decrypted: back,
                            }));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// Checks that every keygen output pairs `k` with `pair(k)`; returns
    /// the first split that does not.
    pub fn check_keygen_pairing(&self) -> Result<Option<KeygenPairingDefect>, SystemError> {
        for level in 1..=self.level_count() {
            for (k, shadow, p) in self.keygen_splits(level)? {
                if p == rat(0, 1) {
                    continue;
                }
                let expected = self.pair_of(level, &k)?;
                if expected.as_ref() != Some(&shadow) {
                    return Ok(Some(KeygenPairingDefect {
                        level,
                        key: k,
                        shadow,
                        expected,
                    }));
                }
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoded::FinSet;
    use crate::ensemble::randomized::RandomizedFn;
    use alloc::vec;

    /// One-time pad over one conceptual bit, padded out per level: labels
    /// {0,1} at width ℓ, enc/dec xor the full code, keygen draws the key
    /// from the last seed bit and pairs it with itself.
    fn otp(levels: usize) -> AbstractCryptoSystem {
        let labels = FinSet::new(["0", "1"]).unwrap();
        let widths: Vec<usize> = (1..=levels).collect();
        let sort = || SortFamily::new(labels.clone(), &widths).unwrap();
        let enc = FeasibleEnsemble::new(
            (1..=levels)
                .map(|l| {
                    RandomizedFn::tabulate(0, 2 * l, l, |_, input| {
                        let (k, m) = input.split_at(l).unwrap();
                        k.xor(&m).unwrap()
                    })
                    .unwrap()
                })
                .collect(),
        )
        .unwrap();
        let dec = enc.clone();
        let pair = FeasibleEnsemble::identity(&widths).unwrap();
        let keygen = FeasibleEnsemble::new(
            (1..=levels)
                .map(|l| {
                    RandomizedFn::tabulate(l, l, 2 * l, |seed, _| {
                        let k = Bits::new(l, seed.bit(l - 1) as u64).unwrap();
                        k.concat(&k).unwrap()
                    })
                    .unwrap()
                })
                .collect(),
        )
        .unwrap();
        AbstractCryptoSystem::new(
            sort(),
            sort(),
            sort(),
            enc,
            dec,
            pair,
            keygen,
            Dist::uniform(2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn otp_assembles_and_its_decryption_is_sound() {
        let sys = otp(3);
        assert_eq!(sys.level_count(), 3);
        assert_eq!(sys.check_unique_decryption().unwrap(), None);
        assert_eq!(sys.check_keygen_pairing().unwrap(), None);
    }

    #[test]
    fn otp_key_marginal_is_uniform_at_every_level() {
        let sys = otp(3);
        for level in 1..=3 {
            let row = sys.keydist_row(level).unwrap();
            assert_eq!(*row.entry(0, 0), rat(1, 2));
            assert_eq!(*row.entry(0, 1), rat(1, 2));
        }
    }

    #[test]
    fn otp_encryption_matrix_is_the_xor_table() {
        let sys = otp(2);
        let m = sys.enc_matrix(1).unwrap();
        // Rows are (k, m) key-major; entry 1 exactly when c = k xor m.
        for ki in 0..2 {
            for mi in 0..2 {
                for ci in 0..2 {
                    let expected = if ki ^ mi == ci { rat(1, 1) } else { rat(0, 1) };
                    assert_eq!(*m.entry(ki * 2 + mi, ci), expected);
                }
            }
        }
    }

    #[test]
    fn width_incoherence_is_named() {
        let labels = FinSet::new(["0", "1"]).unwrap();
        let sort = SortFamily::new(labels.clone(), &[1]).unwrap();
        let enc = FeasibleEnsemble::new(vec![RandomizedFn::identity(2)]).unwrap();
        let dec = enc.clone();
        let pair = FeasibleEnsemble::identity(&[1]).unwrap();
        let keygen = FeasibleEnsemble::new(vec![RandomizedFn::tabulate(0, 1, 2, |_, x| {
            x.concat(&x).unwrap()
        })
        .unwrap()])
        .unwrap();
        let err = AbstractCryptoSystem::new(
            sort.clone(),
            sort.clone(),
            sort,
            enc,
            dec,
            pair,
            keygen,
            Dist::uniform(2).unwrap(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            SystemError::WidthCoherence {
                level: 1,
                what: "encryption output",
                have: 2,
                need: 1
            }
        );
    }

    #[test]
    fn broken_decryption_is_witnessed_not_rejected() {
        // Encryption ignores the message: ciphertext = key. Decryption
        // cannot possibly recover the message, but assembly succeeds.
        let labels = FinSet::new(["0", "1"]).unwrap();
        let sort = || SortFamily::new(labels.clone(), &[1]).unwrap();
        let enc = FeasibleEnsemble::new(vec![RandomizedFn::tabulate(0, 2, 1, |_, input| {
            input.split_at(1).unwrap().0
        })
        .unwrap()])
        .unwrap();
        let dec = FeasibleEnsemble::new(vec![RandomizedFn::tabulate(0, 2, 1, |_, input| {
            input.split_at(1).unwrap().1
        })
        .unwrap()])
        .unwrap();
        let pair = FeasibleEnsemble::identity(&[1]).unwrap();
        let keygen = FeasibleEnsemble::new(vec![RandomizedFn::tabulate(1, 1, 2, |seed, _| {
            seed.concat(&seed).unwrap()
        })
        .unwrap()])
        .unwrap();
        let sys = AbstractCryptoSystem::new(
            sort(),
            sort(),
            sort(),
            enc,
            dec,
            pair,
            keygen,
            Dist::uniform(2).unwrap(),
        )
        .unwrap();
        let defect = sys.check_unique_decryption().unwrap().unwrap();
        // First failure in scan order: key 0, message 1 encrypts to 0,
        // which decrypts back to 0 instead of 1.
        assert_eq!((defect.level, defect.key, defect.message), (1, 0, 1));
        assert_eq!(defect.cipher, Some(Bits::parse("0").unwrap()));
        assert_eq!(defect.decrypted, Some(Bits::parse("0").unwrap()));
    }

    #[test]
    fn keygen_pairing_defects_are_witnessed() {
        // keygen emits (k, k) but pair flips the bit.
        let labels = FinSet::new(["0", "1"]).unwrap();
        let sort = || SortFamily::new(labels.clone(), &[1]).unwrap();
        let enc = FeasibleEnsemble::new(vec![RandomizedFn::tabulate(0, 2, 1, |_, input| {
            let (k, m) = input.split_at(1).unwrap();
            k.xor(&m).unwrap()
        })
        .unwrap()])
        .unwrap();
        let dec = enc.clone();
        let pair = FeasibleEnsemble::new(vec![RandomizedFn::tabulate(0, 1, 1, |_, k| {
            k.xor(&Bits::parse("1").unwrap()).unwrap()
        })
        .unwrap()])
        .unwrap();
        let keygen = FeasibleEnsemble::new(vec![RandomizedFn::tabulate(1, 1, 2, |seed, _| {
            seed.concat(&seed).unwrap()
        })
        .unwrap()])
        .unwrap();
        let sys = AbstractCryptoSystem::new(
            sort(),
            sort(),
            sort(),
            enc,
            dec,
            pair,
            keygen,
            Dist::uniform(2).unwrap(),
        )
        .unwrap();
        let defect = sys.check_keygen_pairing().unwrap().unwrap();
        assert_eq!(defect.level, 1);
        assert_eq!(defect.key, Bits::parse("0").unwrap());
        assert_eq!(defect.shadow, Bits::parse("0").unwrap());
        assert_eq!(defect.expected, Some(Bits::parse("1").unwrap()));
    }
}
