//! Dolev-Yao cipher systems and possibilistic (relational) security.
//!
//! A [`DolevYaoSystem`] is a finite carrier `A` with total operation tables:
//! encryption `enc: A x A -> A`, decryption `dec: A x A -> A`, a key-pairing
//! `pair: A -> A` sending each key to the key that undoes it, and a subset
//! `M` of well-formed plaintexts. Everything here ignores probabilities and
//! asks only what is *possible*.
//!
//! The central object is the set of possible plaintexts of a ciphertext
//! `c` — every well-formed `m` some key could have encrypted to `c`. The
//! system hides its plaintexts perfectly, in the possibilistic sense, when
//! that set is all of `M` for every carrier element `c`: seeing a ciphertext
//! rules out nothing. That property is decided twice, by deliberately
//! independent routes (a literal quantifier sweep and the possible-plaintext
//! characterization), and a third time as commutativity of a Boolean-matrix
//! square; the agreement of the three is itself part of the test surface.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

use crate::diagram::{Diagram, DiagramError};
use crate::encoded::FinSet;
use crate::matrix::Matrix;

/// Errors from system construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("{table} table must be {n}x{n}, got row count {rows}")]
    TableRows {
        table: &'static str,
        n: usize,
        rows: usize,
    },
    #[error("{table} table row {row} must have {n} entries, got {len}")]
    TableRowLen {
        table: &'static str,
        n: usize,
        row: usize,
        len: usize,
    },
    #[error("{table}[{row}][{col}] = {value} is outside the carrier (size {n})")]
    ValueOutOfRange {
        table: &'static str,
        row: usize,
        col: usize,
        value: usize,
        n: usize,
    },
    #[error("pair table must have {n} entries, got {len}")]
    PairLen { n: usize, len: usize },
    #[error("pair[{k}] = {value} is outside the carrier (size {n})")]
    PairOutOfRange { k: usize, value: usize, n: usize },
    #[error("well-formed element {0} is outside the carrier (size {1})")]
    WellformedOutOfRange(usize, usize),
    #[error("element index {0} is outside the carrier (size {1})")]
    ElementOutOfRange(usize, usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// A first counterexample to the decryption condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecryptionWitness {
    pub key: usize,
    pub message: usize,
    /// What `dec(pair(key), enc(key, message))` actually returned.
    pub got: usize,
}

/// Verdict of the possibilistic security check, with a witness when it
/// fails: a carrier element `cipher` and a well-formed `message` that no key
/// encrypts to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicVerdict {
    pub secure: bool,
    pub witness: Option<AlgebraicWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgebraicWitness {
    pub cipher: usize,
    pub message: usize,
}

/// A finite cipher system with total operation tables.
///
/// Tables are indexed by carrier element index; `enc[k][m]` is the
/// encryption of message `m` under key `k`, `dec[k][c]` the decryption of
/// `c` under `k`, and `pair[k]` the key that is supposed to undo `k`.
///
/// The constructor checks only well-typedness. The decryption condition is
/// a separate check with a witness, not a construction invariant, so that
/// broken systems can be represented and reported on. The well-formed set
/// may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DolevYaoSystem {
    carrier: FinSet,
    enc: Vec<Vec<usize>>,
    dec: Vec<Vec<usize>>,
    pair: Vec<usize>,
    wellformed: Vec<bool>,
}

fn check_table(
    table: &'static str,
    t: &[Vec<usize>],
    n: usize,
) -> Result<(), SymbolicError> {
    if t.len() != n {
        return Err(SymbolicError::TableRows {
            table,
            n,
            rows: t.len(),
        });
    }
    for (row, r) in t.iter().enumerate() {
        if r.len() != n {
            return Err(SymbolicError::TableRowLen {
                table,
                n,
                row,
                len: r.len(),
            });
        }
        for (col, &value) in r.iter().enumerate() {
            if value >= n {
                return Err(SymbolicError::ValueOutOfRange {
                    table,
                    row,
                    col,
                    value,
                    n,
                });
            }
        }
    }
    Ok(())
}

impl DolevYaoSystem {
    pub fn new(
        carrier: FinSet,
        enc: Vec<Vec<usize>>,
        dec: Vec<Vec<usize>>,
        pair: Vec<usize>,
        wellformed: &[usize],
    ) -> Result<Self, SymbolicError> {
        let n = carrier.len();
        check_table("enc", &enc, n)?;
        check_table("dec", &dec, n)?;
        if pair.len() != n {
            return Err(SymbolicError::PairLen { n, len: pair.len() });
        }
        for (k, &value) in pair.iter().enumerate() {
            if value >= n {
                return Err(SymbolicError::PairOutOfRange { k, value, n });
            }
        }
        let mut mask = alloc::vec![false; n];
        for &m in wellformed {
            if m >= n {
                return Err(SymbolicError::WellformedOutOfRange(m, n));
            }
            mask[m] = true;
        }
        Ok(DolevYaoSystem {
            carrier,
            enc,
            dec,
            pair,
            wellformed: mask,
        })
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    /// Carrier size.
    pub fn n(&self) -> usize {
        self.carrier.len()
    }

    pub fn enc(&self, key: usize, message: usize) -> usize {
        self.enc[key][message]
    }

    pub fn dec(&self, key: usize, cipher: usize) -> usize {
        self.dec[key][cipher]
    }

    pub fn pair(&self, key: usize) -> usize {
        self.pair[key]
    }

    pub fn is_wellformed(&self, m: usize) -> bool {
        self.wellformed[m]
    }

    /// Indices of the well-formed plaintexts, ascending.
    pub fn wellformed(&self) -> Vec<usize> {
        (0..self.n()).filter(|&m| self.wellformed[m]).collect()
    }

    /// Checks `dec(pair(k), enc(k, m)) = m` for all `k, m`, returning the
    /// first counterexample in (key, message) scan order.
    pub fn check_decryption_condition(&self) -> Result<(), DecryptionWitness> {
        for key in 0..self.n() {
            for message in 0..self.n() {
                let got = self.dec(self.pair(key), self.enc(key, message));
                if got != message {
                    return Err(DecryptionWitness { key, message, got });
                }
            }
        }
        Ok(())
    }

    /// The classical converse equation `enc(k, dec(pair(k), c)) = c`, which
    /// realistic systems often violate; offered as a separate predicate and
    /// never required. Returns the first failing `(key, cipher)`.
    pub fn check_encryption_equation(&self) -> Result<(), (usize, usize)> {
        for key in 0..self.n() {
            for cipher in 0..self.n() {
                if self.enc(key, self.dec(self.pair(key), cipher)) != cipher {
                    return Err((key, cipher));
                }
            }
        }
        Ok(())
    }

    /// The set of possible plaintexts of `c`: well-formed messages some key
    /// encrypts to `c`. Ascending order.
    pub fn possible_plaintexts(&self, cipher: usize) -> Result<Vec<usize>, SymbolicError> {
        if cipher >= self.n() {
            return Err(SymbolicError::ElementOutOfRange(cipher, self.n()));
        }
        Ok((0..self.n())
            .filter(|&m| self.wellformed[m] && (0..self.n()).any(|k| self.enc(k, m) == cipher))
            .collect())
    }

    /// Possibilistic perfect security, decided by a literal sweep of the
    /// defining biconditional: for every carrier element `c` and every `m`,
    /// `m` is well-formed and reachable as an encryption landing on `c`
    /// exactly when `m` is well-formed. The witness is the first `(c, m)`
    /// where the two sides differ.
    pub fn secure_by_definition(&self) -> AlgebraicVerdict {
        for cipher in 0..self.n() {
            for message in 0..self.n() {
                let lhs = self.wellformed[message]
                    && (0..self.n()).any(|k| self.enc(k, message) == cipher);
                let rhs = self.wellformed[message];
                if lhs != rhs {
                    return AlgebraicVerdict {
                        secure: false,
                        witness: Some(AlgebraicWitness { cipher, message }),
                    };
                }
            }
        }
        AlgebraicVerdict {
            secure: true,
            witness: None,
        }
    }

    /// The same property decided through the possible-plaintext sets: every
    /// carrier element must have all of `M` as its possible plaintexts.
    /// Kept independent of [`Self::secure_by_definition`] on purpose.
    pub fn secure_by_possible_plaintexts(&self) -> bool {
        let m: BTreeSet<usize> = self.wellformed().into_iter().collect();
        (0..self.n()).all(|c| {
            let pp: BTreeSet<usize> = self
                .possible_plaintexts(c)
                .expect("carrier index in range")
                .into_iter()
                .collect();
            pp == m
        })
    }

    /// Do the two security routes agree on this system? True is expected
    /// always; exercised across exhaustive and random sweeps as a self-test.
    pub fn security_routes_agree(&self) -> bool {
        self.secure_by_definition().secure == self.secure_by_possible_plaintexts()
    }

    /// The Boolean-matrix security square.
    ///
    /// Objects: `ciphertexts` (the carrier as encryption results), the pair
    /// set `key-message-pairs`, the one-point set `unit`, and `messages`
    /// (the carrier as plaintexts — a distinct diagram node, so the only
    /// parallel routes are the two legs of the square). Edges:
    ///
    /// * `candidate-encryptions`: relates `c` to every pair `(k, m)` with
    ///   `m` well-formed and `enc(k, m) = c`;
    /// * `keep-message`: projects `(k, m)` to `m`;
    /// * `collapse`: the total relation to the point;
    /// * `wellformed-messages`: relates the point to each element of `M`.
    ///
    /// The square commutes exactly when the system is possibilistically
    /// secure: following candidates and projecting must reveal nothing
    /// beyond well-formedness.
    pub fn rel_security_diagram(&self) -> Result<Diagram<bool>, SymbolicError> {
        let n = self.n();
        let mut d = Diagram::new();
        let ciphertexts = d.add_object("ciphertexts", n)?;
        let pairs = d.add_object("key-message-pairs", n * n)?;
        let unit = d.add_object("unit", 1)?;
        let messages = d.add_object("messages", n)?;

        let candidates = Matrix::from_fn(n, n * n, |c, km| {
            let (k, m) = (km / n, km % n);
            self.wellformed[m] && self.enc(k, m) == c
        });
        let keep_message = Matrix::from_function(n * n, n, |km| km % n);
        let collapse = Matrix::to_unit(n);
        let wellformed_row = Matrix::from_fn(1, n, |_, m| self.wellformed[m]);

        d.add_edge("candidate-encryptions", ciphertexts, pairs, candidates)?;
        d.add_edge("keep-message", pairs, messages, keep_message)?;
        d.add_edge("collapse", ciphertexts, unit, collapse)?;
        d.add_edge("wellformed-messages", unit, messages, wellformed_row)?;
        Ok(d)
    }

    /// Convenience: the diagram-route verdict.
    pub fn secure_by_diagram(&self) -> Result<bool, SymbolicError> {
        Ok(self.rel_security_diagram()?.check_commutes()?.commutes())
    }
}
