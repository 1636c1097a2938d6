//! Finite labeled sets, with and without bitstring codes.
//!
//! Matrix rows and columns are indexed by the elements of finite sets. A
//! [`FinSet`] is an ordered list of distinct labels; element order is the
//! index order and is part of the set's identity. An [`EncodedSet`] extends
//! this with a fixed-width, injective bitstring code per element, which is
//! how abstract sorts meet the bitstring tables of randomized functions.
//!
//! Products are flat and ordered lexicographically by component index
//! (row-major), so the product of element codes is the concatenation of the
//! component codes in order.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use alloc::collections::BTreeMap;

use thiserror::Error;

use crate::bits::{Bits, BitsError};

/// Errors from set construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("duplicate code {0} (codes must be injective)")]
    DuplicateCode(Bits),
    #[error("expected {expected} codes, got {got}")]
    CodeCountMismatch { expected: usize, got: usize },
    #[error("code width mismatch: {0} bits vs {1} bits")]
    CodeWidthMismatch(usize, usize),
    #[error("width {width} cannot code {n} elements")]
    WidthTooNarrow { width: usize, n: usize },
    #[error(transparent)]
    Bits(#[from] BitsError),
}

/// An ordered finite set of distinct labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSet {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl FinSet {
    /// A set with the given labels, indexed in the given order.
    pub fn new<I, S>(labels: I) -> Result<Self, SetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(SetError::DuplicateLabel(l.clone()));
            }
        }
        Ok(FinSet { labels, index })
    }

    /// The one-element set whose only label is `"*"`.
    pub fn unit() -> Self {
        FinSet::new(["*"]).expect("unit set is well formed")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    /// Flat product of several sets, ordered lexicographically by component
    /// index; labels read `(a,b,...)`.
    pub fn product(factors: &[&FinSet]) -> Self {
        let mut labels = vec![String::new()];
        for f in factors {
            let mut next = Vec::with_capacity(labels.len() * f.len());
            for prefix in &labels {
                for l in f.labels() {
                    if prefix.is_empty() {
                        next.push(l.clone());
                    } else {
                        next.push(format!("{prefix},{l}"));
                    }
                }
            }
            labels = next;
        }
        let labels: Vec<String> = labels.into_iter().map(|l| format!("({l})")).collect();
        FinSet::new(labels).expect("product labels of distinct labels are distinct")
    }
}

/// A finite set whose elements carry distinct bitstring codes of one width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedSet {
    set: FinSet,
    codes: Vec<Bits>,
    by_code: BTreeMap<Bits, usize>,
    width: usize,
}

impl EncodedSet {
    /// Pairs labels with codes; codes must be injective and of one width.
    pub fn new(set: FinSet, codes: Vec<Bits>, width: usize) -> Result<Self, SetError> {
        if codes.len() != set.len() {
            return Err(SetError::CodeCountMismatch {
                expected: set.len(),
                got: codes.len(),
            });
        }
        let mut by_code = BTreeMap::new();
        for (i, c) in codes.iter().enumerate() {
            if c.len() != width {
                return Err(SetError::CodeWidthMismatch(width, c.len()));
            }
            if by_code.insert(*c, i).is_some() {
                return Err(SetError::DuplicateCode(*c));
            }
        }
        Ok(EncodedSet {
            set,
            codes,
            by_code,
            width,
        })
    }

    /// Codes element `i` as the `width`-bit numeral of `i` (zero padded).
    pub fn with_padded_codes(set: FinSet, width: usize) -> Result<Self, SetError> {
        let n = set.len();
        if width > 63 || n > 0 && (n - 1) as u64 >> width.min(63) != 0 {
            return Err(SetError::WidthTooNarrow { width, n });
        }
        let codes = (0..n)
            .map(|i| Bits::new(width, i as u64))
            .collect::<Result<Vec<_>, _>>()?;
        EncodedSet::new(set, codes, width)
    }

    /// The set of all `width`-bit strings, coded by themselves.
    pub fn all_bits(width: usize) -> Self {
        let codes: Vec<Bits> = Bits::all(width).collect();
        let set = FinSet::new(codes.iter().map(|b| format!("{b}")))
            .expect("bitstring labels are distinct");
        EncodedSet::new(set, codes, width).expect("identity coding is injective")
    }

    pub fn set(&self) -> &FinSet {
        &self.set
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn label(&self, i: usize) -> &str {
        self.set.label(i)
    }

    pub fn code(&self, i: usize) -> Bits {
        self.codes[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.set.index_of(label)
    }

    pub fn index_of_code(&self, code: &Bits) -> Option<usize> {
        self.by_code.get(code).copied()
    }

    /// Flat product; codes concatenate in component order.
    pub fn product(factors: &[&EncodedSet]) -> Result<Self, SetError> {
        let sets: Vec<&FinSet> = factors.iter().map(|f| f.set()).collect();
        let set = FinSet::product(&sets);
        let width = factors.iter().map(|f| f.width()).sum();
        let mut codes = vec![Bits::empty()];
        for f in factors {
            let mut next = Vec::with_capacity(codes.len() * f.len());
            for prefix in &codes {
                for i in 0..f.len() {
                    next.push(prefix.concat(&f.code(i))?);
                }
            }
            codes = next;
        }
        EncodedSet::new(set, codes, width)
    }
}
