//! Fixed-width bitstrings.
//!
//! Bitstrings are the raw material of codes and randomized-function tables:
//! set elements carry bitstring codes, seeds are bitstrings, and multi-slot
//! game inputs are built by concatenation. A [`Bits`] value is a string over
//! {0,1} of explicit length (the empty string is legal); it is backed by a
//! `u64`, read as the binary numeral the string spells, so numeric order on
//! equal-width values coincides with lexicographic order on the strings.

use core::fmt;

use thiserror::Error;

/// Hard width cap. Concatenated game inputs stay well under this at desk
/// scale, and the cap keeps every value inside one `u64`.
pub const MAX_BITS: usize = 48;

/// A bitstring of explicit length (possibly zero), at most [`MAX_BITS`] long.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bits {
    len: usize,
    val: u64,
}

/// Errors from bitstring construction and combination.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitsError {
    #[error("bitstring length {0} exceeds the supported maximum {MAX_BITS}")]
    TooLong(usize),
    #[error("value {val} does not fit in {len} bits")]
    ValueTooWide { len: usize, val: u64 },
    #[error("length mismatch: {0} bits vs {1} bits")]
    LengthMismatch(usize, usize),
    #[error("invalid bitstring character {0:?} (expected '0' or '1')")]
    BadChar(char),
    #[error("cannot split {len}-bit string at {at}")]
    BadSplit { len: usize, at: usize },
}

impl Bits {
    /// The empty bitstring.
    pub const fn empty() -> Self {
        Bits { len: 0, val: 0 }
    }

    /// A bitstring of `len` bits spelling the binary numeral of `val`.
    pub fn new(len: usize, val: u64) -> Result<Self, BitsError> {
        if len > MAX_BITS {
            return Err(BitsError::TooLong(len));
        }
        if len < 64 && val >> len != 0 {
            return Err(BitsError::ValueTooWide { len, val });
        }
        Ok(Bits { len, val })
    }

    /// The all-zero string of the given length.
    pub fn zeros(len: usize) -> Result<Self, BitsError> {
        Bits::new(len, 0)
    }

    /// Parses a string of '0'/'1' characters; the empty string is allowed.
    pub fn parse(s: &str) -> Result<Self, BitsError> {
        if s.len() > MAX_BITS {
            return Err(BitsError::TooLong(s.len()));
        }
        let mut val = 0u64;
        for ch in s.chars() {
            val = (val << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    other => return Err(BitsError::BadChar(other)),
                };
        }
        Ok(Bits { len: s.len(), val })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Numeric value of the string read as a binary numeral.
    pub fn val(&self) -> u64 {
        self.val
    }

    /// Bit at position `i`, counting from the left (most significant first).
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for {self}");
        (self.val >> (self.len - 1 - i)) & 1 == 1
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Bits) -> Result<Self, BitsError> {
        let len = self.len + other.len;
        if len > MAX_BITS {
            return Err(BitsError::TooLong(len));
        }
        Ok(Bits {
            len,
            val: (self.val << other.len) | other.val,
        })
    }

    /// Splits into the first `at` bits and the remainder.
    pub fn split_at(&self, at: usize) -> Result<(Self, Self), BitsError> {
        if at > self.len {
            return Err(BitsError::BadSplit { len: self.len, at });
        }
        let tail_len = self.len - at;
        let head = Bits {
            len: at,
            val: self.val >> tail_len,
        };
        let tail = Bits {
            len: tail_len,
            val: self.val & mask(tail_len),
        };
        Ok((head, tail))
    }

    /// Bitwise exclusive-or of two equal-length strings.
    pub fn xor(&self, other: &Bits) -> Result<Self, BitsError> {
        if self.len != other.len {
            return Err(BitsError::LengthMismatch(self.len, other.len));
        }
        Ok(Bits {
            len: self.len,
            val: self.val ^ other.val,
        })
    }

    /// All bitstrings of the given length in numeric (= lexicographic) order.
    pub fn all(len: usize) -> impl Iterator<Item = Bits> {
        assert!(
            len <= 24,
            "refusing to enumerate 2^{len} bitstrings (cap 2^24)"
        );
        (0..(1u64 << len)).map(move |val| Bits { len, val })
    }
}

fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b\"{self}\"")
    }
}
