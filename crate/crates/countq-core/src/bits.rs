use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A short bit string (up to 64 bits), used for classical inputs `x` and
/// witness strings `y`. Index 0 is the leftmost character of the printed
/// form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    len: usize,
    bits: u64,
}

impl BitString {
    pub const MAX_LEN: usize = 64;

    pub fn empty() -> Self {
        BitString { len: 0, bits: 0 }
    }

    /// Builds a bit string of `len` bits where bit `i` is `(value >> i) & 1`.
    pub fn from_len_value(len: usize, value: u64) -> Result<Self> {
        if len > Self::MAX_LEN {
            return Err(Error::Invalid(format!(
                "bit string longer than {} bits",
                Self::MAX_LEN
            )));
        }
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Ok(BitString {
            len,
            bits: value & mask,
        })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::from_len_value(len, 0)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.bits >> i) & 1 == 1
    }

    /// Raw packed value; bit `i` of the string sits at bit position `i`.
    pub fn raw(&self) -> u64 {
        self.bits
    }

    pub fn push(&mut self, bit: bool) -> Result<()> {
        if self.len == Self::MAX_LEN {
            return Err(Error::Invalid("bit string full".into()));
        }
        if bit {
            self.bits |= 1 << self.len;
        }
        self.len += 1;
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = BitString::empty();
        for c in s.chars() {
            match c {
                '0' => out.push(false)?,
                '1' => out.push(true)?,
                _ => {
                    return Err(Error::Invalid(format!(
                        "bad bit string {s:?}: expected only 0/1"
                    )))
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}
