use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitsError {
    #[error("invalid bit {found:?} at position {position}")]
    InvalidBit { position: usize, found: char },
    #[error("value {value} does not fit in {width} bits")]
    Overflow { value: u128, width: usize },
}

/// A finite sequence over `{0, 1}`, one byte per bit.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// Wraps `bits`, rejecting anything other than 0 and 1.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self, BitsError> {
        if let Some(position) = bits.iter().position(|&b| b > 1) {
            return Err(BitsError::InvalidBit {
                position,
                found: char::from(b'0'.wrapping_add(bits[position])),
            });
        }
        Ok(Self(bits))
    }

    /// Fixed-width big-endian binary representation of `value`.
    pub fn from_uint(value: u128, width: usize) -> Result<Self, BitsError> {
        if width < 128 && value >> width != 0 {
            return Err(BitsError::Overflow { value, width });
        }
        Ok(Self(
            (0..width)
                .map(|i| {
                    let shift = width - 1 - i;
                    if shift >= 128 {
                        0
                    } else {
                        ((value >> shift) & 1) as u8
                    }
                })
                .collect(),
        ))
    }

    /// Big-endian integer value; `None` if it does not fit in 128 bits.
    pub fn to_uint(&self) -> Option<u128> {
        let lead = self.0.iter().position(|&b| b == 1).unwrap_or(self.0.len());
        if self.0.len() - lead > 128 {
            return None;
        }
        Some(self.0[lead..].iter().fold(0u128, |acc, &b| (acc << 1) | b as u128))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.0
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// The first `len` bits.
    pub fn prefix(&self, len: usize) -> Self {
        Self(self.0[..len].to_vec())
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self(self.0[range].to_vec())
    }

    /// `w[j] = wt(self[..j])` for `j` in `0..=len`.
    pub fn prefix_weights(&self) -> Vec<usize> {
        let mut acc = 0;
        std::iter::once(0)
            .chain(self.0.iter().map(|&b| {
                acc += b as usize;
                acc
            }))
            .collect()
    }

    pub fn concat(parts: &[&BitString]) -> Self {
        Self(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }

    pub fn hamming_distance(&self, other: &BitString) -> usize {
        assert_eq!(self.len(), other.len(), "hamming distance of unequal lengths");
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    /// All `2^n` strings of length `n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = BitString> {
        assert!(n < 64, "enumeration of 2^{n} strings");
        (0u64..1 << n).map(move |v| BitString::from_uint(v as u128, n).expect("fits"))
    }
}

impl From<BitString> for Vec<u8> {
    fn from(b: BitString) -> Self {
        b.0
    }
}

impl FromStr for BitString {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(position, c)| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                found => Err(BitsError::InvalidBit { position, found }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Shorthand for tests and fixtures; panics on malformed input.
pub fn bits(s: &str) -> BitString {
    s.parse().expect("valid bit string")
}
