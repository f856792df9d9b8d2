//! Suffix-dominant strings: every prefix weighs no more than the suffix of
//! the same length.

use thiserror::Error;

use crate::bits::BitString;
use crate::multi::{phi_encode, PhiSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DominantError {
    #[error("message has {got} bits, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("codeword has {got} bits, expected {expected}")]
    CodewordLength { expected: usize, got: usize },
    #[error("string is not suffix-dominant")]
    NotDominant,
    #[error("string is not in the image of the encoder")]
    NotInImage,
    #[error("interleave realization needs even n1 >= 2, got {0}")]
    OddLength(usize),
    #[error("enumerative realization supports 1 <= n1 <= 127, got {0}")]
    UnsupportedLength(usize),
}

/// Half-range check: `wt(c[j]) <= wt(rev(c)[j])` for `j <= ceil(n/2)`.
pub fn is_suffix_dominant(c: &BitString) -> bool {
    let n = c.len();
    let pre = c.prefix_weights();
    (1..=n.div_ceil(2)).all(|j| pre[j] <= pre[n] - pre[n - j])
}

/// The same condition checked for every `j <= n`.
pub fn is_suffix_dominant_full(c: &BitString) -> bool {
    let n = c.len();
    let pre = c.prefix_weights();
    (1..=n).all(|j| pre[j] <= pre[n] - pre[n - j])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Realization {
    Enumerative,
    Interleave,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominantCode {
    n1: usize,
    realization: Realization,
    message_length: usize,
}

impl DominantCode {
    pub fn enumerative(n1: usize) -> Result<Self, DominantError> {
        if n1 == 0 || n1 > 127 {
            return Err(DominantError::UnsupportedLength(n1));
        }
        let total = count_completions(&vec![None; n1]);
        Ok(Self {
            n1,
            realization: Realization::Enumerative,
            message_length: total.ilog2() as usize,
        })
    }

    pub fn interleave(n1: usize) -> Result<Self, DominantError> {
        if n1 < 2 || n1 % 2 == 1 {
            return Err(DominantError::OddLength(n1));
        }
        Ok(Self {
            n1,
            realization: Realization::Interleave,
            message_length: n1 / 2,
        })
    }

    pub fn new(n1: usize, realization: Realization) -> Result<Self, DominantError> {
        match realization {
            Realization::Enumerative => Self::enumerative(n1),
            Realization::Interleave => Self::interleave(n1),
        }
    }

    pub fn length(&self) -> usize {
        self.n1
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    pub fn message_length(&self) -> usize {
        self.message_length
    }

    /// Number of suffix-dominant strings of length `n1`.
    pub fn dominant_count(&self) -> u128 {
        count_completions(&vec![None; self.n1])
    }

    pub fn encode(&self, msg: &BitString) -> Result<BitString, DominantError> {
        if msg.len() != self.message_length {
            return Err(DominantError::LengthMismatch {
                expected: self.message_length,
                got: msg.len(),
            });
        }
        match self.realization {
            Realization::Enumerative => Ok(unrank(self.n1, msg.to_uint().expect("message_length < 128"))),
            Realization::Interleave => {
                let spec = PhiSpec::new(1, self.message_length).expect("k >= 1");
                Ok(phi_encode(std::slice::from_ref(msg), &spec)
                    .expect("length checked")
                    .remove(0))
            }
        }
    }

    pub fn decode(&self, c: &BitString) -> Result<BitString, DominantError> {
        if c.len() != self.n1 {
            return Err(DominantError::CodewordLength {
                expected: self.n1,
                got: c.len(),
            });
        }
        if !is_suffix_dominant(c) {
            return Err(DominantError::NotDominant);
        }
        match self.realization {
            Realization::Enumerative => {
                let r = rank(c);
                if self.message_length < 128 && r >> self.message_length != 0 {
                    return Err(DominantError::NotInImage);
                }
                Ok(BitString::from_uint(r, self.message_length).expect("range checked"))
            }
            Realization::Interleave => {
                let k = self.message_length;
                let positions = crate::multi::info_positions(1, k);
                let z = BitString::from_bits(positions.iter().map(|&p| c.get(p)).collect()).expect("binary");
                if self.encode(&z)? != *c {
                    return Err(DominantError::NotInImage);
                }
                Ok(z)
            }
        }
    }
}

/// Number of suffix-dominant strings of length `fixed.len()` agreeing with
/// every `Some` entry.
///
/// Positions `i` and `n-1-i` are processed together; the running deficit is
/// `wt(suffix) - wt(prefix)` over the pairs seen so far and must stay
/// nonnegative. A middle bit (odd `n`) never affects the condition.
fn count_completions(fixed: &[Option<u8>]) -> u128 {
    let n = fixed.len();
    let half = n / 2;
    let options = |pos: usize| -> &'static [u8] {
        match fixed[pos] {
            Some(0) => &[0],
            Some(_) => &[1],
            None => &[0, 1],
        }
    };
    // ways[d] = completions of the pairs so far with deficit d
    let mut ways = vec![0u128; half + 1];
    ways[0] = 1;
    for i in 0..half {
        let mut next = vec![0u128; half + 1];
        for (d, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for &a in options(i) {
                for &b in options(n - 1 - i) {
                    if let Some(nd) = (d + b as usize).checked_sub(a as usize) {
                        next[nd] += w;
                    }
                }
            }
        }
        ways = next;
    }
    let total: u128 = ways.iter().sum();
    if n % 2 == 1 {
        total * options(half).len() as u128
    } else {
        total
    }
}

/// The `index`-th suffix-dominant string of length `n` in lexicographic
/// order.
fn unrank(n: usize, mut index: u128) -> BitString {
    let mut fixed = vec![None; n];
    for i in 0..n {
        fixed[i] = Some(0);
        let zeros = count_completions(&fixed);
        if index >= zeros {
            index -= zeros;
            fixed[i] = Some(1);
        }
    }
    BitString::from_bits(fixed.into_iter().map(|b| b.expect("all fixed")).collect()).expect("binary")
}

/// Position of a suffix-dominant `c` in lexicographic order.
fn rank(c: &BitString) -> u128 {
    let n = c.len();
    let mut fixed = vec![None; n];
    let mut r = 0;
    for i in 0..n {
        if c.get(i) == 1 {
            fixed[i] = Some(0);
            r += count_completions(&fixed);
        }
        fixed[i] = Some(c.get(i));
    }
    r
}
