//! Binary narrow-sense primitive BCH codes.
//!
//! Bit `i` of a codeword is the coefficient of `x^(n-1-i)`, so the message
//! occupies the first `dimension` positions and the parity the rest.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::bits::BitString;
use crate::galois::{BinaryExtField, Field, FieldError};
use crate::locator;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("invalid code parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("decoding failure: {0}")]
    DecodingFailure(String),
}

/// A systematic binary code with a bounded-distance decoder.
///
/// Codes that are asymptotically good (constant rate, linear correction
/// radius) plug in here; at desk scale a BCH code stands in for them.
pub trait BinaryCode {
    fn length(&self) -> usize;
    fn dimension(&self) -> usize;
    /// Number of bit errors the decoder is guaranteed to correct.
    fn radius(&self) -> usize;
    /// Systematic encoding, message in the first `dimension` positions.
    fn encode(&self, msg: &BitString) -> Result<BitString, CodeError>;
    /// Returns the corrected codeword and its message.
    fn decode(&self, word: &BitString) -> Result<(BitString, BitString), CodeError>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BchCode {
    field: BinaryExtField,
    t: usize,
    /// Generator polynomial over GF(2), lowest degree first.
    gen: Vec<u8>,
}

/// Whether `2t - 1 <= 2^ceil(m/2) + 1`, the range where the dimension is
/// guaranteed to be at least `n - m t`.
pub fn dimension_bound_holds(m: u32, t: usize) -> bool {
    (2 * t).saturating_sub(1) as u64 <= (1u64 << m.div_ceil(2)) + 1
}

impl BchCode {
    /// Builds the code of length `2^m - 1` with designed distance `2t + 1`,
    /// requiring `2t - 1 <= 2^ceil(m/2) + 1`.
    pub fn build(m: u32, t: usize) -> Result<Self, CodeError> {
        if !dimension_bound_holds(m, t) {
            return Err(CodeError::InvalidParams(format!(
                "2t - 1 = {} exceeds 2^ceil(m/2) + 1 = {}",
                2 * t - 1,
                (1u64 << m.div_ceil(2)) + 1
            )));
        }
        let code = Self::build_relaxed(m, t)?;
        let floor = code.length() as i64 - (m as i64) * (t as i64);
        assert!(code.dimension() as i64 >= floor, "BCH dimension below n - m t");
        Ok(code)
    }

    /// Like [`BchCode::build`] but without the dimension-bound precondition;
    /// only a positive dimension is required.
    pub fn build_relaxed(m: u32, t: usize) -> Result<Self, CodeError> {
        if t == 0 {
            return Err(CodeError::InvalidParams("t must be at least 1".into()));
        }
        let field = BinaryExtField::new(m)?;
        let n = field.cycle_len();
        if 2 * t as u64 > n {
            return Err(CodeError::InvalidParams(format!("t = {t} too large for length {n}")));
        }
        // Product of the minimal polynomials of α^i over the union of the
        // cyclotomic cosets of 1, 3, ..., 2t - 1.
        let mut roots = BTreeSet::new();
        for i in (1..2 * t as u64).step_by(2) {
            let mut e = i % n;
            while roots.insert(e) {
                e = (2 * e) % n;
            }
        }
        let mut gen = vec![1u64];
        for &e in &roots {
            gen = locator::mul(&field, &gen, &[field.alpha_pow(e), 1]);
        }
        let gen: Vec<u8> = gen
            .into_iter()
            .map(|c| {
                assert!(c <= 1, "generator coefficient outside GF(2)");
                c as u8
            })
            .collect();
        if gen.len() - 1 >= n as usize {
            return Err(CodeError::InvalidParams(format!("BCH(m = {m}, t = {t}) has dimension 0")));
        }
        Ok(Self { field, t, gen })
    }

    pub fn field(&self) -> &BinaryExtField {
        &self.field
    }

    /// Designed error capability.
    pub fn capability(&self) -> usize {
        self.t
    }

    pub fn generator(&self) -> &[u8] {
        &self.gen
    }

    /// Bit-encoded generator polynomial, bit `i` the coefficient of `x^i`.
    pub fn generator_bits(&self) -> u128 {
        self.gen.iter().rev().fold(0u128, |acc, &c| (acc << 1) | c as u128)
    }

    fn n(&self) -> usize {
        self.field.cycle_len() as usize
    }

    /// Remainder of the word polynomial modulo the generator, as bits of
    /// degree `deg(g) - 1` down to 0.
    fn remainder(&self, word: &[u8]) -> Vec<u8> {
        let n = word.len();
        let dg = self.gen.len() - 1;
        // rem[d] is the coefficient of x^d
        let mut rem: Vec<u8> = word.iter().rev().copied().collect();
        for d in (dg..n).rev() {
            if rem[d] == 1 {
                for (i, &g) in self.gen.iter().enumerate() {
                    rem[d - dg + i] ^= g;
                }
            }
        }
        rem.truncate(dg);
        rem.reverse();
        rem
    }

    /// Syndromes `S_j = c(α^j)` for `j = 1..=2t`.
    fn syndromes(&self, word: &[u8]) -> Vec<u64> {
        let n = word.len();
        let f = &self.field;
        (1..=2 * self.t as u64)
            .map(|j| {
                word.iter()
                    .enumerate()
                    .filter(|(_, &b)| b == 1)
                    .fold(0, |acc, (i, _)| f.add(acc, f.alpha_pow(j * (n - 1 - i) as u64)))
            })
            .collect()
    }

    pub fn is_codeword(&self, word: &BitString) -> bool {
        word.len() == self.n() && self.remainder(word.as_slice()).iter().all(|&b| b == 0)
    }
}

impl BinaryCode for BchCode {
    fn length(&self) -> usize {
        self.n()
    }

    fn dimension(&self) -> usize {
        self.n() - (self.gen.len() - 1)
    }

    fn radius(&self) -> usize {
        self.t
    }

    fn encode(&self, msg: &BitString) -> Result<BitString, CodeError> {
        let k = self.dimension();
        if msg.len() != k {
            return Err(CodeError::LengthMismatch {
                expected: k,
                got: msg.len(),
            });
        }
        let mut word = msg.as_slice().to_vec();
        word.resize(self.n(), 0);
        let parity = self.remainder(&word);
        word[k..].copy_from_slice(&parity);
        Ok(BitString::from_bits(word).expect("binary"))
    }

    fn decode(&self, word: &BitString) -> Result<(BitString, BitString), CodeError> {
        let n = self.n();
        if word.len() != n {
            return Err(CodeError::LengthMismatch {
                expected: n,
                got: word.len(),
            });
        }
        let f = &self.field;
        let s = self.syndromes(word.as_slice());
        let mut fixed = word.as_slice().to_vec();
        if s.iter().any(|&v| v != 0) {
            let (lambda, nerr) = locator::berlekamp_massey(f, &s);
            if nerr > self.t {
                return Err(CodeError::DecodingFailure(format!(
                    "locator degree {nerr} exceeds capability {}",
                    self.t
                )));
            }
            let deg = locator::degree(&lambda).unwrap_or(0);
            // Position i has locator α^(n-1-i); test Λ(α^-(n-1-i)).
            let roots: Vec<usize> = (0..n)
                .filter(|&i| {
                    let e = (n - 1 - i) as u64;
                    locator::eval(f, &lambda, f.alpha_pow(f.cycle_len() - e)) == 0
                })
                .collect();
            if roots.len() != deg {
                return Err(CodeError::DecodingFailure(format!(
                    "locator degree {deg} but {} roots",
                    roots.len()
                )));
            }
            for i in roots {
                fixed[i] ^= 1;
            }
            if self.remainder(&fixed).iter().any(|&b| b == 1) {
                return Err(CodeError::DecodingFailure("corrected word is not a codeword".into()));
            }
        }
        let k = self.dimension();
        let msg = BitString::from_bits(fixed[..k].to_vec()).expect("binary");
        Ok((BitString::from_bits(fixed).expect("binary"), msg))
    }
}
