//! Single-string codes reconstructible from erroneous prefix-suffix
//! compositions.

use thiserror::Error;

use crate::bch::CodeError;
use crate::bits::BitString;
use crate::compositions::{distance, prefix_suffix_compositions, CompositionError, CompositionMultiset, NormalizedView};
use crate::dominance::DominantError;
use crate::grs::GrsError;

pub mod c1;
pub mod c2;
pub mod c3;
pub mod c4;

pub use c1::{c1_codebook, c1_decode, c1_membership, C1Params};
pub use c2::{c2_decode, c2_encode, C2Params};
pub use c3::{c3_constraints, c3_decode, c3_encode, parity_string, C3Params, Constraint};
pub use c4::{c4_decode, c4_encode, C4Params};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("multiset has length {got}, expected {expected}")]
    AmbientMismatch { expected: usize, got: usize },
    #[error("GRS decoding: {0}")]
    Grs(#[from] GrsError),
    #[error("binary decoding: {0}")]
    Code(#[from] CodeError),
    #[error("dominant code: {0}")]
    Dominant(#[from] DominantError),
    #[error(transparent)]
    Composition(#[from] CompositionError),
    #[error("difference at position {position} is not a bit")]
    NonBinary { position: usize },
    #[error("recovered string fails the parity-check equations")]
    NotMember,
    #[error("recovered syndrome symbol {index} has value {value} >= p = {p}")]
    SymbolOutOfRange { index: usize, value: u64, p: u64 },
    #[error("recovered padding bits are not zero")]
    BadPadding,
    #[error("message has {got} symbols, expected {expected}")]
    MessageLength { expected: usize, got: usize },
    #[error("decoded codeword is at distance {distance} from the input, budget {budget}")]
    Mismatch { distance: usize, budget: usize },
}

/// Outcome class of a decode attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Recovered,
    Failed,
    DetectedMismatch,
}

impl Verdict {
    pub fn of<T>(result: &Result<T, ReconError>) -> Self {
        match result {
            Ok(_) => Verdict::Recovered,
            Err(ReconError::Mismatch { .. }) => Verdict::DetectedMismatch,
            Err(_) => Verdict::Failed,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Recovered => "recovered",
            Verdict::Failed => "failed",
            Verdict::DetectedMismatch => "detected-mismatch",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction<M> {
    pub codeword: BitString,
    pub message: M,
    /// Sizes whose groups the decoder read.
    pub consumed: Vec<usize>,
}

/// Lower and upper masses per size of an `h = 1` view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MassSequences {
    lower: Vec<usize>,
    upper: Vec<usize>,
}

impl MassSequences {
    pub fn from_view(view: &NormalizedView) -> Self {
        assert_eq!(view.multiplicity(), 1, "mass sequences need h = 1");
        let n = view.len();
        Self {
            lower: (0..=n).map(|j| view.lower(j)).collect(),
            upper: (0..=n).map(|j| view.upper(j)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.lower.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `b_j`, with `b_0 = 0`.
    pub fn lower(&self, j: usize) -> usize {
        self.lower[j]
    }

    /// `b̄_j`, with `b̄_0 = 0`.
    pub fn upper(&self, j: usize) -> usize {
        self.upper[j]
    }
}

/// `t_j = (b_j - b_{j-1}) mod 2` over the lower masses of an `h = 1` view.
pub fn mass_diff_string(view: &NormalizedView) -> BitString {
    let n = view.len();
    BitString::from_bits((1..=n).map(|j| ((view.lower(j) + view.lower(j - 1)) % 2) as u8).collect()).expect("binary")
}

fn check_ambient(y: &CompositionMultiset, n: usize) -> Result<(), ReconError> {
    if y.len() != n {
        return Err(ReconError::AmbientMismatch {
            expected: n,
            got: y.len(),
        });
    }
    Ok(())
}

/// Re-composes `codeword` and requires it within `budget` of `y`.
fn verify(codeword: &BitString, y: &CompositionMultiset, budget: usize) -> Result<(), ReconError> {
    let d = distance(&prefix_suffix_compositions(codeword)?, y)?;
    if d > budget {
        return Err(ReconError::Mismatch { distance: d, budget });
    }
    Ok(())
}

/// Differences of consecutive prefix sums in `F_p`, required to be bits.
fn prefix_differences(p: u64, x: &[u64]) -> Result<BitString, ReconError> {
    let mut prev = 0u64;
    let mut out = Vec::with_capacity(x.len());
    for (position, &s) in x.iter().enumerate() {
        let d = (s + p - prev) % p;
        if d > 1 {
            return Err(ReconError::NonBinary { position });
        }
        out.push(d as u8);
        prev = s;
    }
    Ok(BitString::from_bits(out).expect("binary"))
}
