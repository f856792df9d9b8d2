//! Block expansion of a prefix-sum GRS code: each symbol `c_j` of the
//! difference vector becomes a run-length block of length `2p - 1`.

use crate::bits::BitString;
use crate::compositions::{normalize, CompositionMultiset};
use crate::grs::GrsParams;

use super::{check_ambient, verify, ReconError, Reconstruction};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C2Params {
    n1: usize,
    t: usize,
    p: u64,
    grs: GrsParams,
}

impl C2Params {
    pub fn new(p: u64, n1: usize, t: usize) -> Result<Self, ReconError> {
        if 2 * t >= n1 {
            return Err(ReconError::InvalidParams(format!("need t < n1/2, got t = {t}, n1 = {n1}")));
        }
        if (p as u128) < n1 as u128 + 1 {
            return Err(ReconError::InvalidParams(format!("need p >= n1 + 1, got p = {p}, n1 = {n1}")));
        }
        let grs = GrsParams::standard(p, n1, 2 * t)?;
        Ok(Self { n1, t, p, grs })
    }

    pub fn inner_length(&self) -> usize {
        self.n1
    }

    pub fn budget(&self) -> usize {
        self.t
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn grs(&self) -> &GrsParams {
        &self.grs
    }

    pub fn block_length(&self) -> usize {
        2 * self.p as usize - 1
    }

    /// `n1 (2p - 1)`.
    pub fn length(&self) -> usize {
        self.n1 * self.block_length()
    }

    /// Number of `F_p` message symbols, `n1 - 2t`.
    pub fn message_length(&self) -> usize {
        self.n1 - 2 * self.t
    }

    fn low_blocks(&self) -> usize {
        self.n1.div_ceil(2)
    }

    fn expand(&self, weights: &[usize]) -> BitString {
        let b = self.block_length();
        let mut out = Vec::with_capacity(self.length());
        for &w in weights {
            out.extend(std::iter::repeat_n(1u8, w));
            out.extend(std::iter::repeat_n(0u8, b - w));
        }
        BitString::from_bits(out).expect("binary")
    }
}

/// Encodes `n1 - 2t` symbols of `F_p` (reduced mod `p`).
pub fn c2_encode(msg: &[u64], params: &C2Params) -> Result<BitString, ReconError> {
    if msg.len() != params.message_length() {
        return Err(ReconError::MessageLength {
            expected: params.message_length(),
            got: msg.len(),
        });
    }
    let p = params.p;
    let reduced: Vec<u64> = msg.iter().map(|&m| m % p).collect();
    let s = params.grs.encode(&reduced)?;
    let mut prev = 0u64;
    let weights: Vec<usize> = s
        .iter()
        .enumerate()
        .map(|(j, &sj)| {
            let c = ((sj + p - prev) % p) as usize;
            prev = sj;
            if j < params.low_blocks() {
                c
            } else {
                p as usize + c
            }
        })
        .collect();
    Ok(params.expand(&weights))
}

/// Recovers the codeword and its `F_p` message, reading only the groups at
/// block boundaries.
pub fn c2_decode(y: &CompositionMultiset, params: &C2Params) -> Result<Reconstruction<Vec<u64>>, ReconError> {
    check_ambient(y, params.length())?;
    let view = normalize(y, 1);
    let (p, n1, b) = (params.p, params.n1, params.block_length());
    let boundaries: Vec<usize> = (1..=n1).map(|j| j * b).collect();
    let lower: Vec<u64> = boundaries.iter().map(|&size| view.lower(size) as u64 % p).collect();
    let erasures: Vec<usize> = (0..n1).filter(|&j| view.is_erased(boundaries[j])).collect();
    let s = params.grs.decode(&lower, None, &erasures)?.word;

    let at = |j: usize| if j == 0 { 0 } else { s[j - 1] };
    let mut weights = vec![0usize; n1];
    for j in 1..=params.low_blocks() {
        weights[j - 1] = ((at(j) + p - at(j - 1)) % p) as usize;
    }
    // suffix sums s̄_j = s_{n1} - s_{n1-j}
    let bar = |j: usize| (at(n1) + p - at(n1 - j)) % p;
    for j in 1..=n1 / 2 {
        weights[n1 - j] = p as usize + ((bar(j) + p - bar(j - 1)) % p) as usize;
    }
    let codeword = params.expand(&weights);
    verify(&codeword, y, params.t)?;
    Ok(Reconstruction {
        codeword,
        message: s[..params.message_length()].to_vec(),
        consumed: boundaries,
    })
}
