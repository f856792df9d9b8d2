//! Binary strings whose prefix sums form a GRS codeword over `F_p`.
//!
//! There is no efficient encoder; the codebook is enumerated for small `n`.

use crate::bits::BitString;
use crate::compositions::{normalize, CompositionMultiset};
use crate::dominance::is_suffix_dominant;
use crate::galois::PrimeField;
use crate::grs::GrsParams;

use super::{check_ambient, prefix_differences, verify, ReconError, Reconstruction};

/// Largest length for which [`c1_codebook`] enumerates.
pub const MAX_CODEBOOK_LEN: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C1Params {
    grs: GrsParams,
    t: usize,
    t1: usize,
}

impl C1Params {
    /// Budget `t`, `r = 2t` parity checks, evaluation points `1..=n`.
    pub fn new(p: u64, n: usize, t: usize) -> Result<Self, ReconError> {
        Self::with_erasures(p, n, t, 0)
    }

    /// Budget of `t` errors of which at most `t - t1` keep their group
    /// cardinality; uses `r = 2t - t1` parity checks.
    pub fn with_erasures(p: u64, n: usize, t: usize, t1: usize) -> Result<Self, ReconError> {
        if t1 > t {
            return Err(ReconError::InvalidParams(format!("t1 = {t1} exceeds t = {t}")));
        }
        if 2 * t >= n {
            return Err(ReconError::InvalidParams(format!("need t < n/2, got t = {t}, n = {n}")));
        }
        if (p as u128) < n as u128 + 1 {
            return Err(ReconError::InvalidParams(format!("need p >= n + 1, got p = {p}, n = {n}")));
        }
        let grs = GrsParams::standard(p, n, 2 * t - t1)?;
        Ok(Self { grs, t, t1 })
    }

    /// Uses caller-supplied GRS parameters of redundancy `2t - t1`.
    pub fn with_grs(grs: GrsParams, t: usize, t1: usize) -> Result<Self, ReconError> {
        if t1 > t || grs.redundancy() != 2 * t - t1 {
            return Err(ReconError::InvalidParams(format!(
                "redundancy {} does not equal 2t - t1 = {}",
                grs.redundancy(),
                (2 * t).saturating_sub(t1)
            )));
        }
        if grs.field().modulus() < grs.len() as u64 + 1 {
            return Err(ReconError::InvalidParams("need p >= n + 1".into()));
        }
        Ok(Self { grs, t, t1 })
    }

    pub fn grs(&self) -> &GrsParams {
        &self.grs
    }

    pub fn length(&self) -> usize {
        self.grs.len()
    }

    pub fn budget(&self) -> usize {
        self.t
    }

    pub fn erasure_budget(&self) -> usize {
        self.t1
    }

    fn field(&self) -> &PrimeField {
        self.grs.field()
    }
}

/// Whether the prefix sums of `c` satisfy every parity check.
pub fn c1_membership(c: &BitString, params: &C1Params) -> bool {
    if c.len() != params.length() {
        return false;
    }
    let sums: Vec<u64> = c.prefix_weights()[1..].iter().map(|&s| s as u64).collect();
    let sums: Vec<u64> = sums.into_iter().map(|s| params.field().reduce(s)).collect();
    params.grs.syndromes(&sums).expect("length checked").is_zero()
}

/// All suffix-dominant members, in lexicographic order.
pub fn c1_codebook(params: &C1Params) -> Result<Vec<BitString>, ReconError> {
    let n = params.length();
    if n > MAX_CODEBOOK_LEN {
        return Err(ReconError::InvalidParams(format!(
            "codebook enumeration limited to n <= {MAX_CODEBOOK_LEN}, got {n}"
        )));
    }
    Ok(BitString::all(n)
        .filter(|c| is_suffix_dominant(c) && c1_membership(c, params))
        .collect())
}

/// Recovers a suffix-dominant member from a multiset within the budget.
pub fn c1_decode(y: &CompositionMultiset, params: &C1Params) -> Result<Reconstruction<BitString>, ReconError> {
    let n = params.length();
    check_ambient(y, n)?;
    let view = normalize(y, 1);
    let f = params.field();
    let lower: Vec<u64> = (1..=n).map(|j| f.reduce(view.lower(j) as u64)).collect();
    let erasures: Vec<usize> = view.erased_sizes().into_iter().map(|j| j - 1).collect();
    let decoded = params.grs.decode(&lower, None, &erasures)?;
    let c = prefix_differences(f.modulus(), &decoded.word)?;
    if !c1_membership(&c, params) {
        return Err(ReconError::NotMember);
    }
    if !is_suffix_dominant(&c) {
        return Err(ReconError::Dominant(crate::dominance::DominantError::NotDominant));
    }
    verify(&c, y, params.t)?;
    Ok(Reconstruction {
        message: c.clone(),
        codeword: c,
        consumed: (1..=n).collect(),
    })
}
