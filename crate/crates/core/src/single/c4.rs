//! `(0^{n2-n1}, w, p)` where `(w, p)` is a systematic codeword of a binary
//! code correcting `2t` errors and `w` is suffix-dominant.

use std::fmt;
use std::sync::Arc;

use crate::bch::{BchCode, BinaryCode};
use crate::bits::BitString;
use crate::compositions::{normalize, CompositionMultiset};
use crate::dominance::{DominantCode, Realization};

use super::{check_ambient, mass_diff_string, verify, ReconError, Reconstruction};

#[derive(Clone)]
pub struct C4Params {
    t: usize,
    dominant: DominantCode,
    good: Arc<dyn BinaryCode + Send + Sync>,
}

impl fmt::Debug for C4Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("C4Params")
            .field("n1", &self.dominant.length())
            .field("n2", &self.good.length())
            .field("t", &self.t)
            .field("radius", &self.good.radius())
            .finish()
    }
}

impl C4Params {
    /// `good` must have dimension `dominant.length()` and radius `>= 2t`.
    pub fn new(dominant: DominantCode, good: Arc<dyn BinaryCode + Send + Sync>, t: usize) -> Result<Self, ReconError> {
        let (n1, n2) = (dominant.length(), good.length());
        if good.dimension() != n1 {
            return Err(ReconError::InvalidParams(format!(
                "code dimension {} differs from n1 = {n1}",
                good.dimension()
            )));
        }
        if n1 >= n2 {
            return Err(ReconError::InvalidParams(format!("need n1 < n2, got {n1} and {n2}")));
        }
        if 4 * t >= n2 {
            return Err(ReconError::InvalidParams(format!("need t < n2/4, got t = {t}, n2 = {n2}")));
        }
        if good.radius() < 2 * t {
            return Err(ReconError::InvalidParams(format!(
                "code radius {} below 2t = {}",
                good.radius(),
                2 * t
            )));
        }
        Ok(Self { t, dominant, good })
    }

    /// BCH code of length `2^m - 1` correcting `2t` errors, with the
    /// dominant code sized to its dimension.
    pub fn with_bch(m: u32, t: usize, realization: Realization) -> Result<Self, ReconError> {
        let code = BchCode::build(m, 2 * t)?;
        let dominant = DominantCode::new(code.dimension(), realization)?;
        Self::new(dominant, Arc::new(code), t)
    }

    pub fn inner_length(&self) -> usize {
        self.dominant.length()
    }

    pub fn code_length(&self) -> usize {
        self.good.length()
    }

    /// `2 n2 - n1`.
    pub fn length(&self) -> usize {
        2 * self.code_length() - self.inner_length()
    }

    pub fn budget(&self) -> usize {
        self.t
    }

    pub fn dominant(&self) -> &DominantCode {
        &self.dominant
    }

    pub fn good(&self) -> &dyn BinaryCode {
        self.good.as_ref()
    }

    pub fn message_length(&self) -> usize {
        self.dominant.message_length()
    }

    fn pad(&self) -> usize {
        self.code_length() - self.inner_length()
    }
}

pub fn c4_encode(msg: &BitString, params: &C4Params) -> Result<BitString, ReconError> {
    let w = params.dominant.encode(msg)?;
    let wp = params.good.encode(&w)?;
    Ok(BitString::concat(&[&BitString::zeros(params.pad()), &wp]))
}

pub fn c4_decode(y: &CompositionMultiset, params: &C4Params) -> Result<Reconstruction<BitString>, ReconError> {
    let n = params.length();
    check_ambient(y, n)?;
    let t = mass_diff_string(&normalize(y, 1));
    let pad = params.pad();
    let (wp, w) = params.good.decode(&t.slice(pad..n))?;
    let message = params.dominant.decode(&w)?;
    let codeword = BitString::concat(&[&BitString::zeros(pad), &wp]);
    verify(&codeword, y, params.t)?;
    Ok(Reconstruction {
        codeword,
        message,
        consumed: (pad.max(1)..=n).collect(),
    })
}
