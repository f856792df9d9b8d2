//! Systematic construction `(0^{n2}, w, rev(p))`: `w` is suffix-dominant,
//! the GRS syndromes of its prefix weights ride in a BCH codeword `v`, and
//! `p` is chosen so that the parities of the first `n2` size groups spell `v`.

use crate::bch::{BchCode, BinaryCode};
use crate::bits::BitString;
use crate::compositions::{normalize, CompositionMultiset};
use crate::dominance::{DominantCode, Realization};
use crate::grs::{GrsParams, Syndromes};

use super::{check_ambient, prefix_differences, verify, ReconError, Reconstruction};

/// One checked parameter inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: &'static str,
    pub detail: String,
    pub holds: bool,
    /// Violations of a required constraint reject the parameters; others
    /// are reported as warnings.
    pub required: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C3Params {
    n1: usize,
    n2: usize,
    t: usize,
    p: u64,
    dominant: DominantCode,
    bch: BchCode,
    grs: GrsParams,
    constraints: Vec<Constraint>,
}

fn ceil_log2(p: u64) -> usize {
    (64 - (p - 1).leading_zeros()) as usize
}

/// Evaluates every constraint on `(n1, n2, t, p)`; `n2 + 1 = 2^m`.
pub fn c3_constraints(n1: usize, n2: usize, t: usize, p: u64) -> Vec<Constraint> {
    let m = (n2 + 1).trailing_zeros() as usize;
    let width = ceil_log2(p.max(2));
    let mut out = vec![Constraint {
        name: "length",
        detail: format!("n2 + 1 = {} is a power of 2 with 2 <= m <= 16", n2 + 1),
        holds: (n2 + 1).is_power_of_two() && (2..=16).contains(&m),
        required: true,
    }];
    out.push(Constraint {
        name: "prime",
        detail: format!("p = {p} >= n1 + 1 = {}", n1 + 1),
        holds: p as u128 > n1 as u128,
        required: true,
    });
    out.push(Constraint {
        name: "budget",
        detail: format!("1 <= t = {t} and 2t = {} < n1 = {n1}", 2 * t),
        holds: t >= 1 && 2 * t < n1,
        required: true,
    });
    let lhs = n2 as i64 - (t * m) as i64;
    out.push(Constraint {
        name: "payload",
        detail: format!("n2 - t*log2(n2+1) = {lhs} > 2t*ceil(log2 p) = {}", 2 * t * width),
        holds: lhs > (2 * t * width) as i64,
        required: true,
    });
    let bound = (1u64 << m.div_ceil(2)) + 1;
    out.push(Constraint {
        name: "bch",
        detail: format!("2t - 1 = {} <= 2^ceil(m/2) + 1 = {bound}", (2 * t).saturating_sub(1)),
        holds: ((2 * t).saturating_sub(1) as u64) <= bound,
        required: true,
    });
    let log_n1 = (n1 as f64).log2();
    let window = 4.0 * (log_n1 + 1.0).powi(2);
    out.push(Constraint {
        name: "window",
        detail: format!("4(log2 n1 + 1)^2 = {window:.1} < n2 = {n2} < n1 = {n1}"),
        holds: window < n2 as f64 && n2 < n1,
        required: false,
    });
    out.push(Constraint {
        name: "sqrt",
        detail: format!("2t = {} < sqrt(n2) = {:.2}", 2 * t, (n2 as f64).sqrt()),
        holds: ((2 * t) as f64) < (n2 as f64).sqrt(),
        required: false,
    });
    out
}

impl C3Params {
    pub fn new(n1: usize, n2: usize, t: usize, p: u64, realization: Realization) -> Result<Self, ReconError> {
        let constraints = c3_constraints(n1, n2, t, p);
        if let Some(c) = constraints.iter().find(|c| c.required && !c.holds) {
            return Err(ReconError::InvalidParams(format!("{} violated: {}", c.name, c.detail)));
        }
        let m = (n2 + 1).trailing_zeros();
        let bch = BchCode::build(m, t)?;
        let grs = GrsParams::standard(p, n1, 2 * t)?;
        let dominant = DominantCode::new(n1, realization)?;
        Ok(Self {
            n1,
            n2,
            t,
            p,
            dominant,
            bch,
            grs,
            constraints,
        })
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Warnings: constraints that fail without rejecting the parameters.
    pub fn warnings(&self) -> Vec<&Constraint> {
        self.constraints.iter().filter(|c| !c.required && !c.holds).collect()
    }

    /// `n1 + 2 n2`.
    pub fn length(&self) -> usize {
        self.n1 + 2 * self.n2
    }

    pub fn budget(&self) -> usize {
        self.t
    }

    pub fn dominant(&self) -> &DominantCode {
        &self.dominant
    }

    pub fn bch(&self) -> &BchCode {
        &self.bch
    }

    pub fn grs(&self) -> &GrsParams {
        &self.grs
    }

    pub fn message_length(&self) -> usize {
        self.dominant.message_length()
    }

    /// Bits per syndrome symbol, `ceil(log2 p)`.
    pub fn symbol_width(&self) -> usize {
        ceil_log2(self.p)
    }

    /// Length of `u`, `2t ceil(log2 p)`.
    pub fn payload_length(&self) -> usize {
        2 * self.t * self.symbol_width()
    }

    pub fn dims(&self) -> (usize, usize, usize, u64) {
        (self.n1, self.n2, self.t, self.p)
    }
}

/// `p_j = (v_j + p_1 + ... + p_{j-1}) mod 2`.
pub fn parity_string(v: &BitString) -> BitString {
    let mut acc = 0u8;
    let out = v
        .as_slice()
        .iter()
        .map(|&vj| {
            let pj = (vj + acc) % 2;
            acc = (acc + pj) % 2;
            pj
        })
        .collect();
    BitString::from_bits(out).expect("binary")
}

fn pack(syn: &Syndromes, width: usize, total: usize) -> BitString {
    let mut out = Vec::with_capacity(total);
    for &s in &syn.0 {
        out.extend(BitString::from_uint(s as u128, width).expect("symbol fits").into_vec());
    }
    out.resize(total, 0);
    BitString::from_bits(out).expect("binary")
}

fn unpack(u: &BitString, params: &C3Params) -> Result<Syndromes, ReconError> {
    let width = params.symbol_width();
    let used = params.payload_length();
    if u.as_slice()[used..].iter().any(|&b| b != 0) {
        return Err(ReconError::BadPadding);
    }
    (0..2 * params.t)
        .map(|i| {
            let value = u.slice(i * width..(i + 1) * width).to_uint().expect("narrow") as u64;
            if value >= params.p {
                return Err(ReconError::SymbolOutOfRange {
                    index: i,
                    value,
                    p: params.p,
                });
            }
            Ok(value)
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Syndromes)
}

fn prefix_sums(w: &BitString) -> Vec<u64> {
    w.prefix_weights()[1..].iter().map(|&x| x as u64).collect()
}

pub fn c3_encode(msg: &BitString, params: &C3Params) -> Result<BitString, ReconError> {
    let w = params.dominant.encode(msg)?;
    let hx = params.grs.syndromes(&prefix_sums(&w))?;
    let u = pack(&hx, params.symbol_width(), params.bch.dimension());
    let v = params.bch.encode(&u)?;
    let p = parity_string(&v);
    Ok(BitString::concat(&[&BitString::zeros(params.n2), &w, &p.reversed()]))
}

pub fn c3_decode(y: &CompositionMultiset, params: &C3Params) -> Result<Reconstruction<BitString>, ReconError> {
    let (n1, n2) = (params.n1, params.n2);
    check_ambient(y, params.length())?;
    let view = normalize(y, 1);
    let parities = (1..=n2).map(|j| ((view.lower(j) + view.upper(j)) % 2) as u8).collect();
    let (v, u) = params.bch.decode(&BitString::from_bits(parities).expect("binary"))?;
    let hx = unpack(&u, params)?;
    let p = parity_string(&v);

    let lower: Vec<u64> = (1..=n1).map(|j| view.lower(n2 + j) as u64 % params.p).collect();
    let erasures: Vec<usize> = (0..n1).filter(|&j| view.is_erased(n2 + j + 1)).collect();
    let x = params.grs.decode(&lower, Some(&hx), &erasures)?.word;
    let w = prefix_differences(params.p, &x)?;
    let message = params.dominant.decode(&w)?;
    let codeword = BitString::concat(&[&BitString::zeros(n2), &w, &p.reversed()]);
    verify(&codeword, y, params.t)?;
    Ok(Reconstruction {
        codeword,
        message,
        consumed: (1..=n2 + n1).collect(),
    })
}
