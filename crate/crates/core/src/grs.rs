//! Generalized Reed-Solomon codes over a prime field.
//!
//! The code is given by its parity-check matrix `H[l][i] = ω_i α_i^l` for
//! `l = 0..r`. Decoding handles errors, erasures, and a known nonzero target
//! syndrome (decoding into a coset of the code), all through the same
//! Berlekamp-Massey / Chien / Forney pipeline.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::galois::{Field, PrimeField};
use crate::locator;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrsError {
    #[error("invalid GRS parameters: {0}")]
    InvalidParams(String),
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("symbol {value} at position {position} is not reduced mod {p}")]
    NotInField { position: usize, value: u64, p: u64 },
    #[error("erasure position {0} out of range")]
    BadErasure(usize),
    #[error("{erasures} erasures exceed the {r} available parity checks")]
    TooManyErasures { erasures: usize, r: usize },
    #[error("error locator degree {degree} exceeds the decoding radius")]
    RadiusExceeded { degree: usize },
    #[error("error locator has degree {expected} but only {found} roots among the evaluation points")]
    RootCountMismatch { expected: usize, found: usize },
    #[error("error evaluator failed at position {0}")]
    ZeroDerivative(usize),
    #[error("decoded word does not satisfy the target syndromes")]
    SyndromeCheckFailed,
}

/// Parameters of a GRS code of length `n` with `r` parity checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrsParams {
    field: PrimeField,
    alphas: Vec<u64>,
    omegas: Vec<u64>,
    r: usize,
}

/// The vector `S_0..S_{r-1}` of weighted power sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syndromes(pub Vec<u64>);

impl Syndromes {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&s| s == 0)
    }
}

/// Output of [`GrsParams::decode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrsDecoded {
    pub word: Vec<u64>,
    /// Positions whose value changed, including changed erasures.
    pub corrected: Vec<usize>,
}

impl GrsParams {
    /// Evaluation points must be distinct and nonzero, multipliers nonzero.
    pub fn new(field: PrimeField, alphas: Vec<u64>, omegas: Vec<u64>, r: usize) -> Result<Self, GrsError> {
        let n = alphas.len();
        if omegas.len() != n {
            return Err(GrsError::InvalidParams(format!(
                "{n} evaluation points but {} column multipliers",
                omegas.len()
            )));
        }
        if r >= n {
            return Err(GrsError::InvalidParams(format!("r = {r} must be below n = {n}")));
        }
        let p = field.modulus();
        let mut seen = BTreeSet::new();
        for &a in &alphas {
            if a == 0 || a >= p {
                return Err(GrsError::InvalidParams(format!("evaluation point {a} not in F_{p}^*")));
            }
            if !seen.insert(a) {
                return Err(GrsError::InvalidParams(format!("evaluation point {a} repeated")));
            }
        }
        if let Some(&w) = omegas.iter().find(|&&w| w == 0 || w >= p) {
            return Err(GrsError::InvalidParams(format!("column multiplier {w} not in F_{p}^*")));
        }
        Ok(Self { field, alphas, omegas, r })
    }

    /// Evaluation points `1..=n`, all multipliers one.
    pub fn standard(p: u64, n: usize, r: usize) -> Result<Self, GrsError> {
        let field = PrimeField::new(p).map_err(|e| GrsError::InvalidParams(e.to_string()))?;
        if (n as u64) >= p {
            return Err(GrsError::InvalidParams(format!("need p >= n + 1, got p = {p}, n = {n}")));
        }
        Self::new(field, (1..=n as u64).collect(), vec![1; n], r)
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn redundancy(&self) -> usize {
        self.r
    }

    pub fn dimension(&self) -> usize {
        self.len() - self.r
    }

    pub fn alphas(&self) -> &[u64] {
        &self.alphas
    }

    pub fn omegas(&self) -> &[u64] {
        &self.omegas
    }

    fn check_word(&self, y: &[u64]) -> Result<(), GrsError> {
        if y.len() != self.len() {
            return Err(GrsError::DimensionMismatch {
                expected: self.len(),
                got: y.len(),
            });
        }
        let p = self.field.modulus();
        if let Some(position) = y.iter().position(|&v| v >= p) {
            return Err(GrsError::NotInField {
                position,
                value: y[position],
                p,
            });
        }
        Ok(())
    }

    /// `S_l = Σ_i ω_i α_i^l y_i` for `l = 0..r`.
    pub fn syndromes(&self, y: &[u64]) -> Result<Syndromes, GrsError> {
        self.check_word(y)?;
        let f = &self.field;
        let mut s = vec![0; self.r];
        for ((&a, &w), &v) in self.alphas.iter().zip(&self.omegas).zip(y) {
            let mut term = f.mul(w, v);
            for sl in s.iter_mut() {
                *sl = f.add(*sl, term);
                term = f.mul(term, a);
            }
        }
        Ok(Syndromes(s))
    }

    /// Systematic encoding: `msg` occupies the first `n - r` positions.
    pub fn encode(&self, msg: &[u64]) -> Result<Vec<u64>, GrsError> {
        let k = self.dimension();
        if msg.len() != k {
            return Err(GrsError::DimensionMismatch {
                expected: k,
                got: msg.len(),
            });
        }
        let f = &self.field;
        let mut word = msg.to_vec();
        word.resize(self.len(), 0);
        self.check_word(&word)?;
        let rhs: Vec<u64> = self.syndromes(&word)?.0.iter().map(|&s| f.neg(s)).collect();
        // Columns of the parity positions: ω_i α_i^l.
        let matrix: Vec<Vec<u64>> = (0..self.r)
            .map(|l| {
                (k..self.len())
                    .map(|i| f.mul(self.omegas[i], f.pow(self.alphas[i], l as u64)))
                    .collect()
            })
            .collect();
        let parity = solve(f, matrix, rhs).expect("scaled Vandermonde system is nonsingular");
        word[k..].copy_from_slice(&parity);
        Ok(word)
    }

    /// Decodes `y` to the unique word within the decoding radius whose
    /// syndromes equal `target` (zero when `None`), treating `erasures` as
    /// known-unreliable positions. Requires `2·errors + erasures <= r`.
    pub fn decode(
        &self,
        y: &[u64],
        target: Option<&Syndromes>,
        erasures: &[usize],
    ) -> Result<GrsDecoded, GrsError> {
        self.check_word(y)?;
        let f = &self.field;
        let r = self.r;
        let mut s = self.syndromes(y)?.0;
        if let Some(t) = target {
            if t.0.len() != r {
                return Err(GrsError::DimensionMismatch {
                    expected: r,
                    got: t.0.len(),
                });
            }
            for (sl, &tl) in s.iter_mut().zip(&t.0) {
                *sl = f.sub(*sl, tl);
            }
        }
        let erased: BTreeSet<usize> = erasures.iter().copied().collect();
        if let Some(&bad) = erased.iter().find(|&&i| i >= self.len()) {
            return Err(GrsError::BadErasure(bad));
        }
        let nerased = erased.len();
        if nerased > r {
            return Err(GrsError::TooManyErasures { erasures: nerased, r });
        }
        if s.iter().all(|&v| v == 0) {
            return Ok(GrsDecoded {
                word: y.to_vec(),
                corrected: Vec::new(),
            });
        }

        // erasure locator Γ(x) = Π (1 - α_i x)
        let gamma = erased.iter().fold(vec![1u64], |acc, &i| {
            locator::mul(f, &acc, &[1, f.neg(self.alphas[i])])
        });
        // Forney syndromes: coefficients f..r of S(x)Γ(x) only see the errors.
        let forney = locator::mul_trunc(f, &s, &gamma, r);
        let (sigma, nerr) = locator::berlekamp_massey(f, &forney[nerased..]);
        if 2 * nerr + nerased > r {
            return Err(GrsError::RadiusExceeded { degree: nerr + nerased });
        }
        let lambda = locator::mul(f, &sigma, &gamma);
        let deg = locator::degree(&lambda).unwrap_or(0);

        // Chien-style search over the evaluation points.
        let roots: Vec<usize> = (0..self.len())
            .filter(|&i| {
                let x_inv = f.inv(self.alphas[i]).expect("nonzero point");
                locator::eval(f, &lambda, x_inv) == 0
            })
            .collect();
        if roots.len() != deg {
            return Err(GrsError::RootCountMismatch {
                expected: deg,
                found: roots.len(),
            });
        }

        // Forney: Y = -X Ω(X^-1) / Λ'(X^-1), error value e_i = Y / ω_i.
        let omega = locator::mul_trunc(f, &s, &lambda, r);
        let dlambda = locator::derivative(f, &lambda);
        let mut word = y.to_vec();
        let mut corrected = Vec::new();
        for &i in &roots {
            let x = self.alphas[i];
            let x_inv = f.inv(x).expect("nonzero point");
            let den = locator::eval(f, &dlambda, x_inv);
            let num = f.neg(f.mul(x, locator::eval(f, &omega, x_inv)));
            let magnitude = f.div(num, den).ok_or(GrsError::ZeroDerivative(i))?;
            let e = f.div(magnitude, self.omegas[i]).expect("nonzero multiplier");
            if e != 0 {
                word[i] = f.sub(word[i], e);
                corrected.push(i);
            }
        }

        let want = target.cloned().unwrap_or_else(|| Syndromes(vec![0; r]));
        if self.syndromes(&word)? != want {
            return Err(GrsError::SyndromeCheckFailed);
        }
        let errors = corrected.iter().filter(|i| !erased.contains(i)).count();
        if 2 * errors + nerased > r {
            return Err(GrsError::RadiusExceeded { degree: errors + nerased });
        }
        Ok(GrsDecoded { word, corrected })
    }
}

/// Gaussian elimination over `F_p`; `None` if singular.
fn solve(f: &PrimeField, mut a: Vec<Vec<u64>>, mut b: Vec<u64>) -> Option<Vec<u64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&row| a[row][col] != 0)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = f.inv(a[col][col])?;
        for v in a[col].iter_mut() {
            *v = f.mul(*v, inv);
        }
        b[col] = f.mul(b[col], inv);
        for row in 0..n {
            if row != col && a[row][col] != 0 {
                let factor = a[row][col];
                for c in 0..n {
                    a[row][c] = f.sub(a[row][c], f.mul(factor, a[col][c]));
                }
                b[row] = f.sub(b[row], f.mul(factor, b[col]));
            }
        }
    }
    Some(b)
}
