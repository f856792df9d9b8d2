//! Exact arithmetic in prime fields `F_p` and binary extension fields `GF(2^m)`.
//!
//! Both field types implement [`Field`] over raw `u64` representatives, which
//! is what the codecs use internally. [`FieldElement`] is a self-describing
//! value that carries its field, for callers that want mixed-field checking.

use std::fmt;

use thiserror::Error;

/// Largest supported prime modulus (exclusive).
pub const MAX_PRIME: u64 = 1 << 31;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

/// Canonical primitive polynomials for `GF(2^m)`, indexed by `m`, bit-encoded
/// with bit `i` the coefficient of `x^i`.
const PRIMITIVE_POLYS: [u32; 17] = [
    0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} outside the supported range [2, 2^31)")]
    ModulusOutOfRange(u64),
    #[error("extension degree {0} outside the supported range [2, 16]")]
    DegreeOutOfRange(u32),
    #[error("polynomial {poly:#x} is not primitive of degree {m}")]
    NotPrimitive { m: u32, poly: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("value {value} is not an element of {field}")]
    OutOfRange { value: u64, field: FieldKind },
}

/// Arithmetic over a finite field on canonical `u64` representatives.
pub trait Field {
    /// Number of elements.
    fn order(&self) -> u64;
    fn add(&self, a: u64, b: u64) -> u64;
    fn sub(&self, a: u64, b: u64) -> u64;
    fn mul(&self, a: u64, b: u64) -> u64;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: u64) -> Option<u64>;

    fn neg(&self, a: u64) -> u64 {
        self.sub(0, a)
    }

    fn div(&self, a: u64, b: u64) -> Option<u64> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(2..MAX_PRIME).contains(&p) {
            return Err(FieldError::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    pub fn reduce(&self, v: u64) -> u64 {
        v % self.p
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn reduce_signed(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn element(&self, v: u64) -> FieldElement {
        FieldElement {
            value: self.reduce(v),
            field: FieldKind::Prime { p: self.p },
        }
    }
}

impl Field for PrimeField {
    fn order(&self) -> u64 {
        self.p
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    fn inv(&self, a: u64) -> Option<u64> {
        if a % self.p == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce_signed(t0))
    }
}

/// Log/antilog tables of `GF(2^m)` with respect to the primitive element `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogTables {
    /// `log[v]` is the discrete log of nonzero `v`; `log[0]` is unused.
    pub log: Vec<u32>,
    /// `antilog[i] = α^i` for `i` in `0..2^m - 1`.
    pub antilog: Vec<u32>,
}

/// Builds the discrete log tables of `GF(2^m)` defined by `poly`.
///
/// Fails if the powers of `x` modulo `poly` do not run through every nonzero
/// element, i.e. if `poly` is not primitive.
pub fn discrete_log_table(m: u32, poly: u32) -> Result<LogTables, FieldError> {
    if !(1..=MAX_DEGREE).contains(&m) {
        return Err(FieldError::DegreeOutOfRange(m));
    }
    if poly >> m != 1 {
        return Err(FieldError::NotPrimitive { m, poly });
    }
    let size = 1usize << m;
    let cycle = size - 1;
    let mut log = vec![u32::MAX; size];
    let mut antilog = Vec::with_capacity(cycle);
    let mut x: u32 = 1;
    for i in 0..cycle {
        if x == 0 || log[x as usize] != u32::MAX {
            return Err(FieldError::NotPrimitive { m, poly });
        }
        log[x as usize] = i as u32;
        antilog.push(x);
        x <<= 1;
        if x & (1 << m) != 0 {
            x ^= poly;
        }
    }
    if x != 1 {
        return Err(FieldError::NotPrimitive { m, poly });
    }
    log[0] = 0;
    Ok(LogTables { log, antilog })
}

/// The binary extension field `GF(2^m)`, elements bit-packed in polynomial basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryExtField {
    m: u32,
    poly: u32,
    tables: LogTables,
}

impl BinaryExtField {
    /// Field of degree `m` using the built-in primitive polynomial.
    pub fn new(m: u32) -> Result<Self, FieldError> {
        if !(2..=MAX_DEGREE).contains(&m) {
            return Err(FieldError::DegreeOutOfRange(m));
        }
        Self::with_poly(m, PRIMITIVE_POLYS[m as usize])
    }

    pub fn with_poly(m: u32, poly: u32) -> Result<Self, FieldError> {
        if !(2..=MAX_DEGREE).contains(&m) {
            return Err(FieldError::DegreeOutOfRange(m));
        }
        let tables = discrete_log_table(m, poly)?;
        Ok(Self { m, poly, tables })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn primitive_poly(&self) -> u32 {
        self.poly
    }

    /// Order of the multiplicative group, `2^m - 1`.
    pub fn cycle_len(&self) -> u64 {
        (1u64 << self.m) - 1
    }

    pub fn tables(&self) -> &LogTables {
        &self.tables
    }

    /// `α^e` for any exponent.
    pub fn alpha_pow(&self, e: u64) -> u64 {
        self.tables.antilog[(e % self.cycle_len()) as usize] as u64
    }

    pub fn log(&self, v: u64) -> Option<u64> {
        (v != 0).then(|| self.tables.log[v as usize] as u64)
    }

    pub fn element(&self, v: u64) -> Result<FieldElement, FieldError> {
        let field = FieldKind::Binary {
            m: self.m,
            poly: self.poly,
        };
        if v >> self.m != 0 {
            return Err(FieldError::OutOfRange { value: v, field });
        }
        Ok(FieldElement { value: v, field })
    }
}

impl Field for BinaryExtField {
    fn order(&self) -> u64 {
        1 << self.m
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let la = self.tables.log[a as usize] as u64;
        let lb = self.tables.log[b as usize] as u64;
        self.alpha_pow(la + lb)
    }

    fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let la = self.tables.log[a as usize] as u64;
        Some(self.alpha_pow(self.cycle_len() - la))
    }
}

/// Identifies the field an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime { p: u64 },
    Binary { m: u32, poly: u32 },
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Prime { p } => write!(f, "F_{p}"),
            FieldKind::Binary { m, poly } => write!(f, "GF(2^{m}) mod {poly:#x}"),
        }
    }
}

/// Binary operations supported by [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A field element tagged with its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: FieldKind,
}

// Carry-less product reduced modulo `poly`; no tables needed.
fn gf2m_mul(mut a: u64, mut b: u64, m: u32, poly: u32) -> u64 {
    let mut acc = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & (1 << m) != 0 {
            a ^= poly as u64;
        }
    }
    acc
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    fn with(&self, value: u64) -> Self {
        Self {
            value,
            field: self.field,
        }
    }

    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        match self.field {
            FieldKind::Prime { p } => (a * b) % p,
            FieldKind::Binary { m, poly } => gf2m_mul(a, b, m, poly),
        }
    }

    fn order(&self) -> u64 {
        match self.field {
            FieldKind::Prime { p } => p,
            FieldKind::Binary { m, .. } => 1 << m,
        }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = 1;
        let mut b = self.value;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, b);
            }
            b = self.mul_raw(b, b);
            exp >>= 1;
        }
        self.with(acc)
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.value == 0 {
            return Err(FieldError::DivisionByZero);
        }
        // a^(q-2) in any field of order q
        Ok(self.pow(self.order() - 2))
    }
}

/// Applies `op` to two elements of the same field.
pub fn field_arith(a: FieldElement, b: FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
    if a.field != b.field {
        return Err(FieldError::MixedFields);
    }
    let value = match (op, a.field) {
        (ArithOp::Add, FieldKind::Prime { p }) => (a.value + b.value) % p,
        (ArithOp::Sub, FieldKind::Prime { p }) => (a.value + p - b.value) % p,
        (ArithOp::Add | ArithOp::Sub, FieldKind::Binary { .. }) => a.value ^ b.value,
        (ArithOp::Mul, _) => a.mul_raw(a.value, b.value),
        (ArithOp::Div, _) => a.mul_raw(a.value, b.inv()?.value),
    };
    Ok(a.with(value))
}
