//! Polynomial helpers and the Berlekamp-Massey recursion shared by the GRS
//! and BCH decoders. Polynomials are coefficient vectors, lowest degree first.

use crate::galois::Field;

pub(crate) fn eval<F: Field>(field: &F, poly: &[u64], x: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, x), c))
}

pub(crate) fn mul<F: Field>(field: &F, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(ai, bj));
        }
    }
    out
}

/// `a * b mod x^len`.
pub(crate) fn mul_trunc<F: Field>(field: &F, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
    let mut out = mul(field, a, b);
    out.resize(len, 0);
    out
}

/// Formal derivative.
pub(crate) fn derivative<F: Field>(field: &F, poly: &[u64]) -> Vec<u64> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| {
            // c added to itself i times
            (0..i).fold(0, |acc, _| field.add(acc, c))
        })
        .collect()
}

pub(crate) fn degree(poly: &[u64]) -> Option<usize> {
    poly.iter().rposition(|&c| c != 0)
}

/// Shortest linear feedback shift register generating `seq`.
///
/// Returns the connection polynomial `C` (with `C[0] = 1`, trimmed to
/// `len + 1` coefficients) and the register length.
pub(crate) fn berlekamp_massey<F: Field>(field: &F, seq: &[u64]) -> (Vec<u64>, usize) {
    let mut c = vec![1u64];
    let mut b = vec![1u64];
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut last_disc = 1u64;

    for n in 0..seq.len() {
        let mut d = seq[n];
        for i in 1..=len.min(c.len() - 1) {
            d = field.add(d, field.mul(c[i], seq[n - i]));
        }
        if d == 0 {
            shift += 1;
            continue;
        }
        let coef = field.div(d, last_disc).expect("nonzero discrepancy");
        let prev = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            c[i + shift] = field.sub(c[i + shift], field.mul(coef, bi));
        }
        if 2 * len <= n {
            len = n + 1 - len;
            b = prev;
            last_disc = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.resize(len + 1, 0);
    (c, len)
}
