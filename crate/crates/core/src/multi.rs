//! Joint encoding of `h` strings by the interleaving map φ_k and their
//! reconstruction from the union of prefix-suffix compositions.

use thiserror::Error;

use crate::bch::{BinaryCode, CodeError};
use crate::bits::BitString;
use crate::compositions::{distance, multi_compositions, normalize, CompositionError, CompositionMultiset, NormalizedView};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultiError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("expected {expected} strings of length {len}")]
    Shape { expected: usize, len: usize },
    #[error("multiset has length {got}, expected {expected}")]
    AmbientMismatch { expected: usize, got: usize },
    #[error("string {string}: mass difference at position {position} is not a bit")]
    NonBinary { string: usize, position: usize },
    #[error("string {index}: {source}")]
    Decode { index: usize, source: CodeError },
    #[error("decoded strings are at distance {distance} from the input, budget {budget}")]
    Mismatch { distance: usize, budget: usize },
    #[error(transparent)]
    Composition(#[from] CompositionError),
}

/// `h` strings of information length `k`, coded length `k(h+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhiSpec {
    pub h: usize,
    pub k: usize,
}

impl PhiSpec {
    pub fn new(h: usize, k: usize) -> Result<Self, MultiError> {
        if h == 0 || k == 0 {
            return Err(MultiError::InvalidParams(format!("need h >= 1 and k >= 1, got h = {h}, k = {k}")));
        }
        Ok(Self { h, k })
    }

    pub fn length(&self) -> usize {
        self.k * (self.h + 1)
    }
}

/// Intermediate arrays of φ for even `k` (for odd `k`, of φ_{k+1} applied
/// to the duplicated inputs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiTrace {
    /// `w[s]` for `s = 0..2h`: first halves and reversed second halves.
    pub w: Vec<BitString>,
    /// `r[j]`, the indicator string of column `j`.
    pub r: Vec<BitString>,
    /// `u[s][j]`, zeros then `wt(r[j][..=s])` ones, length `h`.
    pub u: Vec<Vec<BitString>>,
    /// `v[s]`, the interleaving of `u[s][*]` with `w[s]`.
    pub v: Vec<BitString>,
}

fn check_inputs(zs: &[BitString], spec: &PhiSpec) -> Result<(), MultiError> {
    if zs.len() != spec.h || zs.iter().any(|z| z.len() != spec.k) {
        return Err(MultiError::Shape {
            expected: spec.h,
            len: spec.k,
        });
    }
    Ok(())
}

fn duplicate_middle(z: &BitString) -> BitString {
    let mid = z.len().div_ceil(2);
    let mut v = z.as_slice().to_vec();
    v.insert(mid, v[mid - 1]);
    BitString::from_bits(v).expect("binary")
}

/// The trace of φ for the given inputs.
pub fn phi_trace(zs: &[BitString], spec: &PhiSpec) -> Result<PhiTrace, MultiError> {
    check_inputs(zs, spec)?;
    if spec.k % 2 == 1 {
        let ext: Vec<_> = zs.iter().map(duplicate_middle).collect();
        return phi_trace(&ext, &PhiSpec::new(spec.h, spec.k + 1)?);
    }
    let h = spec.h;
    let half = spec.k / 2;
    let w: Vec<BitString> = zs
        .iter()
        .flat_map(|z| [z.prefix(half), z.reversed().prefix(half)])
        .collect();
    let mut r = Vec::with_capacity(half);
    let mut u = vec![Vec::with_capacity(half); 2 * h];
    for j in 0..half {
        let mut prev = 0u8;
        let mut ones = 0usize;
        let mut rj = Vec::with_capacity(2 * h);
        for (s, ws) in w.iter().enumerate() {
            let bit = ws.get(j);
            let drop = u8::from(bit < prev);
            rj.push(drop);
            ones += drop as usize;
            prev = bit;
            let mut short = vec![0u8; h - ones];
            short.resize(h, 1);
            u[s].push(BitString::from_bits(short).expect("binary"));
        }
        r.push(BitString::from_bits(rj).expect("binary"));
    }
    let v = (0..2 * h)
        .map(|s| {
            let mut bitsv = Vec::with_capacity(half * (h + 1));
            for j in 0..half {
                bitsv.extend_from_slice(u[s][j].as_slice());
                bitsv.push(w[s].get(j));
            }
            BitString::from_bits(bitsv).expect("binary")
        })
        .collect();
    Ok(PhiTrace { w, r, u, v })
}

/// φ_k: `h` strings of length `k` to `h` strings of length `k(h+1)`.
pub fn phi_encode(zs: &[BitString], spec: &PhiSpec) -> Result<Vec<BitString>, MultiError> {
    let trace = phi_trace(zs, spec)?;
    let h = spec.h;
    let full: Vec<BitString> = (0..h)
        .map(|i| BitString::concat(&[&trace.v[2 * i], &trace.v[2 * i + 1].reversed()]))
        .collect();
    if spec.k % 2 == 0 {
        return Ok(full);
    }
    let gone = odd_deleted(h, spec.k);
    Ok(full
        .into_iter()
        .map(|c| {
            let v = c
                .as_slice()
                .iter()
                .enumerate()
                .filter(|(p, _)| gone.binary_search(p).is_err())
                .map(|(_, &b)| b)
                .collect();
            BitString::from_bits(v).expect("binary")
        })
        .collect())
}

/// Positions of φ_{k+1}'s output removed for odd `k`: the first `ceil(h/2)`
/// bits of the last block of the first half, the last `ceil(h/2)` bits of
/// the first block of the second half, and for even `h` the second copy of
/// the repeated bit.
fn odd_deleted(h: usize, k: usize) -> Vec<usize> {
    let a = k.div_ceil(2) * (h + 1);
    let c = h.div_ceil(2);
    let mut out: Vec<usize> = (a - h - 1..a - h - 1 + c).collect();
    if h % 2 == 0 {
        out.push(a);
    }
    out.extend(a + h + 1 - c..=a + h);
    out
}

/// 0-based positions of the information bits inside each coded string.
pub fn info_positions(h: usize, k: usize) -> Vec<usize> {
    let mid = k.div_ceil(2);
    if k % 2 == 0 {
        return (1..=k)
            .map(|m| if m <= mid { m * (h + 1) - 1 } else { (m - 1) * (h + 1) })
            .collect();
    }
    // positions in φ_{k+1}'s output, shifted past the removed bits
    let gone = odd_deleted(h, k);
    (1..=k)
        .map(|m| {
            let p = if m <= mid { m * (h + 1) - 1 } else { m * (h + 1) };
            p - gone.iter().filter(|&&g| g < p).count()
        })
        .collect()
}

fn sample(c: &BitString, positions: &[usize]) -> BitString {
    BitString::from_bits(positions.iter().map(|&p| c.get(p)).collect()).expect("binary")
}

/// Whether `wt(c_1[l]) <= wt(rev(c_1)[l]) <= ... <= wt(rev(c_h)[l])` for
/// every `l <= ceil(n/2)`.
pub fn dominance_chain_check(cs: &[BitString]) -> bool {
    let Some(first) = cs.first() else {
        return true;
    };
    let n = first.len();
    if cs.iter().any(|c| c.len() != n) {
        return false;
    }
    let weights: Vec<Vec<usize>> = cs.iter().map(BitString::prefix_weights).collect();
    (1..=n.div_ceil(2)).all(|l| {
        let chain = weights.iter().flat_map(|p| [p[l], p[n] - p[n - l]]);
        let mut last = 0;
        chain.into_iter().all(|w| {
            let ok = w >= last;
            last = w;
            ok
        })
    })
}

/// Per-string differences of the chain-ordered masses: `diffs[i][pos]` is
/// the signed difference feeding bit `pos` of string `i`.
fn mass_differences(view: &NormalizedView, h: usize) -> Vec<Vec<i64>> {
    let n = view.len();
    let front = n.div_ceil(2);
    let back = n / 2;
    (0..h)
        .map(|i| {
            let mut d = vec![0i64; n];
            for l in 1..=front {
                d[l - 1] = view.mass(l, 2 * i) as i64 - view.mass(l - 1, 2 * i) as i64;
            }
            for l in 1..=back {
                d[n - l] = view.mass(l, 2 * i + 1) as i64 - view.mass(l - 1, 2 * i + 1) as i64;
            }
            d
        })
        .collect()
}

/// Sizes read when extracting bit `pos` (0-based) of a string of length `n`.
fn sizes_for_position(n: usize, pos: usize) -> [usize; 2] {
    let l = if pos < n.div_ceil(2) { pos + 1 } else { n - pos };
    [l, l - 1]
}

fn consumed_sizes(n: usize, positions: &[usize]) -> Vec<usize> {
    let mut sizes: Vec<usize> = positions
        .iter()
        .flat_map(|&p| sizes_for_position(n, p))
        .filter(|&s| s > 0)
        .collect();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
}

/// The per-string noisy bit strings `t_i` (full length, differences mod 2).
pub fn noisy_strings(view: &NormalizedView) -> Vec<BitString> {
    mass_differences(view, view.multiplicity())
        .into_iter()
        .map(|d| BitString::from_bits(d.into_iter().map(|x| x.rem_euclid(2) as u8).collect()).expect("binary"))
        .collect()
}

/// The noisy information strings `t̃_i` sampled from [`noisy_strings`].
pub fn noisy_information(y: &CompositionMultiset, spec: &PhiSpec) -> Result<Vec<BitString>, MultiError> {
    check_ambient(y, spec)?;
    let positions = info_positions(spec.h, spec.k);
    Ok(noisy_strings(&normalize(y, spec.h))
        .iter()
        .map(|t| sample(t, &positions))
        .collect())
}

fn check_ambient(y: &CompositionMultiset, spec: &PhiSpec) -> Result<(), MultiError> {
    if y.len() != spec.length() {
        return Err(MultiError::AmbientMismatch {
            expected: spec.length(),
            got: y.len(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiDecoded {
    /// The coded strings `c_1..c_h`.
    pub codewords: Vec<BitString>,
    /// The information strings `z_1..z_h`.
    pub messages: Vec<BitString>,
    /// Sizes whose groups the decoder read.
    pub consumed: Vec<usize>,
}

/// Error-free reconstruction of `z_1..z_h` from `M(φ(z))`.
pub fn multi_decode_free(x: &CompositionMultiset, spec: &PhiSpec) -> Result<MultiDecoded, MultiError> {
    check_ambient(x, spec)?;
    let n = spec.length();
    let view = normalize(x, spec.h);
    let mut codewords = Vec::with_capacity(spec.h);
    for (i, d) in mass_differences(&view, spec.h).into_iter().enumerate() {
        let bitsv = d
            .into_iter()
            .enumerate()
            .map(|(position, v)| match v {
                0 | 1 => Ok(v as u8),
                _ => Err(MultiError::NonBinary { string: i, position }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        codewords.push(BitString::from_bits(bitsv).expect("binary"));
    }
    let positions = info_positions(spec.h, spec.k);
    let messages: Vec<_> = codewords.iter().map(|c| sample(c, &positions)).collect();
    let recoded = phi_encode(&messages, spec)?;
    let dist = distance(&multi_compositions(&recoded)?, x)?;
    if dist != 0 {
        return Err(MultiError::Mismatch { distance: dist, budget: 0 });
    }
    Ok(MultiDecoded {
        codewords: recoded,
        messages,
        consumed: (1..=n).collect(),
    })
}

/// Reconstruction of `z_1..z_h`, each a codeword of `good`, from a
/// multiset within `t` errors of `M(φ(z))`.
pub fn multi_decode_errors(
    y: &CompositionMultiset,
    spec: &PhiSpec,
    good: &dyn BinaryCode,
    t: usize,
) -> Result<MultiDecoded, MultiError> {
    check_ambient(y, spec)?;
    if good.length() != spec.k {
        return Err(MultiError::InvalidParams(format!(
            "code length {} differs from k = {}",
            good.length(),
            spec.k
        )));
    }
    if good.radius() < 4 * t {
        return Err(MultiError::InvalidParams(format!(
            "code radius {} below 4t = {}",
            good.radius(),
            4 * t
        )));
    }
    let noisy = noisy_information(y, spec)?;
    let mut messages = Vec::with_capacity(spec.h);
    for (index, tt) in noisy.iter().enumerate() {
        let (z, _) = good.decode(tt).map_err(|source| MultiError::Decode { index, source })?;
        messages.push(z);
    }
    let codewords = phi_encode(&messages, spec)?;
    let dist = distance(&multi_compositions(&codewords)?, y)?;
    if dist > t {
        return Err(MultiError::Mismatch { distance: dist, budget: t });
    }
    Ok(MultiDecoded {
        codewords,
        messages,
        consumed: consumed_sizes(spec.length(), &info_positions(spec.h, spec.k)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bch::BchCode;
    use crate::bits::bits;
    use crate::channel::{corrupt, random_plan};

    fn rows(v: &[&str]) -> Vec<BitString> {
        v.iter().map(|s| bits(s)).collect()
    }

    #[test]
    fn example_trace() {
        let spec = PhiSpec::new(2, 6).unwrap();
        let zs = rows(&["101010", "001011"]);
        let tr = phi_trace(&zs, &spec).unwrap();
        assert_eq!(tr.w, rows(&["101", "010", "001", "110"]));
        assert_eq!(tr.r, rows(&["0100", "0010", "0101"]));
        let u: Vec<Vec<String>> = tr.u.iter().map(|r| r.iter().map(|b| b.to_string()).collect()).collect();
        assert_eq!(u[0], ["00", "00", "00"]);
        assert_eq!(u[1], ["01", "00", "01"]);
        assert_eq!(u[2], ["01", "01", "01"]);
        assert_eq!(u[3], ["01", "01", "11"]);
        assert_eq!(tr.v, rows(&["001000001", "010001010", "010010011", "011011110"]));
        let cs = phi_encode(&zs, &spec).unwrap();
        assert_eq!(cs, rows(&["001000001010100010", "010010011011110110"]));
        assert!(dominance_chain_check(&cs));
        let x = multi_compositions(&cs).unwrap();
        // full-length group holds each total weight twice
        assert_eq!((cs[0].weight(), cs[1].weight()), (5, 10));
        assert_eq!(x.masses(18), vec![5, 5, 10, 10]);
        assert_eq!(multi_decode_free(&x, &spec).unwrap().messages, zs);
    }

    #[test]
    fn all_zero_input() {
        let spec = PhiSpec::new(1, 2).unwrap();
        assert_eq!(phi_encode(&rows(&["00"]), &spec).unwrap(), rows(&["0000"]));
        assert!(phi_encode(&rows(&["000"]), &spec).is_err());
        assert!(PhiSpec::new(0, 2).is_err());
    }

    #[test]
    fn chain_counterexample() {
        assert!(!dominance_chain_check(&rows(&["10", "01"])));
    }

    #[test]
    fn odd_k_matches_truncated_even() {
        for h in 1..=3 {
            for k in [1usize, 3, 5] {
                let spec = PhiSpec::new(h, k).unwrap();
                let ext_spec = PhiSpec::new(h, k + 1).unwrap();
                let gone = odd_deleted(h, k);
                for seed in 0..(1u64 << (h * k)).min(64) {
                    let zs: Vec<BitString> = (0..h)
                        .map(|i| BitString::from_uint(((seed >> (i * k)) & ((1 << k) - 1)) as u128, k).unwrap())
                        .collect();
                    let cs = phi_encode(&zs, &spec).unwrap();
                    let ext: Vec<_> = zs.iter().map(duplicate_middle).collect();
                    let full = phi_encode(&ext, &ext_spec).unwrap();
                    for (c, f) in cs.iter().zip(&full) {
                        assert_eq!(c.len(), k * (h + 1));
                        let v: Vec<u8> = (0..f.len()).filter(|p| !gone.contains(p)).map(|p| f.get(p)).collect();
                        assert_eq!(c.as_slice(), v.as_slice());
                    }
                }
            }
        }
    }

    #[test]
    fn odd_deletion_sets() {
        assert_eq!(odd_deleted(1, 1), vec![0, 3]);
        assert_eq!(odd_deleted(2, 1), vec![0, 3, 5]);
        assert_eq!(odd_deleted(2, 3), vec![3, 6, 8]);
        assert_eq!(odd_deleted(3, 3), vec![4, 5, 10, 11]);
        assert_eq!(info_positions(2, 3), vec![2, 4, 6]);
    }

    #[test]
    fn odd_k_small_chain() {
        // the block deletion of the plain odd-k rule breaks the chain here
        let spec = PhiSpec::new(2, 1).unwrap();
        let cs = phi_encode(&rows(&["1", "0"]), &spec).unwrap();
        assert_eq!(cs, rows(&["010", "101"]));
        assert!(dominance_chain_check(&cs));
    }

    #[test]
    fn info_positions_sample_inputs() {
        for (h, k) in [(1, 1), (1, 4), (2, 5), (3, 4)] {
            let spec = PhiSpec::new(h, k).unwrap();
            let zs: Vec<_> = (0..h).map(|i| BitString::from_uint((5 + 3 * i) as u128 % (1 << k), k).unwrap()).collect();
            let pos = info_positions(h, k);
            for (z, c) in zs.iter().zip(phi_encode(&zs, &spec).unwrap()) {
                assert_eq!(sample(&c, &pos), *z);
            }
        }
    }

    #[test]
    fn free_decoding_rejects_corruption() {
        let spec = PhiSpec::new(2, 4).unwrap();
        let zs = rows(&["1100", "1100"]);
        let x = multi_compositions(&phi_encode(&zs, &spec).unwrap()).unwrap();
        assert_eq!(multi_decode_free(&x, &spec).unwrap().messages, zs);
        let y = corrupt(&x, &random_plan(&x, 2, 5).unwrap()).unwrap();
        assert!(multi_decode_free(&y, &spec).is_err());
        let short = CompositionMultiset::empty(3);
        assert!(matches!(multi_decode_free(&short, &spec), Err(MultiError::AmbientMismatch { .. })));
    }

    #[test]
    fn error_decoding_small() {
        let code = BchCode::build_relaxed(5, 7).unwrap();
        let spec = PhiSpec::new(2, 31).unwrap();
        let zs: Vec<_> = [11u128, 42]
            .iter()
            .map(|&m| code.encode(&BitString::from_uint(m, 6).unwrap()).unwrap())
            .collect();
        let x = multi_compositions(&phi_encode(&zs, &spec).unwrap()).unwrap();
        assert_eq!(multi_decode_errors(&x, &spec, &code, 1).unwrap().messages, zs);
        for seed in 0..20 {
            let y = corrupt(&x, &random_plan(&x, 1, seed).unwrap()).unwrap();
            assert_eq!(multi_decode_errors(&y, &spec, &code, 1).unwrap().messages, zs);
        }
        let weak = BchCode::build(4, 2).unwrap();
        assert!(multi_decode_errors(&x, &spec, &weak, 1).is_err());
    }
}
