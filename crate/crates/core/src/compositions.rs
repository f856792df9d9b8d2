//! Prefix-suffix composition multisets.
//!
//! A [`CompositionMultiset`] over ambient length `n` holds, for each size
//! `j = 1..=n`, a multiset of [`CompositionPair`]s with `zeros + ones = j`.
//! Groups are kept sorted by mass, so structural equality is multiset
//! equality and serialization is canonical.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bits::BitString;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositionError {
    #[error("composition of an empty string")]
    EmptyString,
    #[error("strings of unequal length: {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("no strings given")]
    NoStrings,
    #[error("ambient lengths differ: {0} and {1}")]
    AmbientMismatch(usize, usize),
    #[error("size {size} outside [1, {n}]")]
    SizeOutOfRange { size: usize, n: usize },
    #[error("pair ({a},{b}) does not have size {size}")]
    WrongSize { a: usize, b: usize, size: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// The pair (zero-count, one-count) of a string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CompositionPair {
    pub zeros: usize,
    pub ones: usize,
}

impl Ord for CompositionPair {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.ones, self.zeros).cmp(&(other.ones, other.zeros))
    }
}

impl PartialOrd for CompositionPair {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl CompositionPair {
    pub fn new(zeros: usize, ones: usize) -> Self {
        Self { zeros, ones }
    }

    /// The pair of size `size` and mass `mass`.
    pub fn with_mass(size: usize, mass: usize) -> Self {
        debug_assert!(mass <= size);
        Self {
            zeros: size - mass,
            ones: mass,
        }
    }

    pub fn size(&self) -> usize {
        self.zeros + self.ones
    }

    pub fn mass(&self) -> usize {
        self.ones
    }
}

impl fmt::Display for CompositionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.zeros, self.ones)
    }
}

pub fn composition(s: &BitString) -> Result<CompositionPair, CompositionError> {
    if s.is_empty() {
        return Err(CompositionError::EmptyString);
    }
    let w = s.weight();
    Ok(CompositionPair::new(s.len() - w, w))
}

/// An element of the space of composition multisets over length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompositionMultiset {
    n: usize,
    /// `groups[j - 1]` holds the pairs of size `j`, sorted by mass.
    groups: Vec<Vec<CompositionPair>>,
}

impl CompositionMultiset {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            groups: vec![Vec::new(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.groups.iter().all(Vec::is_empty)
    }

    /// The pairs of size `size`, sorted by mass.
    pub fn group(&self, size: usize) -> &[CompositionPair] {
        &self.groups[size - 1]
    }

    /// Masses of group `size`, ascending.
    pub fn masses(&self, size: usize) -> Vec<usize> {
        self.group(size).iter().map(CompositionPair::mass).collect()
    }

    fn check_size(&self, size: usize) -> Result<(), CompositionError> {
        if size == 0 || size > self.n {
            return Err(CompositionError::SizeOutOfRange { size, n: self.n });
        }
        Ok(())
    }

    pub fn insert(&mut self, pair: CompositionPair) -> Result<(), CompositionError> {
        self.check_size(pair.size())?;
        let g = &mut self.groups[pair.size() - 1];
        let at = g.partition_point(|q| q <= &pair);
        g.insert(at, pair);
        Ok(())
    }

    /// Removes one instance of the pair of size `size` with mass `mass`.
    /// Returns whether one was present.
    pub fn remove(&mut self, size: usize, mass: usize) -> bool {
        if size == 0 || size > self.n {
            return false;
        }
        let g = &mut self.groups[size - 1];
        match g.iter().position(|q| q.mass() == mass) {
            Some(i) => {
                g.remove(i);
                true
            }
            None => false,
        }
    }

    /// Replaces group `size` wholesale.
    pub fn set_group(&mut self, size: usize, mut pairs: Vec<CompositionPair>) -> Result<(), CompositionError> {
        self.check_size(size)?;
        if let Some(p) = pairs.iter().find(|p| p.size() != size) {
            return Err(CompositionError::WrongSize {
                a: p.zeros,
                b: p.ones,
                size,
            });
        }
        pairs.sort();
        self.groups[size - 1] = pairs;
        Ok(())
    }

    /// Multiset union.
    pub fn union(&self, other: &Self) -> Result<Self, CompositionError> {
        if self.n != other.n {
            return Err(CompositionError::AmbientMismatch(self.n, other.n));
        }
        let groups = self
            .groups
            .iter()
            .zip(&other.groups)
            .map(|(a, b)| {
                let mut g: Vec<_> = a.iter().chain(b).copied().collect();
                g.sort();
                g
            })
            .collect();
        Ok(Self { n: self.n, groups })
    }

    /// Iterates `(size, pairs)` over nonempty groups.
    pub fn nonempty_groups(&self) -> impl Iterator<Item = (usize, &[CompositionPair])> {
        self.groups
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_empty())
            .map(|(i, g)| (i + 1, g.as_slice()))
    }
}

/// The prefix-suffix compositions `M(c)`: two pairs per size, one from the
/// prefix and one from the suffix of that length.
pub fn prefix_suffix_compositions(c: &BitString) -> Result<CompositionMultiset, CompositionError> {
    let n = c.len();
    if n == 0 {
        return Err(CompositionError::EmptyString);
    }
    let pre = c.prefix_weights();
    let total = pre[n];
    let groups = (1..=n)
        .map(|j| {
            let a = pre[j];
            let b = total - pre[n - j];
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            vec![CompositionPair::with_mass(j, lo), CompositionPair::with_mass(j, hi)]
        })
        .collect();
    Ok(CompositionMultiset { n, groups })
}

/// `M(c_1, ..., c_h)`, the multiset union of each string's compositions.
pub fn multi_compositions(strings: &[BitString]) -> Result<CompositionMultiset, CompositionError> {
    let first = strings.first().ok_or(CompositionError::NoStrings)?;
    let mut acc = prefix_suffix_compositions(first)?;
    for s in &strings[1..] {
        if s.len() != first.len() {
            return Err(CompositionError::LengthMismatch(first.len(), s.len()));
        }
        acc = acc.union(&prefix_suffix_compositions(s)?)?;
    }
    Ok(acc)
}

/// Number of sizes whose groups differ.
pub fn distance(x: &CompositionMultiset, y: &CompositionMultiset) -> Result<usize, CompositionError> {
    if x.n != y.n {
        return Err(CompositionError::AmbientMismatch(x.n, y.n));
    }
    Ok(x.groups.iter().zip(&y.groups).filter(|(a, b)| a != b).count())
}

/// Per-size sorted masses with exactly `2h` entries each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedView {
    n: usize,
    h: usize,
    masses: Vec<Vec<usize>>,
    erased: Vec<bool>,
}

impl NormalizedView {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn multiplicity(&self) -> usize {
        self.h
    }

    /// The `2h` sorted masses of size `size`; `size = 0` gives all zeros.
    pub fn masses(&self, size: usize) -> &[usize] {
        static ZEROS: [usize; 64] = [0; 64];
        if size == 0 {
            return &ZEROS[..2 * self.h];
        }
        &self.masses[size - 1]
    }

    /// The `slot`-th smallest mass (0-based) at `size`, with the `b_0 = 0`
    /// convention.
    pub fn mass(&self, size: usize, slot: usize) -> usize {
        if size == 0 {
            0
        } else {
            self.masses[size - 1][slot]
        }
    }

    /// Smallest mass at `size` (`b_j` for `h = 1`).
    pub fn lower(&self, size: usize) -> usize {
        self.mass(size, 0)
    }

    /// Largest mass at `size` (`b̄_j` for `h = 1`).
    pub fn upper(&self, size: usize) -> usize {
        if size == 0 {
            0
        } else {
            *self.masses[size - 1].last().expect("2h >= 2 entries")
        }
    }

    /// Whether the original group had a cardinality other than `2h`, which
    /// marks it as certainly in error.
    pub fn is_erased(&self, size: usize) -> bool {
        self.erased[size - 1]
    }

    /// Sizes flagged by [`NormalizedView::is_erased`].
    pub fn erased_sizes(&self) -> Vec<usize> {
        (1..=self.n).filter(|&j| self.erased[j - 1]).collect()
    }

    /// The view as a multiset with exactly `2h` pairs per size.
    pub fn to_multiset(&self) -> CompositionMultiset {
        let groups = self
            .masses
            .iter()
            .enumerate()
            .map(|(i, ms)| ms.iter().map(|&b| CompositionPair::with_mass(i + 1, b)).collect())
            .collect();
        CompositionMultiset { n: self.n, groups }
    }
}

/// Brings every group to exactly `2h` pairs: oversized groups keep their
/// `2h` smallest masses, undersized groups are padded with mass-0 pairs.
pub fn normalize(y: &CompositionMultiset, h: usize) -> NormalizedView {
    assert!(h >= 1, "multiplicity must be at least 1");
    let want = 2 * h;
    let mut erased = Vec::with_capacity(y.n);
    let masses = y
        .groups
        .iter()
        .map(|g| {
            erased.push(g.len() != want);
            let mut ms: Vec<usize> = g.iter().map(CompositionPair::mass).collect();
            ms.truncate(want);
            while ms.len() < want {
                ms.insert(0, 0);
            }
            ms
        })
        .collect();
    NormalizedView {
        n: y.n,
        h,
        masses,
        erased,
    }
}

impl fmt::Display for CompositionMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for (size, pairs) in self.nonempty_groups() {
            write!(f, "{size}:")?;
            for p in pairs {
                write!(f, " {p}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for CompositionMultiset {
    type Err = CompositionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_err = |line: usize, msg: String| CompositionError::Parse { line, msg };
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header".into()))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| parse_err(hl, format!("expected `n=<int>`, found {header:?}")))?;
        let mut out = Self::empty(n);
        let mut seen = vec![false; n];
        for (ln, line) in lines {
            let (size, rest) = line
                .split_once(':')
                .ok_or_else(|| parse_err(ln, "expected `<size>: <a>,<b> ...`".into()))?;
            let size: usize = size
                .trim()
                .parse()
                .map_err(|_| parse_err(ln, format!("bad size {size:?}")))?;
            if size == 0 || size > n {
                return Err(CompositionError::SizeOutOfRange { size, n });
            }
            if std::mem::replace(&mut seen[size - 1], true) {
                return Err(parse_err(ln, format!("size {size} listed twice")));
            }
            let mut pairs = Vec::new();
            for tok in rest.split_whitespace() {
                let (a, b) = tok
                    .split_once(',')
                    .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
                    .ok_or_else(|| parse_err(ln, format!("bad pair {tok:?}")))?;
                if a + b != size {
                    return Err(CompositionError::WrongSize { a, b, size });
                }
                pairs.push(CompositionPair::new(a, b));
            }
            out.set_group(size, pairs)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use proptest::prelude::*;

    fn pairs(v: &[(usize, usize)]) -> Vec<CompositionPair> {
        v.iter().map(|&(a, b)| CompositionPair::new(a, b)).collect()
    }

    #[test]
    fn single_compositions() {
        assert_eq!(composition(&bits("010")).unwrap(), CompositionPair::new(2, 1));
        assert_eq!(composition(&bits("1")).unwrap(), CompositionPair::new(0, 1));
        assert_eq!(composition(&bits("0000")).unwrap(), CompositionPair::new(4, 0));
        assert_eq!(composition(&bits("")), Err(CompositionError::EmptyString));
    }

    #[test]
    fn prefix_suffix_examples() {
        let m = prefix_suffix_compositions(&bits("01")).unwrap();
        assert_eq!(m.group(1), pairs(&[(1, 0), (0, 1)]));
        assert_eq!(m.group(2), pairs(&[(1, 1), (1, 1)]));
        let m = prefix_suffix_compositions(&bits("0")).unwrap();
        assert_eq!(m.group(1), pairs(&[(1, 0), (1, 0)]));
        let m = prefix_suffix_compositions(&bits("111")).unwrap();
        for j in 1..=3 {
            assert_eq!(m.group(j), pairs(&[(0, j), (0, j)]));
        }
    }

    #[test]
    fn multi_examples() {
        let c = bits("0110");
        assert_eq!(multi_compositions(&[c.clone()]).unwrap(), prefix_suffix_compositions(&c).unwrap());
        let m = multi_compositions(&[bits("0"), bits("0")]).unwrap();
        assert_eq!(m.group(1), pairs(&[(1, 0); 4]));
        assert_eq!(
            multi_compositions(&[bits("01"), bits("0")]),
            Err(CompositionError::LengthMismatch(2, 1))
        );
    }

    #[test]
    fn distance_examples() {
        let x = prefix_suffix_compositions(&bits("01")).unwrap();
        assert_eq!(distance(&x, &x).unwrap(), 0);
        let mut y = x.clone();
        y.set_group(1, pairs(&[(0, 1), (0, 1)])).unwrap();
        assert_eq!(distance(&x, &y).unwrap(), 1);
        let mut z = x.clone();
        assert!(z.remove(1, 0));
        z.insert(CompositionPair::new(2, 0)).unwrap();
        assert_eq!(distance(&x, &z).unwrap(), 2);
        let other = CompositionMultiset::empty(3);
        assert_eq!(distance(&x, &other), Err(CompositionError::AmbientMismatch(2, 3)));
    }

    #[test]
    fn normalize_examples() {
        let x = prefix_suffix_compositions(&bits("0110")).unwrap();
        let v = normalize(&x, 1);
        assert_eq!(v.masses(2), &[1, 1]);
        assert!(v.erased_sizes().is_empty());

        let mut y = CompositionMultiset::empty(4);
        y.set_group(2, pairs(&[(0, 2), (1, 1), (2, 0)])).unwrap();
        let v = normalize(&y, 1);
        assert_eq!(v.masses(3), &[0, 0]);
        assert_eq!(v.masses(2), &[0, 1]);
        assert_eq!(v.erased_sizes(), vec![1, 2, 3, 4]);
    }

    // Every group of exactly two pairs at size j, as sorted mass lists.
    fn two_pair_groups(j: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for a in 0..=j {
            for b in a..=j {
                out.push(vec![a, b]);
            }
        }
        out
    }

    #[test]
    fn truncation_never_increases_distance() {
        // All groups of cardinality 0..=4 at sizes j <= 4 against every
        // two-pair reference group.
        for j in 1..=4 {
            for card in 0..=4usize {
                let mut stack: Vec<Vec<usize>> = vec![vec![]];
                for _ in 0..card {
                    stack = stack
                        .into_iter()
                        .flat_map(|g| {
                            let lo = g.last().copied().unwrap_or(0);
                            (lo..=j).map(move |b| {
                                let mut g2 = g.clone();
                                g2.push(b);
                                g2
                            })
                        })
                        .collect();
                }
                for yg in &stack {
                    let mut y = CompositionMultiset::empty(j);
                    y.set_group(j, yg.iter().map(|&b| CompositionPair::with_mass(j, b)).collect()).unwrap();
                    let ny = normalize(&y, 1).to_multiset();
                    for xg in two_pair_groups(j) {
                        let mut x = CompositionMultiset::empty(j);
                        x.set_group(j, xg.iter().map(|&b| CompositionPair::with_mass(j, b)).collect()).unwrap();
                        // other sizes are empty in x and padded in ny; compare group j only
                        let dy = (x.group(j) != y.group(j)) as usize;
                        let dn = (x.group(j) != ny.group(j)) as usize;
                        assert!(dn <= dy, "j={j} y={yg:?} x={xg:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn file_format_round_trip() {
        let x = prefix_suffix_compositions(&bits("0110")).unwrap();
        let text = x.to_string();
        assert_eq!(text, "n=4\n1: 1,0 1,0\n2: 1,1 1,1\n3: 1,2 1,2\n4: 2,2 2,2\n");
        assert_eq!(text.parse::<CompositionMultiset>().unwrap(), x);
        // trailing whitespace on the header is tolerated
        assert!("n=2 \n1: 1,0\n".parse::<CompositionMultiset>().is_ok());
    }

    #[test]
    fn parser_rejects_malformed() {
        assert!(matches!(
            "n=3\n2: 1,2\n".parse::<CompositionMultiset>(),
            Err(CompositionError::WrongSize { .. })
        ));
        assert!(matches!(
            "n=3\n4: 2,2\n".parse::<CompositionMultiset>(),
            Err(CompositionError::SizeOutOfRange { .. })
        ));
        assert!(matches!(
            "n=3\n0: \n".parse::<CompositionMultiset>(),
            Err(CompositionError::SizeOutOfRange { .. })
        ));
        assert!("x=3\n".parse::<CompositionMultiset>().is_err());
        assert!("n=3\n1: 1,0\n1: 0,1\n".parse::<CompositionMultiset>().is_err());
        assert!("n=3\n1: 1;0\n".parse::<CompositionMultiset>().is_err());
    }

    fn arb_bits(max: usize) -> impl Strategy<Value = BitString> {
        prop::collection::vec(0u8..=1, 1..=max).prop_map(|v| BitString::from_bits(v).unwrap())
    }

    proptest! {
        #[test]
        fn reversal_invariance_and_mass_sum(c in arb_bits(40)) {
            let m = prefix_suffix_compositions(&c).unwrap();
            prop_assert_eq!(distance(&m, &prefix_suffix_compositions(&c.reversed()).unwrap()).unwrap(), 0);
            let total: usize = m.masses(c.len()).iter().sum();
            prop_assert_eq!(total, 2 * c.weight());
        }

        #[test]
        fn serialization_round_trip(c in arb_bits(30), d in arb_bits(30)) {
            let n = c.len().min(d.len());
            let m = multi_compositions(&[c.prefix(n), d.prefix(n)]).unwrap();
            prop_assert_eq!(m.to_string().parse::<CompositionMultiset>().unwrap(), m);
        }

        #[test]
        fn normalize_idempotent(c in arb_bits(12), extra in prop::collection::vec((1usize..=12, 0usize..=12), 0..6), h in 1usize..=2) {
            let mut y = prefix_suffix_compositions(&c).unwrap();
            let n = y.len();
            for (size, mass) in extra {
                let size = (size - 1) % n + 1;
                y.insert(CompositionPair::with_mass(size, mass % (size + 1))).unwrap();
            }
            let once = normalize(&y, h);
            let twice = normalize(&once.to_multiset(), h);
            prop_assert_eq!(once.masses.clone(), twice.masses.clone());
            prop_assert!(twice.erased_sizes().is_empty());
        }
    }
}
