//! Brute-force references and the encode-corrupt-decode sweep harness.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bch::{BchCode, BinaryCode};
use crate::bits::BitString;
use crate::channel::{corrupt, group_actions, random_plan_with, ErrorEvent, ErrorPlan};
use crate::compositions::{distance, multi_compositions, normalize, prefix_suffix_compositions, CompositionMultiset};
use crate::grs::GrsParams;
use crate::multi::{info_positions, multi_decode_errors, multi_decode_free, noisy_information, noisy_strings, phi_encode, PhiSpec};
use crate::single::{
    c1_codebook, c1_decode, c2_decode, c2_encode, c3_decode, c3_encode, c4_decode, c4_encode, C1Params, C2Params,
    C3Params, C4Params, ReconError, Verdict,
};

/// Largest codebook the nearest-codeword search accepts.
pub const MAX_CODEBOOK: u128 = 1 << 20;
/// Largest search space (`2^{hn}`) for composition inversion.
pub const MAX_INVERSION_BITS: usize = 22;
/// Largest number of decode calls a sweep may plan.
pub const MAX_SWEEP_CASES: u128 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("codebook of {0} words exceeds the enumeration limit")]
    CodebookTooLarge(u128),
    #[error("search space 2^{0} exceeds the enumeration limit")]
    SearchTooLarge(usize),
    #[error("sweep of {0} cases exceeds the limit")]
    SweepTooLarge(u128),
    #[error("empty codebook")]
    EmptyCodebook,
    #[error("word has length {got}, codebook length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("scheme has no exhaustive message list")]
    NotEnumerable,
    #[error("encoding failed: {0}")]
    Encode(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nearest<T> {
    pub codeword: T,
    pub distance: usize,
    /// Number of codewords at the minimum distance.
    pub ties: usize,
}

fn hamming<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// A codeword at minimum Hamming distance from `y`; ties go to the first in
/// codebook order (lexicographic for the codebooks built here).
pub fn brute_nearest_codeword<T: PartialEq + Clone>(y: &[T], codebook: &[Vec<T>]) -> Result<Nearest<Vec<T>>, OracleError> {
    if codebook.len() as u128 > MAX_CODEBOOK {
        return Err(OracleError::CodebookTooLarge(codebook.len() as u128));
    }
    let mut best: Option<Nearest<Vec<T>>> = None;
    for c in codebook {
        if c.len() != y.len() {
            return Err(OracleError::LengthMismatch {
                expected: c.len(),
                got: y.len(),
            });
        }
        let d = hamming(y, c);
        match &mut best {
            Some(b) if d == b.distance => b.ties += 1,
            Some(b) if d > b.distance => {}
            _ => {
                best = Some(Nearest {
                    codeword: c.clone(),
                    distance: d,
                    ties: 1,
                })
            }
        }
    }
    best.ok_or(OracleError::EmptyCodebook)
}

/// Every GRS codeword, messages in lexicographic order.
pub fn grs_codebook(params: &GrsParams) -> Result<Vec<Vec<u64>>, OracleError> {
    let p = params.field().modulus() as u128;
    let k = params.dimension() as u32;
    let size = p.checked_pow(k).filter(|&s| s <= MAX_CODEBOOK).ok_or(OracleError::CodebookTooLarge(u128::MAX))?;
    Ok((0..size)
        .map(|mut idx| {
            let mut msg = vec![0u64; k as usize];
            for m in msg.iter_mut().rev() {
                *m = (idx % p) as u64;
                idx /= p;
            }
            params.encode(&msg).expect("dimension matches")
        })
        .collect())
}

/// Every codeword of a binary code, messages in lexicographic order.
pub fn binary_codebook(code: &dyn BinaryCode) -> Result<Vec<BitString>, OracleError> {
    let k = code.dimension();
    if k >= 128 || 1u128 << k > MAX_CODEBOOK {
        return Err(OracleError::CodebookTooLarge(if k >= 128 { u128::MAX } else { 1 << k }));
    }
    Ok(BitString::all(k).map(|m| code.encode(&m).expect("dimension matches")).collect())
}

/// All tuples `(c_1..c_h)` of length-`n` strings with
/// `distance(M(c_1..c_h), y) <= t`, in lexicographic order.
pub fn brute_inverse_compositions(
    y: &CompositionMultiset,
    n: usize,
    h: usize,
    t: usize,
) -> Result<Vec<Vec<BitString>>, OracleError> {
    if h == 0 || n == 0 || h * n > MAX_INVERSION_BITS {
        return Err(OracleError::SearchTooLarge(h * n));
    }
    if y.len() != n {
        return Ok(Vec::new());
    }
    let singles: Vec<(BitString, CompositionMultiset)> = BitString::all(n)
        .map(|c| {
            let m = prefix_suffix_compositions(&c).expect("n >= 1");
            (c, m)
        })
        .collect();
    let count = singles.len();
    let mut out = Vec::new();
    let mut idx = vec![0usize; h];
    loop {
        let mut acc = singles[idx[0]].1.clone();
        for &i in &idx[1..] {
            acc = acc.union(&singles[i].1).expect("same n");
        }
        if distance(&acc, y).expect("same n") <= t {
            out.push(idx.iter().map(|&i| singles[i].0.clone()).collect());
        }
        // odometer, last index fastest
        let mut pos = h;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < count {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// A coding scheme driven by the sweep harness.
pub trait Scheme {
    type Message: Clone + PartialEq + fmt::Debug;

    fn id(&self) -> String;
    /// Human-readable parameter summary.
    fn describe(&self) -> String;
    fn length(&self) -> usize;
    fn multiplicity(&self) -> usize {
        1
    }
    fn budget(&self) -> usize;
    /// Every message, when the space is small enough to enumerate.
    fn messages(&self) -> Option<Vec<Self::Message>>;
    fn random_message(&self, rng: &mut ChaCha8Rng) -> Self::Message;
    fn encode(&self, msg: &Self::Message) -> Result<Vec<BitString>, String>;
    fn decode(&self, y: &CompositionMultiset) -> (Verdict, Option<Self::Message>);
    /// Largest per-string bit error of the strings read off the masses of
    /// `y`, against the true strings.
    fn bit_errors(&self, y: &CompositionMultiset, strings: &[BitString]) -> usize {
        noisy_strings(&normalize(y, self.multiplicity()))
            .iter()
            .zip(strings)
            .map(|(t, c)| t.hamming_distance(c))
            .max()
            .unwrap_or(0)
    }
}

fn split<M>(r: Result<crate::single::Reconstruction<M>, ReconError>) -> (Verdict, Option<M>) {
    let v = Verdict::of(&r);
    (v, r.ok().map(|x| x.message))
}

fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> BitString {
    BitString::from_bits((0..len).map(|_| rng.random_range(0..=1u8)).collect()).expect("binary")
}

fn all_bits(len: usize) -> Option<Vec<BitString>> {
    (len <= 20).then(|| BitString::all(len).collect())
}

impl Scheme for C1Params {
    type Message = BitString;

    fn id(&self) -> String {
        "c1".into()
    }
    fn describe(&self) -> String {
        format!(
            "p={} n={} t={} erasures={}",
            self.grs().field().modulus(),
            self.length(),
            self.budget(),
            self.erasure_budget()
        )
    }
    fn length(&self) -> usize {
        C1Params::length(self)
    }
    fn budget(&self) -> usize {
        C1Params::budget(self)
    }
    fn messages(&self) -> Option<Vec<BitString>> {
        c1_codebook(self).ok()
    }
    fn random_message(&self, rng: &mut ChaCha8Rng) -> BitString {
        let book = c1_codebook(self).expect("small n");
        book[rng.random_range(0..book.len())].clone()
    }
    fn encode(&self, msg: &BitString) -> Result<Vec<BitString>, String> {
        Ok(vec![msg.clone()])
    }
    fn decode(&self, y: &CompositionMultiset) -> (Verdict, Option<BitString>) {
        split(c1_decode(y, self))
    }
}

impl Scheme for C2Params {
    type Message = Vec<u64>;

    fn id(&self) -> String {
        "c2".into()
    }
    fn describe(&self) -> String {
        format!("p={} n1={} t={}", self.prime(), self.inner_length(), self.budget())
    }
    fn length(&self) -> usize {
        C2Params::length(self)
    }
    fn budget(&self) -> usize {
        C2Params::budget(self)
    }
    fn messages(&self) -> Option<Vec<Vec<u64>>> {
        let p = self.prime() as u128;
        let k = self.message_length() as u32;
        let size = p.checked_pow(k).filter(|&s| s <= MAX_CODEBOOK)?;
        Some(
            (0..size)
                .map(|mut idx| {
                    let mut m = vec![0u64; k as usize];
                    for x in m.iter_mut().rev() {
                        *x = (idx % p) as u64;
                        idx /= p;
                    }
                    m
                })
                .collect(),
        )
    }
    fn random_message(&self, rng: &mut ChaCha8Rng) -> Vec<u64> {
        (0..self.message_length()).map(|_| rng.random_range(0..self.prime())).collect()
    }
    fn encode(&self, msg: &Vec<u64>) -> Result<Vec<BitString>, String> {
        c2_encode(msg, self).map(|c| vec![c]).map_err(|e| e.to_string())
    }
    fn decode(&self, y: &CompositionMultiset) -> (Verdict, Option<Vec<u64>>) {
        split(c2_decode(y, self))
    }
}

impl Scheme for C3Params {
    type Message = BitString;

    fn id(&self) -> String {
        "c3".into()
    }
    fn describe(&self) -> String {
        let (n1, n2, t, p) = self.dims();
        format!("n1={n1} n2={n2} t={t} p={p}")
    }
    fn length(&self) -> usize {
        C3Params::length(self)
    }
    fn budget(&self) -> usize {
        C3Params::budget(self)
    }
    fn messages(&self) -> Option<Vec<BitString>> {
        all_bits(self.message_length())
    }
    fn random_message(&self, rng: &mut ChaCha8Rng) -> BitString {
        random_bits(rng, self.message_length())
    }
    fn encode(&self, msg: &BitString) -> Result<Vec<BitString>, String> {
        c3_encode(msg, self).map(|c| vec![c]).map_err(|e| e.to_string())
    }
    fn decode(&self, y: &CompositionMultiset) -> (Verdict, Option<BitString>) {
        split(c3_decode(y, self))
    }
}

impl Scheme for C4Params {
    type Message = BitString;

    fn id(&self) -> String {
        "c4".into()
    }
    fn describe(&self) -> String {
        format!("n1={} n2={} t={}", self.inner_length(), self.code_length(), self.budget())
    }
    fn length(&self) -> usize {
        C4Params::length(self)
    }
    fn budget(&self) -> usize {
        C4Params::budget(self)
    }
    fn messages(&self) -> Option<Vec<BitString>> {
        all_bits(self.message_length())
    }
    fn random_message(&self, rng: &mut ChaCha8Rng) -> BitString {
        random_bits(rng, self.message_length())
    }
    fn encode(&self, msg: &BitString) -> Result<Vec<BitString>, String> {
        c4_encode(msg, self).map(|c| vec![c]).map_err(|e| e.to_string())
    }
    fn decode(&self, y: &CompositionMultiset) -> (Verdict, Option<BitString>) {
        split(c4_decode(y, self))
    }
}

/// φ over `h` strings, optionally with every string a codeword of `good`.
#[derive(Clone)]
pub struct MultiScheme {
    pub spec: PhiSpec,
    pub good: Option<Arc<dyn BinaryCode + Send + Sync>>,
    pub t: usize,
}

impl MultiScheme {
    pub fn free(spec: PhiSpec) -> Self {
        Self { spec, good: None, t: 0 }
    }

    pub fn with_bch(h: usize, m: u32, capability: usize, t: usize) -> Result<Self, OracleError> {
        let code = BchCode::build_relaxed(m, capability).map_err(|e| OracleError::Encode(e.to_string()))?;
        let spec = PhiSpec::new(h, code.length()).map_err(|e| OracleError::Encode(e.to_string()))?;
        Ok(Self {
            spec,
            good: Some(Arc::new(code)),
            t,
        })
    }

    /// Decodes `y`, returning the information strings.
    pub fn decode_strings(&self, y: &CompositionMultiset) -> Result<Vec<BitString>, crate::multi::MultiError> {
        match &self.good {
            Some(code) => multi_decode_errors(y, &self.spec, code.as_ref(), self.t).map(|d| d.messages),
            None => multi_decode_free(y, &self.spec).map(|d| d.messages),
        }
    }
}

impl fmt::Debug for MultiScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiScheme({})", self.describe())
    }
}

impl Scheme for MultiScheme {
    type Message = Vec<BitString>;

    fn id(&self) -> String {
        "multi".into()
    }
    fn describe(&self) -> String {
        match &self.good {
            Some(g) => format!(
                "h={} k={} t={} good=({},{},radius {})",
                self.spec.h,
                self.spec.k,
                self.t,
                g.length(),
                g.dimension(),
                g.radius()
            ),
            None => format!("h={} k={} t=0", self.spec.h, self.spec.k),
        }
    }
    fn length(&self) -> usize {
        self.spec.length()
    }
    fn multiplicity(&self) -> usize {
        self.spec.h
    }
    fn budget(&self) -> usize {
        self.t
    }
    fn messages(&self) -> Option<Vec<Vec<BitString>>> {
        let h = self.spec.h;
        let per: Vec<BitString> = match &self.good {
            Some(g) => binary_codebook(g.as_ref()).ok()?,
            None => all_bits(self.spec.k)?,
        };
        let total = (per.len() as u128).checked_pow(h as u32).filter(|&s| s <= MAX_CODEBOOK)?;
        Some(
            (0..total)
                .map(|mut idx| {
                    let mut tuple = vec![BitString::default(); h];
                    for slot in tuple.iter_mut().rev() {
                        *slot = per[(idx % per.len() as u128) as usize].clone();
                        idx /= per.len() as u128;
                    }
                    tuple
                })
                .collect(),
        )
    }
    fn random_message(&self, rng: &mut ChaCha8Rng) -> Vec<BitString> {
        (0..self.spec.h)
            .map(|_| match &self.good {
                Some(g) => g.encode(&random_bits(rng, g.dimension())).expect("dimension matches"),
                None => random_bits(rng, self.spec.k),
            })
            .collect()
    }
    fn encode(&self, msg: &Vec<BitString>) -> Result<Vec<BitString>, String> {
        phi_encode(msg, &self.spec).map_err(|e| e.to_string())
    }
    fn decode(&self, y: &CompositionMultiset) -> (Verdict, Option<Vec<BitString>>) {
        use crate::multi::MultiError;
        match self.decode_strings(y) {
            Ok(z) => (Verdict::Recovered, Some(z)),
            Err(MultiError::Mismatch { .. }) => (Verdict::DetectedMismatch, None),
            Err(_) => (Verdict::Failed, None),
        }
    }
    /// Measured on the sampled information positions, `d(t̃_i, z_i)`.
    fn bit_errors(&self, y: &CompositionMultiset, strings: &[BitString]) -> usize {
        let positions = info_positions(self.spec.h, self.spec.k);
        let noisy = noisy_information(y, &self.spec).expect("length matches");
        noisy
            .iter()
            .zip(strings)
            .map(|(t, c)| {
                let z = BitString::from_bits(positions.iter().map(|&p| c.get(p)).collect()).expect("binary");
                t.hamming_distance(&z)
            })
            .max()
            .unwrap_or(0)
    }
}

/// Which messages a sweep encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MessageMode {
    All,
    Random { count: usize, seed: u64 },
}

/// Which error plans a sweep applies to each message.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanMode {
    /// Every plan over at most `max_events` distinct sizes, each event from
    /// the bounded per-group alphabet.
    Exhaustive { max_events: usize },
    /// `count` random plans with `1..=max_events` events each.
    Random { count: usize, max_events: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepMode {
    pub messages: MessageMode,
    pub plans: PlanMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub scheme: String,
    pub params: String,
    pub mode: String,
    pub total: u64,
    pub recovered: u64,
    pub failed: u64,
    pub detected: u64,
    /// Decoder reported success with the wrong message.
    pub silent: u64,
    pub max_bit_error: usize,
    /// First non-recovered case, for replay.
    pub first_failure: Option<String>,
}

impl SweepReport {
    pub fn all_recovered(&self) -> bool {
        self.recovered == self.total
    }

    fn record(&mut self, verdict: Verdict, correct: bool, context: impl FnOnce() -> String) {
        self.total += 1;
        match (verdict, correct) {
            (Verdict::Recovered, true) => {
                self.recovered += 1;
                return;
            }
            (Verdict::Recovered, false) => self.silent += 1,
            (Verdict::Failed, _) => self.failed += 1,
            (Verdict::DetectedMismatch, _) => self.detected += 1,
        }
        if self.first_failure.is_none() {
            self.first_failure = Some(format!("{} {}", verdict, context()));
        }
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scheme={}", self.scheme)?;
        writeln!(f, "params={}", self.params)?;
        writeln!(f, "mode={}", self.mode)?;
        writeln!(f, "total={}", self.total)?;
        writeln!(f, "recovered={}", self.recovered)?;
        writeln!(f, "failed={}", self.failed)?;
        writeln!(f, "detected_mismatch={}", self.detected)?;
        writeln!(f, "silent_mismatch={}", self.silent)?;
        writeln!(f, "max_bit_error={}", self.max_bit_error)?;
        if let Some(ff) = &self.first_failure {
            writeln!(f, "first_failure={ff}")?;
        }
        Ok(())
    }
}

fn mode_text(mode: &SweepMode) -> String {
    let m = match mode.messages {
        MessageMode::All => "messages=all".to_string(),
        MessageMode::Random { count, seed } => format!("messages=random({count},seed={seed})"),
    };
    let p = match mode.plans {
        PlanMode::Exhaustive { max_events } => format!("plans=exhaustive(<={max_events})"),
        PlanMode::Random { count, max_events, seed } => format!("plans=random({count},<={max_events},seed={seed})"),
    };
    format!("{m} {p}")
}

/// Calls `f` on every plan with at most `max_events` events.
fn for_each_plan(x: &CompositionMultiset, max_events: usize, f: &mut dyn FnMut(&ErrorPlan)) {
    fn rec(
        x: &CompositionMultiset,
        start: usize,
        left: usize,
        events: &mut Vec<ErrorEvent>,
        f: &mut dyn FnMut(&ErrorPlan),
    ) {
        f(&ErrorPlan::new(events.clone()));
        if left == 0 {
            return;
        }
        for size in start..=x.len() {
            for action in group_actions(x, size) {
                events.push(ErrorEvent { size, action });
                rec(x, size + 1, left - 1, events, f);
                events.pop();
            }
        }
    }
    rec(x, 1, max_events, &mut Vec::new(), f);
}

/// Number of plans [`for_each_plan`] visits.
fn count_plans(x: &CompositionMultiset, max_events: usize) -> u128 {
    // ways[e] = plans with e events over the sizes seen so far
    let mut ways = vec![0u128; max_events + 1];
    ways[0] = 1;
    for size in 1..=x.len() {
        let a = group_actions(x, size).len() as u128;
        for e in (1..=max_events).rev() {
            ways[e] += ways[e - 1] * a;
        }
    }
    ways.iter().sum()
}

fn case_seed(base: u64, msg: usize, plan: usize) -> u64 {
    // splitmix64 of the combined index
    let mut z = base ^ ((msg as u64) << 32 | plan as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs encode, compose, corrupt and decode over the chosen cases.
pub fn sweep<S: Scheme>(scheme: &S, mode: SweepMode) -> Result<SweepReport, OracleError> {
    let messages = match mode.messages {
        MessageMode::All => scheme.messages().ok_or(OracleError::NotEnumerable)?,
        MessageMode::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| scheme.random_message(&mut rng)).collect()
        }
    };
    let mut report = SweepReport {
        scheme: scheme.id(),
        params: scheme.describe(),
        mode: mode_text(&mode),
        total: 0,
        recovered: 0,
        failed: 0,
        detected: 0,
        silent: 0,
        max_bit_error: 0,
        first_failure: None,
    };
    let mut planned: u128 = 0;
    for (mi, msg) in messages.iter().enumerate() {
        let strings = scheme.encode(msg).map_err(OracleError::Encode)?;
        let x = multi_compositions(&strings).expect("encoder output is nonempty");
        let run = |plan: &ErrorPlan, report: &mut SweepReport| {
            let y = corrupt(&x, plan).expect("plans are valid for x");
            report.max_bit_error = report.max_bit_error.max(scheme.bit_errors(&y, &strings));
            let (verdict, decoded) = scheme.decode(&y);
            let correct = decoded.as_ref() == Some(msg);
            report.record(verdict, correct, || format!("message={msg:?} plan=[{}]", plan.to_string().trim().replace('\n', "; ")));
        };
        match mode.plans {
            PlanMode::Exhaustive { max_events } => {
                planned += count_plans(&x, max_events);
                if planned > MAX_SWEEP_CASES {
                    return Err(OracleError::SweepTooLarge(planned));
                }
                for_each_plan(&x, max_events, &mut |plan| run(plan, &mut report));
            }
            PlanMode::Random { count, max_events, seed } => {
                for pi in 0..count {
                    let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, mi, pi));
                    let events = if max_events == 0 { 0 } else { rng.random_range(1..=max_events) };
                    let plan = random_plan_with(&x, events.min(x.len()), &mut rng).expect("events <= n");
                    run(&plan, &mut report);
                }
            }
        }
    }
    Ok(report)
}
