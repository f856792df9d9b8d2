//! Parameter files and the text-level encode/decode used by the CLI.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bch::{BchCode, BinaryCode};
use crate::bits::BitString;
use crate::compositions::CompositionMultiset;
use crate::dominance::{is_suffix_dominant, Realization};
use crate::multi::{MultiError, PhiSpec};
use crate::oracle::{sweep, MultiScheme, OracleError, SweepMode, SweepReport};
use crate::single::{
    c1_decode, c1_membership, c2_decode, c2_encode, c3_constraints, c3_decode, c3_encode, c4_decode, c4_encode,
    C1Params, C2Params, C3Params, C4Params, Constraint, ReconError, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("unknown scheme {0:?}; expected c1, c2, c3, c4 or multi")]
    UnknownScheme(String),
    #[error("scheme {scheme} needs field `{field}`")]
    Missing { scheme: &'static str, field: &'static str },
    #[error("field `{field}` = {given} disagrees with the derived value {derived}")]
    Inconsistent { field: &'static str, given: u64, derived: u64 },
    #[error("unknown dominant realization {0:?}; expected enumerative or interleave")]
    Realization(String),
    #[error("{0}")]
    Invalid(String),
    #[error("parameter file: {0}")]
    Toml(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("{0}")]
    Bits(String),
    #[error("{0}")]
    Symbols(String),
    #[error("{0}")]
    Encode(String),
}

/// Contents of a parameter file. Unused fields are left out.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamFile {
    pub scheme: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    /// c1: errors that change a group's cardinality.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub erasures: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// multi: error capability of the BCH code each string is drawn from.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub good_t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominant: Option<String>,
}

fn need<T: Copy>(v: Option<T>, scheme: &'static str, field: &'static str) -> Result<T, ParamError> {
    v.ok_or(ParamError::Missing { scheme, field })
}

fn agree(field: &'static str, given: Option<usize>, derived: usize) -> Result<(), ParamError> {
    match given {
        Some(g) if g != derived => Err(ParamError::Inconsistent {
            field,
            given: g as u64,
            derived: derived as u64,
        }),
        _ => Ok(()),
    }
}

fn realization(s: Option<&str>) -> Result<Realization, ParamError> {
    match s.unwrap_or("enumerative") {
        "enumerative" => Ok(Realization::Enumerative),
        "interleave" => Ok(Realization::Interleave),
        other => Err(ParamError::Realization(other.into())),
    }
}

fn realization_name(r: Realization) -> &'static str {
    match r {
        Realization::Enumerative => "enumerative",
        Realization::Interleave => "interleave",
    }
}

fn bch_degree(scheme: &'static str, len: usize) -> Result<u32, ParamError> {
    if !(len + 1).is_power_of_two() || len < 3 {
        return Err(ParamError::Invalid(format!("{scheme}: code length {len} is not 2^m - 1")));
    }
    Ok((len + 1).trailing_zeros())
}

fn invalid(e: impl std::fmt::Display) -> ParamError {
    ParamError::Invalid(e.to_string())
}

impl ParamFile {
    pub fn parse(text: &str) -> Result<Self, ParamError> {
        toml::from_str(text).map_err(|e| ParamError::Toml(e.to_string()))
    }

    /// Builds the scheme, checking every given field against the values it
    /// determines.
    pub fn build(&self) -> Result<BuiltScheme, ParamError> {
        match self.scheme.as_str() {
            "c1" => {
                let n = need(self.n, "c1", "n")?;
                let p = need(self.p, "c1", "p")?;
                let t = need(self.t, "c1", "t")?;
                let params = C1Params::with_erasures(p, n, t, self.erasures.unwrap_or(0)).map_err(invalid)?;
                Ok(BuiltScheme::C1(params))
            }
            "c2" => {
                let n1 = need(self.n1, "c2", "n1")?;
                let p = need(self.p, "c2", "p")?;
                let t = need(self.t, "c2", "t")?;
                let params = C2Params::new(p, n1, t).map_err(invalid)?;
                agree("n", self.n, params.length())?;
                Ok(BuiltScheme::C2(params))
            }
            "c3" => {
                let n1 = need(self.n1, "c3", "n1")?;
                let n2 = need(self.n2, "c3", "n2")?;
                let p = need(self.p, "c3", "p")?;
                let t = need(self.t, "c3", "t")?;
                let r = realization(self.dominant.as_deref())?;
                let params = C3Params::new(n1, n2, t, p, r).map_err(invalid)?;
                agree("n", self.n, params.length())?;
                Ok(BuiltScheme::C3(params))
            }
            "c4" => {
                let n2 = need(self.n2, "c4", "n2")?;
                let t = need(self.t, "c4", "t")?;
                let r = realization(self.dominant.as_deref())?;
                let params = C4Params::with_bch(bch_degree("c4", n2)?, t, r).map_err(invalid)?;
                agree("n1", self.n1, params.inner_length())?;
                agree("n", self.n, params.length())?;
                Ok(BuiltScheme::C4(params))
            }
            "multi" => {
                let h = need(self.h, "multi", "h")?;
                let k = need(self.k, "multi", "k")?;
                let t = self.t.unwrap_or(0);
                let scheme = match self.good_t {
                    Some(gt) => {
                        let m = bch_degree("multi", k)?;
                        let code = BchCode::build_relaxed(m, gt).map_err(invalid)?;
                        if code.radius() < 4 * t {
                            return Err(ParamError::Invalid(format!(
                                "multi: code radius {} below 4t = {}",
                                code.radius(),
                                4 * t
                            )));
                        }
                        MultiScheme {
                            spec: PhiSpec::new(h, k).map_err(invalid)?,
                            good: Some(Arc::new(code)),
                            t,
                        }
                    }
                    None if t > 0 => return Err(ParamError::Missing { scheme: "multi", field: "good_t" }),
                    None => MultiScheme::free(PhiSpec::new(h, k).map_err(invalid)?),
                };
                agree("n", self.n, scheme.spec.length())?;
                Ok(BuiltScheme::Multi(scheme))
            }
            other => Err(ParamError::UnknownScheme(other.into())),
        }
    }

    /// The file with every derived field filled in and unused ones dropped.
    pub fn canonical(&self) -> Result<ParamFile, ParamError> {
        let built = self.build()?;
        let mut out = ParamFile {
            scheme: self.scheme.clone(),
            n: Some(built.length()),
            ..Default::default()
        };
        match &built {
            BuiltScheme::C1(c) => {
                out.p = Some(c.grs().field().modulus());
                out.t = Some(c.budget());
                out.erasures = Some(c.erasure_budget());
            }
            BuiltScheme::C2(c) => {
                out.n1 = Some(c.inner_length());
                out.p = Some(c.prime());
                out.t = Some(c.budget());
            }
            BuiltScheme::C3(c) => {
                let (n1, n2, t, p) = c.dims();
                (out.n1, out.n2, out.t, out.p) = (Some(n1), Some(n2), Some(t), Some(p));
                out.dominant = Some(realization_name(c.dominant().realization()).into());
            }
            BuiltScheme::C4(c) => {
                out.n1 = Some(c.inner_length());
                out.n2 = Some(c.code_length());
                out.t = Some(c.budget());
                out.dominant = Some(realization_name(c.dominant().realization()).into());
            }
            BuiltScheme::Multi(m) => {
                out.h = Some(m.spec.h);
                out.k = Some(m.spec.k);
                out.t = Some(m.t);
                out.good_t = self.good_t;
            }
        }
        Ok(out)
    }

    /// Canonical TOML, followed by the constraint report as comments.
    pub fn to_canonical_text(&self) -> Result<String, ParamError> {
        let canon = self.canonical()?;
        let mut text = toml::to_string(&canon).map_err(|e| ParamError::Toml(e.to_string()))?;
        if canon.scheme == "c3" {
            let (n1, n2, t, p) = (canon.n1.unwrap(), canon.n2.unwrap(), canon.t.unwrap(), canon.p.unwrap());
            for c in c3_constraints(n1, n2, t, p) {
                writeln!(text, "{}", constraint_line(&c)).unwrap();
            }
        }
        Ok(text)
    }
}

/// `# <name>: <detail> [ok|FAILED|warning]`
pub fn constraint_line(c: &Constraint) -> String {
    let status = match (c.holds, c.required) {
        (true, _) => "ok",
        (false, true) => "FAILED",
        (false, false) => "warning",
    };
    format!("# {}: {} [{}]", c.name, c.detail, status)
}

/// Result of decoding a multiset at the text level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub verdict: Verdict,
    pub message: Option<String>,
    /// One line per string.
    pub codeword: Option<Vec<String>>,
    pub consumed: Vec<usize>,
    pub error: Option<String>,
}

impl std::fmt::Display for DecodeOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "verdict={}", self.verdict)?;
        if let Some(m) = &self.message {
            writeln!(f, "message={m}")?;
        }
        if let Some(cw) = &self.codeword {
            writeln!(f, "codeword={}", cw.join(" "))?;
        }
        if !self.consumed.is_empty() {
            let sizes: Vec<String> = self.consumed.iter().map(|s| s.to_string()).collect();
            writeln!(f, "consumed={}", sizes.join(","))?;
        }
        if let Some(e) = &self.error {
            writeln!(f, "error={e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum BuiltScheme {
    C1(C1Params),
    C2(C2Params),
    C3(C3Params),
    C4(C4Params),
    Multi(MultiScheme),
}

fn parse_bits(s: &str) -> Result<BitString, InputError> {
    s.trim().parse::<BitString>().map_err(|e| InputError::Bits(e.to_string()))
}

/// Whitespace-separated bit strings, one per record.
fn parse_records(s: &str) -> Result<Vec<BitString>, InputError> {
    s.split_whitespace().map(parse_bits).collect()
}

fn fail<M>(r: Result<crate::single::Reconstruction<M>, ReconError>, show: impl Fn(&M) -> String) -> DecodeOutcome {
    let verdict = Verdict::of(&r);
    match r {
        Ok(rec) => DecodeOutcome {
            verdict,
            message: Some(show(&rec.message)),
            codeword: Some(vec![rec.codeword.to_string()]),
            consumed: rec.consumed,
            error: None,
        },
        Err(e) => DecodeOutcome {
            verdict,
            message: None,
            codeword: None,
            consumed: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

fn symbols_text(s: &[u64]) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

impl BuiltScheme {
    pub fn id(&self) -> &'static str {
        match self {
            BuiltScheme::C1(_) => "c1",
            BuiltScheme::C2(_) => "c2",
            BuiltScheme::C3(_) => "c3",
            BuiltScheme::C4(_) => "c4",
            BuiltScheme::Multi(_) => "multi",
        }
    }

    /// Length of each coded string.
    pub fn length(&self) -> usize {
        match self {
            BuiltScheme::C1(c) => c.length(),
            BuiltScheme::C2(c) => c.length(),
            BuiltScheme::C3(c) => c.length(),
            BuiltScheme::C4(c) => c.length(),
            BuiltScheme::Multi(m) => m.spec.length(),
        }
    }

    pub fn budget(&self) -> usize {
        match self {
            BuiltScheme::C1(c) => c.budget(),
            BuiltScheme::C2(c) => c.budget(),
            BuiltScheme::C3(c) => c.budget(),
            BuiltScheme::C4(c) => c.budget(),
            BuiltScheme::Multi(m) => m.t,
        }
    }

    /// Encodes a text message into one bit string per line.
    ///
    /// c1 takes the codeword itself, c2 comma-separated integers, c3 and c4
    /// a bit string, and multi `h` whitespace-separated bit strings (length
    /// `k`, or the code dimension when a good code is set).
    pub fn encode_text(&self, msg: &str) -> Result<Vec<BitString>, InputError> {
        let enc = |e: &dyn std::fmt::Display| InputError::Encode(e.to_string());
        match self {
            BuiltScheme::C1(c) => {
                let x = parse_bits(msg)?;
                if !c1_membership(&x, c) || !is_suffix_dominant(&x) {
                    return Err(InputError::Encode(
                        "string is not a suffix-dominant member of the code".into(),
                    ));
                }
                Ok(vec![x])
            }
            BuiltScheme::C2(c) => {
                let symbols = msg
                    .trim()
                    .split(',')
                    .map(|s| s.trim().parse::<u64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| InputError::Symbols(format!("bad symbol list {msg:?}: {e}")))?;
                c2_encode(&symbols, c).map(|x| vec![x]).map_err(|e| enc(&e))
            }
            BuiltScheme::C3(c) => c3_encode(&parse_bits(msg)?, c).map(|x| vec![x]).map_err(|e| enc(&e)),
            BuiltScheme::C4(c) => c4_encode(&parse_bits(msg)?, c).map(|x| vec![x]).map_err(|e| enc(&e)),
            BuiltScheme::Multi(m) => {
                let mut zs = parse_records(msg)?;
                if let Some(code) = &m.good {
                    zs = zs
                        .iter()
                        .map(|z| code.encode(z))
                        .collect::<Result<_, _>>()
                        .map_err(|e| enc(&e))?;
                }
                crate::multi::phi_encode(&zs, &m.spec).map_err(|e| enc(&e))
            }
        }
    }

    pub fn decode(&self, y: &CompositionMultiset) -> DecodeOutcome {
        match self {
            BuiltScheme::C1(c) => fail(c1_decode(y, c), |m| m.to_string()),
            BuiltScheme::C2(c) => fail(c2_decode(y, c), |m| symbols_text(m)),
            BuiltScheme::C3(c) => fail(c3_decode(y, c), |m| m.to_string()),
            BuiltScheme::C4(c) => fail(c4_decode(y, c), |m| m.to_string()),
            BuiltScheme::Multi(m) => {
                let r = match &m.good {
                    Some(code) => crate::multi::multi_decode_errors(y, &m.spec, code.as_ref(), m.t),
                    None => crate::multi::multi_decode_free(y, &m.spec),
                };
                match r {
                    Ok(d) => {
                        let messages: Vec<String> = match &m.good {
                            Some(code) => d
                                .messages
                                .iter()
                                .map(|z| code.decode(z).map(|(_, msg)| msg.to_string()).unwrap_or_else(|_| z.to_string()))
                                .collect(),
                            None => d.messages.iter().map(|z| z.to_string()).collect(),
                        };
                        DecodeOutcome {
                            verdict: Verdict::Recovered,
                            message: Some(messages.join(" ")),
                            codeword: Some(d.codewords.iter().map(|c| c.to_string()).collect()),
                            consumed: d.consumed,
                            error: None,
                        }
                    }
                    Err(e) => DecodeOutcome {
                        verdict: match e {
                            MultiError::Mismatch { .. } => Verdict::DetectedMismatch,
                            _ => Verdict::Failed,
                        },
                        message: None,
                        codeword: None,
                        consumed: Vec::new(),
                        error: Some(e.to_string()),
                    },
                }
            }
        }
    }

    pub fn sweep(&self, mode: SweepMode) -> Result<SweepReport, OracleError> {
        match self {
            BuiltScheme::C1(c) => sweep(c, mode),
            BuiltScheme::C2(c) => sweep(c, mode),
            BuiltScheme::C3(c) => sweep(c, mode),
            BuiltScheme::C4(c) => sweep(c, mode),
            BuiltScheme::Multi(m) => sweep(m, mode),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compositions::multi_compositions;

    fn file(text: &str) -> ParamFile {
        ParamFile::parse(text).unwrap()
    }

    #[test]
    fn c3_report() {
        let text = file("scheme = \"c3\"\nn1 = 30\nn2 = 63\np = 31\nt = 2\n").to_canonical_text().unwrap();
        assert!(text.starts_with("scheme = \"c3\"\nn = 156\nn1 = 30\nn2 = 63\np = 31\nt = 2\n"));
        assert!(text.contains("51 > 2t*ceil(log2 p) = 20 [ok]"));
        assert!(text.contains("2t - 1 = 3 <= 2^ceil(m/2) + 1 = 9 [ok]"));
        // comments keep the file loadable
        assert_eq!(file(&text).canonical().unwrap(), file(&text));
    }

    #[test]
    fn canonical_is_idempotent() {
        for text in [
            "scheme = \"c1\"\nn = 4\np = 5\nt = 1\n",
            "scheme = \"c2\"\nn1 = 4\np = 5\nt = 1\n",
            "scheme = \"c4\"\nn2 = 15\nt = 1\n",
            "scheme = \"multi\"\nh = 2\nk = 6\n",
            "scheme = \"multi\"\nh = 2\nk = 31\nt = 1\ngood_t = 6\n",
        ] {
            let once = file(text).to_canonical_text().unwrap();
            assert_eq!(file(&once).to_canonical_text().unwrap(), once);
        }
        let c4 = file("scheme = \"c4\"\nn2 = 15\nt = 1\n").canonical().unwrap();
        assert_eq!((c4.n1, c4.n), (Some(7), Some(23)));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(ParamFile::parse("scheme = \"c9\"\n").unwrap().build(), Err(ParamError::UnknownScheme(_))));
        assert!(matches!(file("scheme = \"c2\"\np = 5\nt = 1\n").build(), Err(ParamError::Missing { .. })));
        assert!(matches!(
            file("scheme = \"c4\"\nn2 = 15\nt = 1\nn = 24\n").build(),
            Err(ParamError::Inconsistent { field: "n", .. })
        ));
        assert!(ParamFile::parse("scheme = \"c1\"\nbogus = 1\n").is_err());
        assert!(file("scheme = \"c3\"\nn1 = 30\nn2 = 63\np = 31\nt = 5\n").build().is_err());
    }

    #[test]
    fn text_round_trips() {
        let cases = [
            ("scheme = \"c2\"\nn1 = 4\np = 5\nt = 1\n", "3,1"),
            ("scheme = \"c4\"\nn2 = 15\nt = 1\n", "101101"),
            ("scheme = \"multi\"\nh = 2\nk = 6\n", "101010 001011"),
            ("scheme = \"multi\"\nh = 2\nk = 31\nt = 1\ngood_t = 6\n", "101101 000111"),
        ];
        for (params, msg) in cases {
            let s = file(params).build().unwrap();
            let x = multi_compositions(&s.encode_text(msg).unwrap()).unwrap();
            let out = s.decode(&x);
            assert_eq!(out.verdict, Verdict::Recovered, "{params}");
            assert_eq!(out.message.as_deref(), Some(msg));
        }
    }

    #[test]
    fn c1_accepts_only_members() {
        let s = file("scheme = \"c1\"\nn = 4\np = 5\nt = 1\n").build().unwrap();
        assert!(s.encode_text("0000").is_ok());
        assert!(s.encode_text("0001").is_err());
    }

    #[test]
    fn decode_outcome_text() {
        let s = file("scheme = \"c2\"\nn1 = 4\np = 5\nt = 1\n").build().unwrap();
        let bad = s.decode(&CompositionMultiset::empty(5));
        assert_eq!(bad.verdict, Verdict::Failed);
        assert!(bad.to_string().starts_with("verdict=failed\nerror="));
    }
}
