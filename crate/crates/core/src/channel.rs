//! Budgeted composition errors.
//!
//! An [`ErrorPlan`] holds at most one event per size group, so applying it
//! to `X` yields a multiset at distance exactly `plan.len()`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::compositions::{CompositionMultiset, CompositionPair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChannelError {
    #[error("size {0} touched more than once")]
    DuplicateSize(usize),
    #[error("size {size} outside [1, {n}]")]
    SizeOutOfRange { size: usize, n: usize },
    #[error("event at size {0} leaves its group unchanged")]
    NoOp(usize),
    #[error("no pair of mass {mass} at size {size}")]
    MassAbsent { size: usize, mass: usize },
    #[error("pair ({a},{b}) is malformed for size {size}")]
    MalformedPair { a: usize, b: usize, size: usize },
    #[error("budget {t} exceeds length {n}")]
    BudgetTooLarge { t: usize, n: usize },
    #[error("plan line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    Substitute { old: usize, new: usize },
    Insert(CompositionPair),
    Delete(usize),
    ReplaceGroup(Vec<CompositionPair>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ErrorEvent {
    pub size: usize,
    pub action: Action,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ErrorPlan {
    pub events: Vec<ErrorEvent>,
}

impl ErrorPlan {
    pub fn new(events: Vec<ErrorEvent>) -> Self {
        Self { events }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.events.iter().map(|e| e.size).collect()
    }
}

fn check_pair(p: &CompositionPair, size: usize) -> Result<(), ChannelError> {
    if p.size() != size {
        return Err(ChannelError::MalformedPair {
            a: p.zeros,
            b: p.ones,
            size,
        });
    }
    Ok(())
}

/// Applies `plan` to `x`.
pub fn corrupt(x: &CompositionMultiset, plan: &ErrorPlan) -> Result<CompositionMultiset, ChannelError> {
    let n = x.len();
    let mut seen = BTreeSet::new();
    let mut y = x.clone();
    for ev in &plan.events {
        let j = ev.size;
        if j == 0 || j > n {
            return Err(ChannelError::SizeOutOfRange { size: j, n });
        }
        if !seen.insert(j) {
            return Err(ChannelError::DuplicateSize(j));
        }
        match &ev.action {
            Action::Substitute { old, new } => {
                if old == new {
                    return Err(ChannelError::NoOp(j));
                }
                if *new > j {
                    return Err(ChannelError::MalformedPair {
                        a: j.saturating_sub(*new),
                        b: *new,
                        size: j,
                    });
                }
                if !y.remove(j, *old) {
                    return Err(ChannelError::MassAbsent { size: j, mass: *old });
                }
                y.insert(CompositionPair::with_mass(j, *new)).expect("size checked");
            }
            Action::Insert(p) => {
                check_pair(p, j)?;
                y.insert(*p).expect("size checked");
            }
            Action::Delete(mass) => {
                if !y.remove(j, *mass) {
                    return Err(ChannelError::MassAbsent { size: j, mass: *mass });
                }
            }
            Action::ReplaceGroup(pairs) => {
                for p in pairs {
                    check_pair(p, j)?;
                }
                y.set_group(j, pairs.clone()).expect("pairs checked");
                if y.group(j) == x.group(j) {
                    return Err(ChannelError::NoOp(j));
                }
            }
        }
    }
    Ok(y)
}

/// Every single-event action at `size` drawn from the bounded alphabet:
/// substitute each distinct present mass by any other mass in `0..=size`,
/// delete each distinct present mass, insert each mass in `0..=size`.
pub fn group_actions(x: &CompositionMultiset, size: usize) -> Vec<Action> {
    let mut present = x.masses(size);
    present.dedup();
    let mut out = Vec::new();
    for &old in &present {
        for new in (0..=size).filter(|&m| m != old) {
            out.push(Action::Substitute { old, new });
        }
    }
    for &m in &present {
        out.push(Action::Delete(m));
    }
    for m in 0..=size {
        out.push(Action::Insert(CompositionPair::with_mass(size, m)));
    }
    out
}

/// A plan touching `t` distinct sizes, a deterministic function of
/// `(x, t, seed)`.
pub fn random_plan(x: &CompositionMultiset, t: usize, seed: u64) -> Result<ErrorPlan, ChannelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_plan_with(x, t, &mut rng)
}

pub fn random_plan_with<R: Rng>(x: &CompositionMultiset, t: usize, rng: &mut R) -> Result<ErrorPlan, ChannelError> {
    let n = x.len();
    if t > n {
        return Err(ChannelError::BudgetTooLarge { t, n });
    }
    let mut sizes: Vec<usize> = rand::seq::index::sample(rng, n, t).into_iter().map(|i| i + 1).collect();
    sizes.sort_unstable();
    let events = sizes
        .into_iter()
        .map(|j| {
            let present = x.masses(j);
            let kind = rng.random_range(0..3u8);
            let action = match (kind, present.choose(rng)) {
                (0, Some(&old)) => {
                    let mut new = rng.random_range(0..j);
                    if new >= old {
                        new += 1;
                    }
                    Action::Substitute { old, new }
                }
                (1, Some(&mass)) => Action::Delete(mass),
                _ => Action::Insert(CompositionPair::with_mass(j, rng.random_range(0..=j))),
            };
            ErrorEvent { size: j, action }
        })
        .collect();
    Ok(ErrorPlan { events })
}

impl fmt::Display for ErrorEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.size)?;
        match &self.action {
            Action::Substitute { old, new } => write!(f, "substitute {old} {new}"),
            Action::Insert(p) => write!(f, "insert {p}"),
            Action::Delete(m) => write!(f, "delete {m}"),
            Action::ReplaceGroup(pairs) => {
                f.write_str("replace")?;
                for p in pairs {
                    write!(f, " {p}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for ErrorPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.events {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for ErrorPlan {
    type Err = ChannelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut events = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| ChannelError::Parse {
                line: i + 1,
                msg: format!("{msg}: {line:?}"),
            };
            let num = |tok: Option<&str>| -> Result<usize, ChannelError> {
                tok.and_then(|t| t.parse().ok()).ok_or_else(|| err("expected integer"))
            };
            let pair = |tok: &str| -> Result<CompositionPair, ChannelError> {
                tok.split_once(',')
                    .and_then(|(a, b)| Some(CompositionPair::new(a.parse().ok()?, b.parse().ok()?)))
                    .ok_or_else(|| err("expected pair a,b"))
            };
            let mut toks = line.split_whitespace();
            let size = num(toks.next())?;
            let action = match toks.next() {
                Some("substitute") => Action::Substitute {
                    old: num(toks.next())?,
                    new: num(toks.next())?,
                },
                Some("insert") => Action::Insert(pair(toks.next().ok_or_else(|| err("missing pair"))?)?),
                Some("delete") => Action::Delete(num(toks.next())?),
                Some("replace") => {
                    let pairs = toks.by_ref().map(pair).collect::<Result<_, _>>()?;
                    Action::ReplaceGroup(pairs)
                }
                _ => return Err(err("unknown action")),
            };
            if toks.next().is_some() {
                return Err(err("trailing tokens"));
            }
            events.push(ErrorEvent { size, action });
        }
        Ok(ErrorPlan { events })
    }
}
