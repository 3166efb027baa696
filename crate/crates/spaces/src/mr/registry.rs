//! The injection σ on finite sequences of successive sets, realised as an
//! append-only log.
//!
//! On the first query of a prefix `P` the registry assigns the least value
//! `v ≥ max #E + 1 + rank` not used before, `rank` being the number of
//! entries already present. Each assignment is appended to the log file as
//! one JSON line, so replaying the file reproduces the registry exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use jsm_core::Line;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::SpaceError;

/// A run of consecutive positions on one line.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineSet {
    pub line: Line,
    pub start: BigUint,
    pub len: BigUint,
}

impl LineSet {
    pub fn new(line: Line, start: impl Into<BigUint>, len: impl Into<BigUint>) -> LineSet {
        LineSet { line, start: start.into(), len: len.into() }
    }

    pub fn end(&self) -> BigUint {
        &self.start + &self.len - 1u32
    }

    fn natural(&self, pos: &BigUint) -> BigUint {
        match self.line {
            Line::N1 => pos * 2u32 - 1u32,
            Line::N2 => pos * 2u32,
        }
    }

    pub fn first_natural(&self) -> BigUint {
        self.natural(&self.start)
    }

    pub fn last_natural(&self) -> BigUint {
        self.natural(&self.end())
    }

    fn key(&self) -> String {
        format!("{}:{}+{}", self.line.number(), self.start, self.len)
    }

    fn parse(s: &str) -> Option<LineSet> {
        let (line, rest) = s.split_once(':')?;
        let (start, len) = rest.split_once('+')?;
        let line = Line::from_number(line.parse().ok()?)?;
        let start: BigUint = start.parse().ok()?;
        let len: BigUint = len.parse().ok()?;
        (!start.is_zero() && !len.is_zero()).then_some(LineSet { line, start, len })
    }
}

/// Canonical serialisation of a prefix, e.g. `1:1+1|2:1+1`.
pub fn prefix_key(sets: &[LineSet]) -> String {
    sets.iter().map(LineSet::key).collect::<Vec<_>>().join("|")
}

pub fn parse_prefix_key(key: &str) -> Option<Vec<LineSet>> {
    key.split('|').map(LineSet::parse).collect()
}

pub fn is_successive(sets: &[LineSet]) -> bool {
    !sets.is_empty() && sets.windows(2).all(|w| w[0].last_natural() < w[1].first_natural())
}

#[derive(Debug, Default, Clone)]
pub struct SigmaRegistry {
    values: BTreeMap<String, BigUint>,
    order: Vec<String>,
    used: BTreeSet<BigUint>,
    path: Option<PathBuf>,
}

impl SigmaRegistry {
    pub fn in_memory() -> SigmaRegistry {
        SigmaRegistry::default()
    }

    /// Replays the log at `path` (if present) and appends new entries to it.
    pub fn open(path: &Path) -> Result<SigmaRegistry, SpaceError> {
        let mut reg = match std::fs::read_to_string(path) {
            Ok(text) => SigmaRegistry::replay(&text)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => SigmaRegistry::default(),
            Err(e) => return Err(SpaceError::RegistryIo(format!("{}: {e}", path.display()))),
        };
        reg.path = Some(path.to_path_buf());
        Ok(reg)
    }

    pub fn replay(text: &str) -> Result<SigmaRegistry, SpaceError> {
        let mut reg = SigmaRegistry::default();
        for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let bad = |m: &str| SpaceError::Registry(format!("line {}: {m}", n + 1));
            let v: Value = serde_json::from_str(line).map_err(|e| bad(&e.to_string()))?;
            let key = v.get("prefix").and_then(Value::as_str).ok_or_else(|| bad("missing prefix"))?;
            let sigma: BigUint = v
                .get("sigma")
                .and_then(Value::as_str)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("missing sigma"))?;
            let sets = parse_prefix_key(key).ok_or_else(|| bad("malformed prefix"))?;
            if !is_successive(&sets) || prefix_key(&sets) != key {
                return Err(bad("prefix is not a canonical sequence of successive sets"));
            }
            if let Some(old) = reg.values.get(key) {
                if *old != sigma {
                    return Err(bad("prefix assigned twice"));
                }
                continue;
            }
            let max = sets.iter().map(|s| s.len.clone()).max().unwrap_or_default();
            if sigma <= max {
                return Err(bad("value does not exceed the largest set"));
            }
            if !reg.used.insert(sigma.clone()) {
                return Err(bad("value reused"));
            }
            reg.values.insert(key.to_string(), sigma);
            reg.order.push(key.to_string());
        }
        Ok(reg)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn get(&self, sets: &[LineSet]) -> Option<&BigUint> {
        self.values.get(&prefix_key(sets))
    }

    pub fn get_key(&self, key: &str) -> Option<&BigUint> {
        self.values.get(key)
    }

    /// Keys in insertion order.
    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(String::as_str)
    }

    /// σ of `sets`, assigning a fresh value on first use.
    pub fn sigma(&mut self, sets: &[LineSet]) -> Result<BigUint, SpaceError> {
        if !is_successive(sets) {
            return Err(SpaceError::Registry("σ is only defined on successive sets".into()));
        }
        let key = prefix_key(sets);
        if let Some(v) = self.values.get(&key) {
            return Ok(v.clone());
        }
        let max = sets.iter().map(|s| s.len.clone()).max().unwrap_or_default();
        let mut v = max + BigUint::one() + BigUint::from(self.order.len());
        while self.used.contains(&v) {
            v += 1u32;
        }
        if let Some(path) = &self.path {
            let line = json!({ "prefix": key, "sigma": v.to_string() }).to_string();
            let mut f = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| SpaceError::RegistryIo(format!("{}: {e}", path.display())))?;
            writeln!(f, "{line}").map_err(|e| SpaceError::RegistryIo(e.to_string()))?;
        }
        self.used.insert(v.clone());
        self.values.insert(key.clone(), v.clone());
        self.order.push(key);
        Ok(v)
    }

    /// The log as it would be written to disk.
    pub fn log_text(&self) -> String {
        self.order
            .iter()
            .map(|k| json!({ "prefix": k, "sigma": self.values[k].to_string() }).to_string() + "\n")
            .collect()
    }
}
