//! JSON encoding of vectors.
//!
//! ```text
//! {"scheme":"natural","entries":[[1,"1/1"],[2,"-1/1"]]}
//! {"scheme":"mrline","runs":[[1,1,"256","1/16"]]}
//! ```
//!
//! Writers are canonical: compact, entries in index order, zeros dropped,
//! rationals reduced.

use std::path::Path;

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::error::CoreError;
use crate::index::{Index, IndexScheme, Line, Node, Part};
use crate::num::{fmt_rational, parse_rational, Q};
use crate::rle::{Run, RleVec};
use crate::vec::FinVec;

fn doc_err(msg: impl Into<String>) -> CoreError {
    CoreError::Document(msg.into())
}

pub fn scheme_from_json(v: &Value) -> Result<IndexScheme, CoreError> {
    match v {
        Value::String(s) => match s.as_str() {
            "natural" => Ok(IndexScheme::Natural),
            "dyadic" => Ok(IndexScheme::Dyadic),
            "mixed" => Ok(IndexScheme::MixedSum),
            "mrline" => Ok(IndexScheme::MrLine),
            other => Err(doc_err(format!("unknown scheme {other:?}"))),
        },
        Value::Object(m) => {
            let l = m
                .get("interleaved")
                .and_then(Value::as_u64)
                .filter(|l| *l >= 1 && *l <= u32::MAX as u64)
                .ok_or_else(|| doc_err("scheme object must be {\"interleaved\": l}"))?;
            Ok(IndexScheme::Interleaved(l as u32))
        }
        _ => Err(doc_err("scheme must be a string or object")),
    }
}

pub fn scheme_to_json(s: IndexScheme) -> Value {
    match s {
        IndexScheme::Natural => json!("natural"),
        IndexScheme::Dyadic => json!("dyadic"),
        IndexScheme::Interleaved(l) => json!({ "interleaved": l }),
        IndexScheme::MixedSum => json!("mixed"),
        IndexScheme::MrLine => json!("mrline"),
    }
}

pub fn index_from_json(scheme: IndexScheme, v: &Value) -> Result<Index, CoreError> {
    let malformed = || CoreError::MalformedIndex { index: v.to_string(), scheme: scheme.to_string() };
    let idx = match scheme {
        IndexScheme::Natural | IndexScheme::MrLine => Index::Nat(v.as_u64().ok_or_else(malformed)?),
        IndexScheme::Dyadic => {
            Index::Node(v.as_str().and_then(Node::parse).ok_or_else(malformed)?)
        }
        IndexScheme::Interleaved(_) => {
            let a = v.as_array().filter(|a| a.len() == 2).ok_or_else(malformed)?;
            let i = a[0].as_u64().filter(|i| *i <= u32::MAX as u64).ok_or_else(malformed)?;
            let n = a[1].as_u64().ok_or_else(malformed)?;
            Index::pair(i as u32, n)
        }
        IndexScheme::MixedSum => {
            let a = v.as_array().filter(|a| a.len() == 4).ok_or_else(malformed)?;
            let small = |x: &Value| x.as_u64().filter(|v| *v <= u32::MAX as u64).map(|v| v as u32);
            let n = small(&a[0]).ok_or_else(malformed)?;
            let part = match a[1].as_str() {
                Some("X") => Part::X,
                Some("Y") => Part::Y,
                _ => return Err(malformed()),
            };
            let slot = small(&a[2]).ok_or_else(malformed)?;
            let inner = a[3].as_u64().ok_or_else(malformed)?;
            Index::mixed(n, part, slot, inner)
        }
    };
    idx.validate(scheme)?;
    Ok(idx)
}

pub fn index_to_json(idx: &Index) -> Value {
    match idx {
        Index::Nat(n) => json!(n),
        Index::Node(s) => json!(s.as_str()),
        Index::Pair { n, i } => json!([i, n]),
        Index::Mixed { n, part, slot, inner } => {
            let p = match part {
                Part::X => "X",
                Part::Y => "Y",
            };
            json!([n, p, slot, inner])
        }
    }
}

fn coeff_from_json(v: &Value) -> Result<Q, CoreError> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => parse_rational(&n.to_string()),
        _ => Err(doc_err(format!("coefficient {v} must be a \"p/q\" string"))),
    }
}

fn entries_from_json(scheme: IndexScheme, v: Option<&Value>) -> Result<Vec<(Index, Q)>, CoreError> {
    let Some(v) = v else { return Ok(Vec::new()) };
    let arr = v.as_array().ok_or_else(|| doc_err("entries must be an array"))?;
    arr.iter()
        .map(|e| {
            let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| doc_err("entry must be [index, coeff]"))?;
            Ok((index_from_json(scheme, &pair[0])?, coeff_from_json(&pair[1])?))
        })
        .collect()
}

/// Either kind of vector document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VecDoc {
    Fin(FinVec),
    Rle(RleVec),
}

impl VecDoc {
    pub fn scheme(&self) -> IndexScheme {
        match self {
            VecDoc::Fin(v) => v.scheme(),
            VecDoc::Rle(_) => IndexScheme::MrLine,
        }
    }
}

fn big_from_json(v: &Value) -> Result<BigUint, CoreError> {
    match v {
        Value::Number(n) => n.as_u64().map(BigUint::from).ok_or_else(|| doc_err(format!("bad count {n}"))),
        Value::String(s) => s.parse().map_err(|_| doc_err(format!("bad count {s:?}"))),
        _ => Err(doc_err("count must be an integer or decimal string")),
    }
}

fn big_to_json(b: &BigUint) -> Value {
    match u64::try_from(b) {
        Ok(v) => json!(v),
        Err(_) => json!(b.to_string()),
    }
}

pub fn doc_from_value(v: &Value) -> Result<VecDoc, CoreError> {
    let obj = v.as_object().ok_or_else(|| doc_err("document must be an object"))?;
    let scheme = scheme_from_json(obj.get("scheme").ok_or_else(|| doc_err("missing scheme"))?)?;
    let entries = entries_from_json(scheme, obj.get("entries"))?;
    let Some(runs) = obj.get("runs") else {
        return Ok(VecDoc::Fin(FinVec::from_entries(scheme, entries)?));
    };
    if scheme != IndexScheme::MrLine {
        return Err(doc_err("runs are only allowed under the mrline scheme"));
    }
    let arr = runs.as_array().ok_or_else(|| doc_err("runs must be an array"))?;
    let mut out = Vec::with_capacity(arr.len() + entries.len());
    for r in arr {
        let r = r.as_array().filter(|r| r.len() == 4).ok_or_else(|| doc_err("run must be [line, start, len, coeff]"))?;
        let line = r[0].as_u64().and_then(Line::from_number).ok_or_else(|| doc_err("line must be 1 or 2"))?;
        out.push(Run { line, start: big_from_json(&r[1])?, len: big_from_json(&r[2])?, coeff: coeff_from_json(&r[3])? });
    }
    let singles = FinVec::from_entries(scheme, entries)?;
    let extra = RleVec::from_finvec(&singles)?;
    out.extend(extra.runs().iter().cloned());
    Ok(VecDoc::Rle(RleVec::new(out)?))
}

pub fn doc_read(text: &str) -> Result<VecDoc, CoreError> {
    let v: Value = serde_json::from_str(text).map_err(|e| doc_err(e.to_string()))?;
    doc_from_value(&v)
}

pub fn doc_read_path(path: &Path) -> Result<VecDoc, CoreError> {
    let text = std::fs::read_to_string(path).map_err(|e| doc_err(format!("{}: {e}", path.display())))?;
    doc_read(&text)
}

/// Reads a sparse vector; run documents are expanded when small enough.
pub fn vec_read(text: &str) -> Result<FinVec, CoreError> {
    match doc_read(text)? {
        VecDoc::Fin(v) => Ok(v),
        VecDoc::Rle(r) => r.to_finvec(),
    }
}

pub fn vec_to_value(v: &FinVec) -> Value {
    let entries: Vec<Value> = v.iter().map(|(i, c)| json!([index_to_json(i), fmt_rational(c)])).collect();
    json!({ "scheme": scheme_to_json(v.scheme()), "entries": entries })
}

pub fn vec_write(v: &FinVec) -> String {
    vec_to_value(v).to_string()
}

pub fn rle_to_value(r: &RleVec) -> Value {
    let runs: Vec<Value> = r
        .runs()
        .iter()
        .map(|run| json!([run.line.number(), big_to_json(&run.start), run.len.to_string(), fmt_rational(&run.coeff)]))
        .collect();
    json!({ "scheme": "mrline", "runs": runs })
}

pub fn rle_write(r: &RleVec) -> String {
    rle_to_value(r).to_string()
}

pub fn doc_write(d: &VecDoc) -> String {
    match d {
        VecDoc::Fin(v) => vec_write(v),
        VecDoc::Rle(r) => rle_write(r),
    }
}
