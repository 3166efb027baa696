use jsm_core::io::vec_to_value;
use jsm_core::FinVec;
use serde_json::{json, Value};

use crate::gap::{GapValue, Weights};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeGap {
    pub label: String,
    pub gap: GapValue,
}

/// Certified lower bound on `inf_B ‖(A − B)|_Y‖` for every `Y` containing the witnesses.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceLower {
    pub value: GapValue,
    pub witnesses: Vec<FinVec>,
}

/// An achieved value: some hull point with this restricted norm.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceUpper {
    pub value: GapValue,
    pub points: Vec<String>,
    pub weights: Weights,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapReport {
    pub case: String,
    pub params: Value,
    pub pointwise: Vec<ProbeGap>,
    pub pointwise_bound: String,
    pub lower: Option<SubspaceLower>,
    pub upper: Option<SubspaceUpper>,
    pub checks: Vec<Check>,
}

impl GapReport {
    pub fn new(case: &str, params: Value, pointwise_bound: String) -> GapReport {
        GapReport {
            case: case.to_string(),
            params,
            pointwise: Vec::new(),
            pointwise_bound,
            lower: None,
            upper: None,
            checks: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.to_string(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn worst_pointwise(&self) -> Option<&GapValue> {
        self.pointwise.iter().map(|p| &p.gap).max_by(|a, b| a.to_f64().total_cmp(&b.to_f64()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "case": self.case,
            "params": self.params,
            "passed": self.passed(),
            "pointwise": {
                "bound": self.pointwise_bound,
                "probes": self.pointwise.len(),
                "all_exact": self.pointwise.iter().all(|p| p.gap.is_exact()),
                "worst": self.worst_pointwise().map(|g| g.to_json()),
                "values": self.pointwise.iter().map(|p| json!([p.label, p.gap.to_string()])).collect::<Vec<_>>(),
            },
            "lower": self.lower.as_ref().map(|l| json!({
                "value": l.value.to_json(),
                "witnesses": l.witnesses.iter().map(vec_to_value).collect::<Vec<_>>(),
            })),
            "upper": self.upper.as_ref().map(|u| json!({
                "value": u.value.to_json(),
                "points": u.points,
                "weights": u.weights.to_json(),
            })),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name, "passed": c.passed, "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
        }
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        out.push_str(&format!("{} {verdict}\n", self.case));
        out
    }
}
