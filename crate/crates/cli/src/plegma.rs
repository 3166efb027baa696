use jsm_core::io::{vec_to_value, vec_write, VecDoc};
use jsm_plegma::{builtin_coloring, parse_rows, plegma_shift, ramsey_search, validate, PlegmaFamily, RamseyOutcome};
use serde_json::json;

use crate::args::{PlegmaCheckArgs, PlegmaEnumArgs, PlegmaShiftArgs, RamseyArgs};
use crate::parse_ground;
use crate::report::{CliError, Run, RunBuilder};

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

pub fn enumerate(a: &PlegmaEnumArgs, seed: u64) -> Result<Run, CliError> {
    if a.l == 0 || a.k == 0 {
        return Err(CliError::Usage("--l and --k must be positive".into()));
    }
    let ground = parse_ground(&a.ground)?;
    let families: Vec<String> = jsm_plegma::enumerate(&ground, a.l, a.k, a.strict).map(|f| f.to_string()).collect();
    let mut text = families.join("\n");
    if !text.is_empty() {
        text.push('\n');
    }
    text.push_str(&format!("{} families", families.len()));
    let csv = std::iter::once("family".to_string()).chain(families.iter().map(|f| format!("\"{f}\""))).collect::<Vec<_>>().join("\n") + "\n";
    let params = json!({ "ground": a.ground, "l": a.l, "k": a.k, "strict": a.strict });
    let result = json!({ "ground": ground, "l": a.l, "k": a.k, "strict": a.strict, "count": families.len(), "families": families });
    Ok(RunBuilder::new("plegma enum", params, seed).table("plegma-enum.csv", csv).finish(result, true, text))
}

pub fn check(a: &PlegmaCheckArgs, seed: u64) -> Result<Run, CliError> {
    let rows = parse_rows(&a.rows)?;
    let verdict = validate(&rows, a.strict)?;
    let kind = if a.strict { "strict plegma" } else { "plegma" };
    let (passed, text, violation) = match &verdict {
        Ok(()) => (true, format!("PASS {} is a {kind} family", a.rows), None),
        Err(v) => (false, format!("FAIL {}: {v}", a.rows), Some(v.to_string())),
    };
    let params = json!({ "rows": a.rows, "strict": a.strict });
    let result = json!({ "rows": rows, "strict": a.strict, "valid": passed, "violation": violation });
    Ok(RunBuilder::new("plegma check", params, seed).finish(result, passed, text))
}

pub fn shift(a: &PlegmaShiftArgs, seed: u64) -> Result<Run, CliError> {
    let x = match jsm_core::io::doc_read_path(&a.vec).map_err(|e| CliError::Input(e.to_string()))? {
        VecDoc::Fin(v) => v,
        VecDoc::Rle(_) => return Err(CliError::Input("plegma shift needs an interleaved vector".into())),
    };
    let family = PlegmaFamily::new(parse_rows(&a.family)?, false)?;
    let moved = plegma_shift(&x, &family)?;
    let params = json!({ "vec": a.vec.display().to_string(), "family": a.family });
    let result = json!({ "family": family.to_string(), "input": vec_to_value(&x), "shifted": vec_to_value(&moved) });
    Ok(RunBuilder::new("plegma shift", params, seed).finish(result, true, vec_write(&moved)))
}

pub fn ramsey(a: &RamseyArgs, seed: u64) -> Result<Run, CliError> {
    let coloring = builtin_coloring(&a.color).ok_or_else(|| CliError::Usage(format!("unknown coloring {:?}", a.color)))?;
    let ground = parse_ground(&a.ground)?;
    let outcome = ramsey_search(coloring.as_ref(), &ground, a.l, a.k, a.len, a.budget)?;
    let (passed, text, result) = match &outcome {
        RamseyOutcome::Found { set, color } => (
            true,
            format!("found {} colored {color}", join(set)),
            json!({ "outcome": "found", "set": set, "color": color }),
        ),
        RamseyOutcome::NotFound { subsets } => (
            false,
            format!("no monochromatic subset of length {} ({subsets} subsets examined)", a.len),
            json!({ "outcome": "not-found", "subsets": subsets }),
        ),
        RamseyOutcome::BudgetExhausted { subsets } => (
            false,
            format!("budget of {} evaluations exhausted after {subsets} subsets", a.budget),
            json!({ "outcome": "budget-exhausted", "subsets": subsets }),
        ),
    };
    let params = json!({ "color": a.color, "ground": a.ground, "len": a.len, "l": a.l, "k": a.k, "budget": a.budget });
    Ok(RunBuilder::new("ramsey", params, seed).finish(result, passed, text))
}
