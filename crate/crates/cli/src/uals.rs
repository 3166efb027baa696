use jsm_uals::{verify_case, Case, CaseOptions};
use serde_json::json;

use crate::args::UalsVerifyArgs;
use crate::report::{CliError, Run, RunBuilder};

pub fn verify(a: &UalsVerifyArgs, seed: u64) -> Result<Run, CliError> {
    let case = Case::parse(&a.case, a.n, a.p.as_deref(), a.q.as_deref())?;
    let opts = CaseOptions { probes: a.probes, samples: a.samples, restarts: a.restarts, seed };
    let report = verify_case(&case, &opts)?;
    let mut csv = String::from("check,passed,detail\n");
    for c in &report.checks {
        csv.push_str(&format!("{},{},\"{}\"\n", c.name, c.passed, c.detail.replace('"', "'")));
    }
    let params = json!({
        "case": case.name(), "n": a.n, "p": a.p, "q": a.q,
        "probes": a.probes, "samples": a.samples, "restarts": a.restarts,
    });
    Ok(RunBuilder::new("uals verify", params, seed)
        .table("uals-verify.csv", csv)
        .finish(report.to_json(), report.passed(), report.summary()))
}
