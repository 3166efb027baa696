use std::path::Path;

use jsm_asymptotics::estimate::format_ratio;
use jsm_asymptotics::{
    build_level_block_family, check_hypotheses, equivalence_constant, jsm_estimate, level_block_check, sign_vectors,
    standard_nets, suppression_constant, AsymError, Ambient, CoeffNet, Outcome, StabilizationSchedule, SequenceGenerator,
    DEFAULT_BUDGET,
};
use jsm_core::io::{doc_from_value, VecDoc};
use jsm_core::num::{fmt_rational, to_f64};
use jsm_core::random::{rational, seeded};
use jsm_core::{FinVec, Q};
use serde_json::{json, Value};

use crate::args::{JsmArgs, JtFamilyArgs, UcsArgs};
use crate::report::{CliError, Run, RunBuilder};
use crate::{parse_ground, parse_q};

const LEVEL_DEPTH: usize = 24;

/// Built-in generator names, or a JSON file
/// `{"ambient": "l2", "sequences": [[doc, ...], ...]}`.
fn generator(spec: &str, l: usize, seed: u64) -> Result<SequenceGenerator, CliError> {
    if spec == "james-pair" {
        return Ok(SequenceGenerator::JamesPair);
    }
    if let Some(b) = spec.strip_prefix("l1-blocks:") {
        let block = b.parse().ok().filter(|&b| b > 0).ok_or_else(|| CliError::Usage(format!("bad block size {b:?}")))?;
        return Ok(SequenceGenerator::L1Blocks { block });
    }
    if let Some(b) = spec.strip_prefix("jt-level:") {
        let bands = b.parse().ok().filter(|&b| b > 0).ok_or_else(|| CliError::Usage(format!("bad band count {b:?}")))?;
        return Ok(SequenceGenerator::LevelBlocks(build_level_block_family(LEVEL_DEPTH, bands, l, seed)?));
    }
    if let Ok(Ambient::Lp(p)) = Ambient::parse(spec) {
        return Ok(SequenceGenerator::Lp { p });
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Usage(format!("unknown generator {spec:?}")));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
    let bad = |m: &str| CliError::Input(format!("{spec}: {m}"));
    let ambient = Ambient::parse(doc["ambient"].as_str().ok_or_else(|| bad("missing ambient"))?)?;
    let sequences = doc["sequences"]
        .as_array()
        .ok_or_else(|| bad("sequences must be an array of arrays"))?
        .iter()
        .map(|seq| {
            seq.as_array()
                .ok_or_else(|| bad("each sequence must be an array"))?
                .iter()
                .map(|v| match doc_from_value(v)? {
                    VecDoc::Fin(x) => Ok(x),
                    VecDoc::Rle(r) => Ok(r.to_finvec()?),
                })
                .collect::<Result<Vec<FinVec>, CliError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SequenceGenerator::VectorList { ambient, sequences })
}

fn outcome_json(o: &Outcome) -> Value {
    match o {
        Outcome::Stable => json!({ "kind": "stable" }),
        Outcome::NoGatedFamilies { k } => json!({ "kind": "no-gated-families", "k": k }),
        Outcome::BudgetExhausted { evaluations } => json!({ "kind": "budget-exhausted", "evaluations": evaluations }),
    }
}

pub fn jsm(a: &JsmArgs, seed: u64) -> Result<Run, CliError> {
    if a.l == 0 || a.kmax == 0 {
        return Err(CliError::Usage("--l and --kmax must be positive".into()));
    }
    let g = generator(&a.gen, a.l, seed)?;
    let ground = parse_ground(&a.ground)?;
    let schedule = match &a.schedule {
        Some(s) => StabilizationSchedule::parse(s)?,
        None => StabilizationSchedule::halving(a.kmax),
    };
    let ps: Vec<Q> = a.ps.split(',').map(|p| parse_q("--ps", p.trim())).collect::<Result<_, _>>()?;
    let nets = standard_nets(a.l, a.kmax, a.random, seed);
    let est = jsm_estimate(&g, a.l, a.kmax, &nets, &schedule, &ground, a.budget.unwrap_or(DEFAULT_BUDGET))?;

    let mut text = format!("generator {}, l={}, kept {} of {} ground elements\n", est.generator, a.l, est.thinned.len(), ground.len());
    let mut tables = Vec::new();
    let mut equivalences = Vec::new();
    let mut csvs = Vec::new();
    for t in &est.tables {
        let exact = t.exactly_constant();
        let osc = t.oscillation();
        let rep = t.representative.as_ref().map(|f| f.to_string());
        text.push_str(&format!(
            "k={}: {} families, {} rows, oscillation {}{}\n",
            t.k,
            t.families,
            t.rows.len(),
            if exact { "0 (exact)".to_string() } else { format!("{osc:.3e}") },
            rep.as_ref().map(|r| format!(", representative {r}")).unwrap_or_default(),
        ));
        tables.push(json!({
            "k": t.k,
            "delta": fmt_rational(&t.delta),
            "families": t.families,
            "rows": t.rows.len(),
            "representative": rep,
            "oscillation": osc,
            "exactly_constant": exact,
        }));
        if t.families == 0 || t.rows.is_empty() {
            continue;
        }
        csvs.push((format!("jsm-k{}.csv", t.k), est.to_csv(t.k, &ps)?));
        for p in &ps {
            let e = equivalence_constant(&est, t.k, p)?;
            let shown = format_ratio(&e.ratio);
            text.push_str(&format!("  equivalence to {}: {shown}\n", Ambient::Lp(p.clone()).name()));
            equivalences.push(json!({
                "k": t.k,
                "p": fmt_rational(p),
                "value": e.ratio.value,
                "squared": e.ratio.squared.as_ref().map(fmt_rational),
            }));
        }
    }
    let passed = est.outcome == Outcome::Stable;
    text.push_str(&format!("{} {:?} after {} evaluations", if passed { "PASS" } else { "FAIL" }, est.outcome, est.evaluations));
    let result = json!({
        "generator": est.generator,
        "l": a.l,
        "kmax": a.kmax,
        "thinned": est.thinned,
        "tables": tables,
        "equivalence": equivalences,
        "rejections": est.rejections.len(),
        "outcome": outcome_json(&est.outcome),
        "evaluations": est.evaluations,
    });
    let params = json!({
        "gen": a.gen, "l": a.l, "kmax": a.kmax, "ground": a.ground, "schedule": a.schedule,
        "random": a.random, "ps": a.ps, "budget": a.budget,
    });
    let mut b = RunBuilder::new("jsm", params, seed);
    for (name, csv) in csvs {
        b = b.table(&name, csv);
    }
    Ok(b.finish(result, passed, text))
}

pub fn ucs(a: &UcsArgs, seed: u64) -> Result<Run, CliError> {
    if a.l == 0 || a.k == 0 {
        return Err(CliError::Usage("--l and --k must be positive".into()));
    }
    let g = generator(&a.gen, a.l, seed)?;
    let ground = match &a.ground {
        Some(s) => parse_ground(s)?,
        None => (1..=(a.l * a.k) as u64).collect(),
    };
    let family = jsm_plegma::enumerate(&ground, a.l, a.k, true)
        .next()
        .ok_or_else(|| CliError::Usage(format!("no strict plegma family in [{}]^{}", a.ground.as_deref().unwrap_or("default"), a.k)))?;
    let mut vectors = Vec::new();
    for i in 1..=a.l {
        for j in 1..=a.k {
            vectors.push(g.vector(i, family.get(i, j), a.l)?);
        }
    }
    let net: Vec<Vec<Q>> = CoeffNet::standard(a.l, a.k, a.random, seed).matrices.iter().map(|m| m.concat()).collect();
    let s = suppression_constant(&vectors, &g.ambient(), &net)?;
    let bound = a.max.as_deref().map(|m| parse_q("--max", m)).transpose()?;
    let passed = match &bound {
        None => true,
        Some(c) => match &s.ratio.squared {
            Some(sq) => *sq <= c * c,
            None => s.ratio.value <= to_f64(c),
        },
    };
    let shown = format_ratio(&s.ratio);
    let mut text = format!("generator {} on {family}: suppression constant >= {shown}", g.name());
    if let Some(c) = &bound {
        text.push_str(&format!("\n{} bound {}", if passed { "PASS" } else { "FAIL" }, fmt_rational(c)));
    }
    let result = json!({
        "generator": g.name(),
        "family": family.to_string(),
        "value": s.ratio.value,
        "squared": s.ratio.squared.as_ref().map(fmt_rational),
        "subset": s.subset,
        "coeffs": s.coeffs.iter().map(fmt_rational).collect::<Vec<_>>(),
        "bound": bound.as_ref().map(fmt_rational),
    });
    let params = json!({ "gen": a.gen, "l": a.l, "k": a.k, "ground": a.ground, "random": a.random, "max": a.max });
    Ok(RunBuilder::new("ucs", params, seed).finish(result, passed, text))
}

pub fn jt_family(a: &JtFamilyArgs, seed: u64) -> Result<Run, CliError> {
    let fam = build_level_block_family(a.depth, a.bands, a.l, seed)?;
    let params = json!({ "bands": a.bands, "l": a.l, "depth": a.depth, "random": a.random });
    let hyp = match check_hypotheses(&fam) {
        Ok(h) => h,
        Err(AsymError::Hypothesis { condition, detail }) => {
            let text = format!("FAIL hypothesis {condition}: {detail}");
            let result = json!({ "hypotheses": { "holds": false, "condition": condition, "detail": detail } });
            return Ok(RunBuilder::new("jt-family", params, seed).finish(result, false, text));
        }
        Err(e) => return Err(e.into()),
    };
    let mut rng = seeded(seed);
    let mut coeffs = sign_vectors(a.bands);
    coeffs.extend((0..a.random).map(|_| (0..a.bands).map(|_| rational(&mut rng, 5, 4)).collect::<Vec<_>>()));
    let r = level_block_check(&fam, &coeffs)?;
    let (lo, hi) = (fmt_rational(&r.lower_ratio), fmt_rational(&r.upper_ratio));
    let text = format!(
        "{} bands x {} vectors, budget value {} < {}\n{} 1 <= {lo} and {hi} <= (sqrt2 + {})^2 over {} evaluations",
        a.bands,
        a.l,
        fmt_rational(&hyp.budget_value),
        fmt_rational(&fam.epsilon),
        if r.holds { "PASS" } else { "FAIL" },
        fmt_rational(&fam.epsilon),
        r.evaluations,
    );
    let csv = format!("bands,l,lower_ratio,upper_ratio,holds\n{},{},{lo},{hi},{}\n", a.bands, a.l, r.holds);
    let result = json!({
        "hypotheses": { "holds": true, "budget_value": fmt_rational(&hyp.budget_value), "initial_segments": hyp.initial_segments },
        "epsilon": fmt_rational(&fam.epsilon),
        "eps": fam.eps.iter().map(fmt_rational).collect::<Vec<_>>(),
        "lower_ratio": lo,
        "upper_ratio": hi,
        "evaluations": r.evaluations,
        "holds": r.holds,
    });
    Ok(RunBuilder::new("jt-family", params, seed).table("jt-family.csv", csv).finish(result, r.holds, text))
}
