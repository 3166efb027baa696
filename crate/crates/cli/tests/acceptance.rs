//! End-to-end acceptance run without the libtest harness, so the criterion
//! lines always print. Exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use jsm_asymptotics::{
    build_level_block_family, equivalence_constant, jsm_estimate, level_block_check, sign_vectors, standard_nets,
    suppression_constant, Ambient, CoeffNet, Outcome, SequenceGenerator, StabilizationSchedule, DEFAULT_BUDGET,
};
use jsm_core::random::{nonzero_rational, rational, seeded};
use jsm_core::{q, qi, FinVec, Index, IndexScheme, Node, Q};
use jsm_plegma::brute::brute_families;
use jsm_plegma::{builtin_coloring, count, enumerate, plegma_shift, ramsey_search, RamseyOutcome};
use jsm_spaces::brute::{james_brute_sq, jt_full_tree_sq};
use jsm_spaces::mr::{build_special_vectors, mr_norm_bounds, MuSequence, SigmaRegistry};
use jsm_spaces::{james_norm_sq, james_pair_realize, jt_norm_sq};
use rand::seq::IndexedRandom;
use rand::Rng;
use serde_json::Value;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_natural(rng: &mut impl Rng, max_len: usize, range: u64) -> FinVec {
    let len = rng.random_range(1..=max_len);
    let idx: Vec<u64> = (1..=range).collect();
    let mut v = FinVec::zero(IndexScheme::Natural);
    for &n in idx.choose_multiple(rng, len) {
        v.set(Index::Nat(n), nonzero_rational(rng, 5, 4));
    }
    v
}

fn random_dyadic(rng: &mut impl Rng, depth: usize, max_len: usize) -> FinVec {
    let nodes: Vec<Node> = (0..=depth).flat_map(Node::all_at_level).collect();
    let len = rng.random_range(1..=max_len);
    let mut v = FinVec::zero(IndexScheme::Dyadic);
    for s in nodes.choose_multiple(rng, len) {
        v.set(Index::Node(s.clone()), nonzero_rational(rng, 4, 3));
    }
    v
}

fn ground(n: u64) -> Vec<u64> {
    (1..=n).collect()
}

fn norm_oracles() -> Verdict {
    let mut rng = seeded(101);
    let t = Instant::now();
    for _ in 0..1000 {
        let x = random_natural(&mut rng, 10, 30);
        let fast = james_norm_sq(&x).map_err(|e| e.to_string())?.value;
        ensure(Some(&fast) == james_brute_sq(&x).as_ref(), || format!("james mismatch on {x:?}"))?;
    }
    let james = t.elapsed();
    let t = Instant::now();
    for _ in 0..500 {
        let x = random_dyadic(&mut rng, 4, 12);
        let fast = jt_norm_sq(&x).map_err(|e| e.to_string())?.value;
        ensure(fast == jt_full_tree_sq(&x), || format!("jt mismatch on {x:?}"))?;
    }
    let jt = t.elapsed();
    ensure(james < Duration::from_secs(60) && jt < Duration::from_secs(120), || format!("too slow: {james:?}, {jt:?}"))?;
    Ok(format!("1000 James and 500 JT vectors equal brute force ({:.1}s, {:.1}s)", james.as_secs_f64(), jt.as_secs_f64()))
}

fn plegma_counts() -> Verdict {
    let mut parts = Vec::new();
    for (m, l, k) in [(4u64, 2, 1), (4, 2, 2), (6, 2, 2), (6, 3, 2)] {
        for strict in [false, true] {
            let g = ground(m);
            let listed: Vec<Vec<Vec<u64>>> = enumerate(&g, l, k, strict).map(|f| f.rows().to_vec()).collect();
            let oracle = brute_families(&g, l, k, strict);
            ensure(listed == oracle && count(&g, l, k, strict) == oracle.len() as u64, || {
                format!("({m},{l},{k}) strict={strict}: {} vs {}", listed.len(), oracle.len())
            })?;
            if strict {
                parts.push(format!("({m},{l},{k})={}", oracle.len()));
            }
        }
    }
    Ok(format!("strict counts {}; non-strict equal too", parts.join(" ")))
}

fn shift_isometry() -> Verdict {
    let mut rng = seeded(103);
    let g = ground(8);
    let families: Vec<Vec<_>> = (1..=3).map(|k| enumerate(&g, 2, k, true).collect()).collect();
    let mut checks = 0u64;
    for round in 0..200 {
        let k = 1 + round % 3;
        let mut x = FinVec::zero(IndexScheme::Interleaved(2));
        for i in 1..=2 {
            for j in 1..=k as u64 {
                x.set(Index::pair(i, j), rational(&mut rng, 5, 4));
            }
        }
        let base = james_norm_sq(&james_pair_realize(&x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?.value;
        for s in &families[k - 1] {
            let moved = plegma_shift(&x, s).map_err(|e| e.to_string())?;
            let v = james_norm_sq(&james_pair_realize(&moved).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?.value;
            ensure(v == base, || format!("shift by {s} changes {base} to {v}"))?;
            checks += 1;
        }
    }
    Ok(format!("200 matrices, {checks} shifted norms equal exactly"))
}

fn mr_inequalities() -> Verdict {
    let mu = MuSequence::default();
    let mut reg = SigmaRegistry::in_memory();
    let mut seen = Vec::new();
    for n in 1..=3usize {
        let v = build_special_vectors(n, &mu, &mut reg).map_err(|e| e.to_string())?;
        let plus = mr_norm_bounds(&v.plus, &mu, &mut reg).map_err(|e| e.to_string())?;
        let alt = mr_norm_bounds(&v.alternating, &mu, &mut reg).map_err(|e| e.to_string())?;
        ensure(plus.lower >= qi(2 * n as i64), || format!("n={n}: plus lower {}", plus.lower))?;
        ensure(alt.upper <= qi(5), || format!("n={n}: alternating upper {}", alt.upper))?;
        seen.push(format!("n={n}: {} / {:.4}", plus.lower, jsm_core::num::to_f64(&alt.upper)));
    }
    let c = mu.certificate(16);
    ensure(c.holds && c.total <= q(1, 2), || format!("certificate {}", c.total))?;
    Ok(format!("{}; certificate {:.4} <= 1/2", seen.join(", "), jsm_core::num::to_f64(&c.total)))
}

fn jt_level_blocks() -> Verdict {
    let mut rng = seeded(105);
    let cap = qi(2) * q(21, 20).pow(2);
    let (mut lo, mut hi) = (None::<Q>, None::<Q>);
    for seed in 0..20u64 {
        let l = 1 + seed as usize % 2;
        let bands = 1 + seed as usize % 4;
        let fam = build_level_block_family(24, bands, l, seed).map_err(|e| e.to_string())?;
        let mut coeffs = sign_vectors(bands);
        coeffs.extend((0..100).map(|_| (0..bands).map(|_| rational(&mut rng, 5, 4)).collect::<Vec<_>>()));
        let r = level_block_check(&fam, &coeffs).map_err(|e| e.to_string())?;
        ensure(r.lower_ratio >= qi(1) && r.upper_ratio <= cap, || format!("seed {seed}: [{}, {}]", r.lower_ratio, r.upper_ratio))?;
        lo = Some(lo.map_or(r.lower_ratio.clone(), |v: Q| v.min(r.lower_ratio.clone())));
        hi = Some(hi.map_or(r.upper_ratio.clone(), |v: Q| v.max(r.upper_ratio.clone())));
    }
    let g = SequenceGenerator::LevelBlocks(build_level_block_family(40, 8, 2, 4).map_err(|e| e.to_string())?);
    let nets: Vec<CoeffNet> = [CoeffNet::signs(2, 1), CoeffNet::signs(2, 2)]
        .iter()
        .zip(standard_nets(2, 2, 30, 8))
        .map(|(c, f)| c.refine(&f))
        .collect();
    let est = jsm_estimate(&g, 2, 2, &nets, &StabilizationSchedule::halving(2), &ground(8), DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let e = equivalence_constant(&est, 2, &qi(2)).map_err(|e| e.to_string())?;
    ensure(e.ratio.at_most_sqrt_plus(&qi(2), &q(1, 10)), || format!("equivalence constant {}", e.ratio.value))?;
    Ok(format!(
        "20 families: ratios in [{}, {}]; equivalence to l2 {:.6} <= sqrt2 + 0.1",
        lo.unwrap(),
        hi.unwrap(),
        e.ratio.value
    ))
}

fn jt_norming_cardinality() -> Verdict {
    let mut rng = seeded(106);
    let mut largest = 0usize;
    for _ in 0..200 {
        let x = random_dyadic(&mut rng, 5, 14);
        let n = jt_norm_sq(&x).map_err(|e| e.to_string())?;
        for eps in [q(1, 2), q(1, 3), q(1, 4)] {
            let eps_sq = &eps * &eps;
            // |S*(x/‖x‖)| ≥ ε, compared squared
            let big = n.segments.iter().filter(|s| s.eval(&x).pow(2) >= &eps_sq * &n.value).count();
            ensure(qi(big as i64) * &eps_sq <= qi(1), || format!("{big} segments above {eps}"))?;
            largest = largest.max(big);
        }
    }
    Ok(format!("200 vectors, at most {largest} witness segments above eps"))
}

struct CliRuns {
    digests: BTreeMap<String, String>,
}

impl CliRuns {
    fn run(&mut self, argv: &[&str]) -> Result<jsm_cli::Run, String> {
        let mut full = vec!["jsm"];
        full.extend_from_slice(argv);
        let run = jsm_cli::run_args(full).map_err(|e| format!("{}: {e}", argv.join(" ")))?;
        self.digests.insert(argv.join(" "), run.manifest.digest.clone());
        Ok(run)
    }
}

fn uals_case(cli: &mut CliRuns, argv: &[&str], expect: impl Fn(&Value) -> Result<String, String>) -> Verdict {
    let run = cli.run(argv)?;
    let failed: Vec<String> = run.result["checks"]
        .as_array()
        .into_iter()
        .flatten()
        .filter(|c| c["passed"] != Value::Bool(true))
        .map(|c| format!("{}: {}", c["name"], c["detail"]))
        .collect();
    ensure(run.passed && failed.is_empty(), || failed.join("; "))?;
    expect(&run.result)
}

fn checks_named<'a>(r: &'a Value, name: &str) -> Option<&'a Value> {
    r["checks"].as_array()?.iter().find(|c| c["name"] == name)
}

/// A reported gap as `(exact value if any, float value)`.
fn gap(v: &Value) -> Option<(Option<Q>, f64)> {
    let s = v["value"].as_str()?;
    if v["exact"] == true {
        let x = jsm_core::num::parse_rational(s).ok()?;
        let f = jsm_core::num::to_f64(&x);
        Some((Some(x), f))
    } else {
        Some((None, s.parse().ok()?))
    }
}

fn ell1(cli: &mut CliRuns) -> Verdict {
    uals_case(cli, &["uals", "verify", "--case", "ell1"], |r| {
        let p = &r["pointwise"];
        let worst = gap(&p["worst"]).ok_or("no pointwise gap")?;
        ensure(worst.0 == Some(qi(0)) && p["all_exact"] == true, || format!("pointwise {p}"))?;
        let lower = gap(&r["lower"]["value"]).ok_or("no lower bound")?;
        ensure(lower.0.as_ref().is_some_and(|v| *v >= q(1, 2)), || format!("lower {}", r["lower"]["value"]))?;
        let sampled = checks_named(r, "minimax-sampled").ok_or("no sampled check")?;
        Ok(format!("{} exact zero gaps; LP minimax {}; {}", p["probes"], lower.0.unwrap(), sampled["detail"].as_str().unwrap_or("")))
    })
}

fn calx(cli: &mut CliRuns) -> Verdict {
    uals_case(cli, &["uals", "verify", "--case", "calx", "--n", "3"], |r| {
        let worst = gap(&r["pointwise"]["worst"]).ok_or("no pointwise gap")?;
        let exact = worst.0.ok_or("inexact pointwise gap")?;
        ensure(exact <= q(1, 4), || format!("worst gap {exact}"))?;
        let lower = gap(&r["lower"]["value"]).ok_or("no lower bound")?;
        ensure(lower.0.as_ref().is_some_and(|v| *v >= q(1, 2)), || format!("lower {}", r["lower"]["value"]))?;
        Ok(format!("worst greedy gap {exact} <= 1/4 over {} probes; minimax {}", r["pointwise"]["probes"], lower.0.unwrap()))
    })
}

fn mixed(cli: &mut CliRuns) -> Verdict {
    uals_case(cli, &["uals", "verify", "--case", "mixed", "--p", "3/2", "--q", "3", "--n", "4"], |r| {
        // r = (q - p) / pq = 1/3
        let bound = 4f64.powf(-1.0 / 3.0) + 1e-9;
        let worst = gap(&r["pointwise"]["worst"]).ok_or("no pointwise gap")?.1;
        ensure(worst <= bound, || format!("worst gap {worst} > {bound}"))?;
        ensure(r["pointwise"]["probes"].as_u64().unwrap_or(0) >= 200, || "fewer than 200 probes".into())?;
        let lower = gap(&r["lower"]["value"]).ok_or("no lower bound")?.1;
        ensure(lower >= 0.5 - 1e-6, || format!("lower {lower}"))?;
        Ok(format!("worst greedy gap {worst:.6} <= 4^(-1/3); minimax {lower}"))
    })
}

fn rank_one(cli: &mut CliRuns) -> Verdict {
    uals_case(cli, &["uals", "verify", "--case", "rank-one", "--probes", "500"], |r| {
        let worst = gap(&r["pointwise"]["worst"]).ok_or("no pointwise gap")?;
        ensure(worst.0 == Some(qi(0)), || format!("pointwise {}", r["pointwise"]["worst"]))?;
        let probes = r["pointwise"]["probes"].as_u64().unwrap_or(0);
        ensure(probes >= 500, || format!("{probes} probes"))?;
        let sampled = checks_named(r, "norm-sampled").ok_or("no sampled check")?;
        let descent = checks_named(r, "norm-descent").ok_or("no descent check")?;
        Ok(format!(
            "{probes} zero gaps; {}; {}",
            sampled["detail"].as_str().unwrap_or(""),
            descent["detail"].as_str().unwrap_or("")
        ))
    })
}

fn stabilization() -> Verdict {
    for p in [qi(2), qi(1)] {
        let g = SequenceGenerator::Lp { p: p.clone() };
        let est = jsm_estimate(&g, 2, 3, &standard_nets(2, 3, 30, 9), &StabilizationSchedule::halving(3), &ground(10), DEFAULT_BUDGET)
            .map_err(|e| e.to_string())?;
        ensure(est.outcome == Outcome::Stable, || format!("l{p}: {:?}", est.outcome))?;
        for t in &est.tables {
            ensure(t.families > 0 && t.exactly_constant() && t.oscillation() == 0.0, || format!("l{p} k={} oscillates", t.k))?;
        }
    }
    let nets: Vec<CoeffNet> = (1..=3).map(|k| CoeffNet::signs(2, k)).collect();
    let est = jsm_estimate(&SequenceGenerator::JamesPair, 2, 3, &nets, &StabilizationSchedule::halving(3), &ground(12), DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    ensure(est.outcome == Outcome::Stable, || format!("james pair: {:?}", est.outcome))?;
    let fams: Vec<u64> = est.tables.iter().map(|t| t.families).collect();
    for t in &est.tables {
        ensure(t.families > 0 && t.exactly_constant(), || format!("james pair k={} oscillates", t.k))?;
    }
    Ok(format!("l2, l1 exactly constant for k <= 3; James pair constant over {fams:?} gated families"))
}

fn suppression() -> Verdict {
    let net: Vec<Vec<Q>> = CoeffNet::standard(2, 2, 40, 2).matrices.iter().map(|m| m.concat()).collect();
    let first = enumerate(&ground(4), 2, 2, true).next().ok_or("no family")?;
    let vectors = |g: &SequenceGenerator| -> Result<Vec<FinVec>, String> {
        let mut out = Vec::new();
        for i in 1..=2 {
            for j in 1..=2 {
                out.push(g.vector(i, first.get(i, j), 2).map_err(|e| e.to_string())?);
            }
        }
        Ok(out)
    };
    let within = |r: &jsm_asymptotics::Ratio| match &r.squared {
        Some(s) => *s <= q(121, 100),
        None => r.value <= 1.1,
    };
    let mut shown = Vec::new();
    for p in [q(3, 2), qi(2), qi(3)] {
        let g = SequenceGenerator::Lp { p: p.clone() };
        let s = suppression_constant(&vectors(&g)?, &g.ambient(), &net).map_err(|e| e.to_string())?;
        ensure(within(&s.ratio), || format!("l{p}: {}", s.ratio.value))?;
        shown.push(format!("l{p} {:.4}", s.ratio.value));
    }
    let g = SequenceGenerator::LevelBlocks(build_level_block_family(24, 4, 2, 11).map_err(|e| e.to_string())?);
    let s = suppression_constant(&vectors(&g)?, &Ambient::Jt, &net).map_err(|e| e.to_string())?;
    ensure(within(&s.ratio), || format!("jt: {}", s.ratio.value))?;
    shown.push(format!("jt {:.4}", s.ratio.value));
    Ok(format!("constants {} <= 1.1", shown.join(", ")))
}

fn ramsey() -> Verdict {
    let g = ground(30);
    let parity = builtin_coloring("parity").ok_or("no parity coloring")?;
    let found = ramsey_search(parity.as_ref(), &g, 2, 1, 5, 10_000_000).map_err(|e| e.to_string())?;
    let RamseyOutcome::Found { set, color } = found else {
        return Err(format!("parity: {found:?}"));
    };
    // Independent check: every pair a < b in the set has the same sum parity.
    let parities: std::collections::BTreeSet<u64> =
        set.iter().flat_map(|a| set.iter().filter(move |b| *b > a).map(move |b| (a + b) % 2)).collect();
    ensure(set.len() == 5 && parities.len() == 1, || format!("{set:?} is not monochromatic"))?;
    let constant = builtin_coloring("constant").ok_or("no constant coloring")?;
    let first = ramsey_search(constant.as_ref(), &g, 2, 1, 5, 10_000_000).map_err(|e| e.to_string())?;
    ensure(matches!(&first, RamseyOutcome::Found { set, .. } if *set == vec![1, 2, 3, 4, 5]), || format!("constant: {first:?}"))?;
    Ok(format!("parity: {set:?} colored {color}; constant: first colex subset"))
}

/// Writes three natural and three dyadic vectors; returns their paths.
fn write_vectors(dir: &Path) -> (Vec<String>, Vec<String>) {
    let mut rng = seeded(114);
    let (mut naturals, mut trees) = (Vec::new(), Vec::new());
    for i in 0..3 {
        let x = random_natural(&mut rng, 8, 20);
        let t = random_dyadic(&mut rng, 4, 8);
        for (name, v, out) in [(format!("n{i}.json"), x, &mut naturals), (format!("t{i}.json"), t, &mut trees)] {
            let path = dir.join(name);
            std::fs::write(&path, jsm_core::io::vec_write(&v)).unwrap();
            out.push(path.display().to_string());
        }
    }
    (naturals, trees)
}

fn determinism(cli: &mut CliRuns, dir: &Path) -> Verdict {
    let (naturals, trees) = write_vectors(dir);
    let naturals: Vec<&str> = naturals.iter().map(String::as_str).collect();
    let trees: Vec<&str> = trees.iter().map(String::as_str).collect();
    let mut argvs: Vec<Vec<&str>> = Vec::new();
    argvs.push([&["norm", "--space", "james", "--witness", "--vec"][..], &naturals].concat());
    argvs.push([&["norm", "--space", "jt", "--witness", "--jobs", "2", "--vec"][..], &trees].concat());
    let registry = dir.join("sigma.jsonl").display().to_string();
    let shifted = dir.join("x.json");
    std::fs::write(&shifted, r#"{"scheme":{"interleaved":2},"entries":[[[1,1],"1/2"],[[2,1],"-3"],[[1,2],"2"]]}"#).unwrap();
    let shifted = shifted.display().to_string();
    argvs.push(vec!["mr-special", "--n", "3"]);
    argvs.push(vec!["mr-special", "--n", "3", "--registry", &registry]);
    argvs.push(vec!["plegma", "check", "2,5;3,7", "--strict"]);
    argvs.push(vec!["plegma", "shift", "--vec", &shifted, "--family", "2,5;3,7"]);
    argvs.push(vec!["jsm", "--gen", "james-pair", "--l", "2", "--kmax", "3", "--ground", "1..12", "--random", "0"]);
    for (m, l, k) in [("1..4", "2", "1"), ("1..4", "2", "2"), ("1..6", "2", "2"), ("1..6", "3", "2")] {
        argvs.push(vec!["plegma", "enum", "--ground", m, "--l", l, "--k", k, "--strict"]);
    }
    argvs.push(vec!["jt-family", "--bands", "4", "--l", "2", "--seed", "3"]);
    argvs.push(vec!["jsm", "--gen", "l2", "--l", "2", "--kmax", "3", "--ground", "1..10"]);
    argvs.push(vec!["jsm", "--gen", "l1", "--l", "2", "--kmax", "3", "--ground", "1..10"]);
    for g in ["l3/2", "l2", "l3", "jt-level:4"] {
        argvs.push(vec!["ucs", "--gen", g, "--k", "2", "--max", "11/10"]);
    }
    argvs.push(vec!["ramsey", "--color", "parity", "--ground", "1..30", "--len", "5"]);
    argvs.push(vec!["ramsey", "--color", "constant", "--ground", "1..30", "--len", "5"]);
    let mut first: BTreeMap<String, String> = std::mem::take(&mut cli.digests);
    for argv in &argvs {
        let run = cli.run(argv)?;
        ensure(run.passed, || format!("{} failed:\n{}", argv.join(" "), run.text))?;
    }
    first.append(&mut std::mem::take(&mut cli.digests));
    // Second pass over everything, including the verification runs above.
    for key in first.keys() {
        let argv: Vec<&str> = key.split(' ').collect();
        cli.run(&argv)?;
    }
    let mismatched: Vec<&String> = first.keys().filter(|k| cli.digests.get(*k) != first.get(*k)).collect();
    ensure(mismatched.is_empty(), || format!("digests differ for {mismatched:?}"))?;
    Ok(format!("{} commands rerun with identical digests", first.len()))
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let mut cli = CliRuns { digests: BTreeMap::new() };
    let mut lines = Vec::new();
    let mut record = |n: usize, name: &str, limit: u64, f: &mut dyn FnMut() -> Verdict| {
        let t = Instant::now();
        let mut outcome = f();
        let secs = t.elapsed().as_secs_f64();
        if outcome.is_ok() && secs > limit as f64 {
            outcome = Err(format!("took {secs:.1}s, limit {limit}s"));
        }
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => ("FAIL", e.clone()),
        };
        let line = format!("criterion {n:2} {tag} {name}: {detail} [{secs:.1}s]");
        println!("{line}");
        lines.push((outcome.is_ok(), line));
    };
    record(1, "norm oracle exactness", 180, &mut norm_oracles);
    record(2, "plegma counts", 10, &mut plegma_counts);
    record(3, "plegma shift isometry", 60, &mut shift_isometry);
    record(4, "two-line space inequalities", 120, &mut mr_inequalities);
    record(5, "JT level block bounds", 300, &mut jt_level_blocks);
    record(6, "JT norming cardinality", 60, &mut jt_norming_cardinality);
    record(7, "l1 counterexample", 60, &mut || ell1(&mut cli));
    record(8, "calx counterexample", 120, &mut || calx(&mut cli));
    record(9, "mixed (p,q) counterexample", 120, &mut || mixed(&mut cli));
    record(10, "rank-one example", 30, &mut || rank_one(&mut cli));
    record(11, "stabilization sanity", 60, &mut stabilization);
    record(12, "suppression unconditionality", 120, &mut suppression);
    record(13, "Ramsey desk search", 10, &mut ramsey);
    record(14, "determinism", 600, &mut || determinism(&mut cli, dir.path()));
    let failed = lines.iter().filter(|(ok, _)| !ok).count();
    println!("acceptance: {} of {} criteria pass", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
