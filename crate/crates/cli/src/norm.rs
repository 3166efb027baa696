use std::path::{Path, PathBuf};

use jsm_core::io::{doc_read_path, VecDoc};
use jsm_core::num::{decimal12, fmt_rational};
use jsm_core::{qi, FinVec};
use jsm_spaces::mr::{build_special_vectors, mr_norm_bounds, mr_norm_bounds_finvec, MrBounds, MuRule, MuSequence, SigmaRegistry};
use jsm_spaces::{calx_norm_sq, james_norm_sq, jt_norm_sq, mixed_pq_norm};
use serde_json::{json, Value};

use crate::args::{MrSpecialArgs, NormArgs, SpaceName};
use crate::report::{sha256_hex, CliError, Run, RunBuilder};
use crate::parse_q;

struct Eval {
    json: Value,
    line: String,
    csv: String,
}

fn read(path: &Path) -> Result<VecDoc, CliError> {
    doc_read_path(path).map_err(|e| CliError::Input(e.to_string()))
}

fn read_fin(path: &Path) -> Result<FinVec, CliError> {
    match read(path)? {
        VecDoc::Fin(v) => Ok(v),
        VecDoc::Rle(r) => Ok(r.to_finvec()?),
    }
}

fn mu_sequence(name: &str) -> Result<MuSequence, CliError> {
    MuRule::parse(name).map(MuSequence::new).ok_or_else(|| CliError::Usage(format!("unknown weight rule {name:?}")))
}

fn open_registry(path: Option<&PathBuf>) -> Result<SigmaRegistry, CliError> {
    Ok(match path {
        Some(p) => SigmaRegistry::open(p)?,
        None => SigmaRegistry::in_memory(),
    })
}

fn exact_eval(space: SpaceName, file: &str, x: &FinVec, pq: Option<&(jsm_core::Q, jsm_core::Q)>, witness: bool) -> Result<Eval, CliError> {
    Ok(match space {
        SpaceName::James => {
            let n = james_norm_sq(x)?;
            let (v, d) = (fmt_rational(&n.value), decimal12(&n.value));
            let mut json = json!({ "file": file, "norm_sq": v, "decimal": d });
            let mut line = format!("{file}: norm^2 = {v} ~ {d}");
            if witness {
                json["intervals"] = json!(n.intervals);
                let iv: Vec<String> = n.intervals.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
                line.push_str(&format!("\n  intervals {}", iv.join(" ")));
            }
            Eval { json, line, csv: format!("{file},{v},{d}") }
        }
        SpaceName::Jt => {
            let n = jt_norm_sq(x)?;
            let (v, d) = (fmt_rational(&n.value), decimal12(&n.value));
            let mut json = json!({ "file": file, "norm_sq": v, "decimal": d });
            let mut line = format!("{file}: norm^2 = {v} ~ {d}");
            if witness {
                let segs: Vec<[&str; 2]> = n.segments.iter().map(|s| [s.top.as_str(), s.bottom.as_str()]).collect();
                json["segments"] = json!(segs);
                let node = |s: &str| if s.is_empty() { "root".to_string() } else { s.to_string() };
                let txt: Vec<String> = segs.iter().map(|[a, b]| format!("[{},{}]", node(a), node(b))).collect();
                line.push_str(&format!("\n  segments {}", txt.join(" ")));
            }
            Eval { json, line, csv: format!("{file},{v},{d}") }
        }
        SpaceName::Calx => {
            let n = calx_norm_sq(x)?;
            let (v, d) = (n.to_string(), n.decimal12());
            Eval { json: json!({ "file": file, "norm_sq": v, "decimal": d }), line: format!("{file}: norm^2 = {v} ~ {d}"), csv: format!("{file},{v},{d}") }
        }
        SpaceName::Mixed => {
            let (p, q) = pq.expect("checked by caller");
            let n = mixed_pq_norm(x, p, q)?;
            let exact = n.exact.as_ref().map(fmt_rational);
            let v = format!("{:.12}", n.value);
            let sq = format!("{:.12}", n.value * n.value);
            let line = match &exact {
                Some(e) => format!("{file}: norm = {e}, norm^2 ~ {sq}"),
                None => format!("{file}: norm ~ {v} (relative error {:.1e}), norm^2 ~ {sq}", n.rel_error),
            };
            Eval {
                json: json!({ "file": file, "norm": v, "norm_sq_decimal": sq, "exact": exact, "rel_error": n.rel_error }),
                line,
                csv: format!("{file},{},{sq}", exact.unwrap_or(v)),
            }
        }
        SpaceName::Mr => unreachable!("mr is evaluated sequentially"),
    })
}

fn mr_eval(file: &str, bounds: &MrBounds, witness: bool) -> Eval {
    let (lo, hi) = (fmt_rational(&bounds.lower), fmt_rational(&bounds.upper));
    let mut json = bounds.to_json();
    json["file"] = json!(file);
    if !witness {
        json.as_object_mut().expect("object").remove("witness");
    }
    let mut line = format!("{file}: {lo} <= norm <= {hi} ({}), lower ~ {}", bounds.method.name(), decimal12(&bounds.lower));
    if witness {
        line.push_str(&format!("\n  witness {}", bounds.witness.to_json()));
    }
    Eval { json, line, csv: format!("{file},{lo},{hi}") }
}

/// Runs `f` over `items` on up to `jobs` threads, keeping input order.
fn parallel<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let f = &f;
    let mut out: Vec<(usize, R)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs.min(items.len()))
            .map(|w| s.spawn(move || items.iter().enumerate().skip(w).step_by(jobs).map(|(i, x)| (i, f(x))).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, r)| r).collect()
}

pub fn run(a: &NormArgs, seed: u64, jobs: usize) -> Result<Run, CliError> {
    let files: Vec<String> = a.vec.iter().map(|p| p.display().to_string()).collect();
    let mut params = json!({ "space": a.space.name(), "vec": files, "witness": a.witness });
    let mut registry_hash = None;
    let evals: Vec<Eval> = if a.space == SpaceName::Mr {
        params["mu"] = json!(a.mu);
        params["registry"] = json!(a.registry.as_ref().map(|p| p.display().to_string()));
        let mu = mu_sequence(&a.mu)?;
        let mut reg = open_registry(a.registry.as_ref())?;
        let mut out = Vec::new();
        for (path, file) in a.vec.iter().zip(&files) {
            let b = match read(path)? {
                VecDoc::Rle(r) => mr_norm_bounds(&r, &mu, &mut reg)?,
                VecDoc::Fin(v) => mr_norm_bounds_finvec(&v, &mu, &mut reg)?,
            };
            out.push(mr_eval(file, &b, a.witness));
        }
        registry_hash = Some(sha256_hex(reg.log_text().as_bytes()));
        out
    } else {
        let pq = match (a.space, &a.p, &a.q) {
            (SpaceName::Mixed, Some(p), Some(q)) => {
                params["p"] = json!(p);
                params["q"] = json!(q);
                Some((parse_q("--p", p)?, parse_q("--q", q)?))
            }
            (SpaceName::Mixed, _, _) => return Err(CliError::Usage("the mixed space needs --p and --q".into())),
            _ => None,
        };
        let vecs: Vec<(String, FinVec)> = a.vec.iter().zip(&files).map(|(p, f)| Ok((f.clone(), read_fin(p)?))).collect::<Result<_, CliError>>()?;
        parallel(&vecs, jobs, |(f, x)| exact_eval(a.space, f, x, pq.as_ref(), a.witness)).into_iter().collect::<Result<_, _>>()?
    };
    let header = if a.space == SpaceName::Mr { "file,lower,upper" } else { "file,norm_sq,decimal" };
    let csv = std::iter::once(header.to_string()).chain(evals.iter().map(|e| e.csv.clone())).collect::<Vec<_>>().join("\n") + "\n";
    let text = evals.iter().map(|e| e.line.as_str()).collect::<Vec<_>>().join("\n");
    let result = json!({ "space": a.space.name(), "vectors": evals.into_iter().map(|e| e.json).collect::<Vec<_>>() });
    let mut b = RunBuilder::new("norm", params, seed).table("norm.csv", csv);
    b.registry = registry_hash;
    Ok(b.finish(result, true, text))
}

pub fn mr_special(a: &MrSpecialArgs, seed: u64) -> Result<Run, CliError> {
    if a.n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let mu = mu_sequence(&a.mu)?;
    let mut reg = open_registry(a.registry.as_ref())?;
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut csv = String::from("n,plus_lower,alternating_upper,plus_ok,alternating_ok\n");
    let mut passed = true;
    for n in 1..=a.n {
        let v = build_special_vectors(n, &mu, &mut reg)?;
        let plus = mr_norm_bounds(&v.plus, &mu, &mut reg)?;
        let alt = mr_norm_bounds(&v.alternating, &mu, &mut reg)?;
        let plus_ok = plus.lower >= qi(2 * n as i64);
        let alt_ok = alt.upper <= qi(5);
        passed &= plus_ok && alt_ok;
        let (pl, au) = (fmt_rational(&plus.lower), fmt_rational(&alt.upper));
        text.push_str(&format!(
            "{} n={n}: plus lower {pl} >= {}; {} alternating upper {} <= 5\n",
            if plus_ok { "PASS" } else { "FAIL" },
            2 * n,
            if alt_ok { "PASS" } else { "FAIL" },
            decimal12(&alt.upper),
        ));
        csv.push_str(&format!("{n},{pl},{au},{plus_ok},{alt_ok}\n"));
        rows.push(json!({
            "n": n,
            "weights": v.seq.weights,
            "plus": plus.to_json(),
            "alternating": alt.to_json(),
            "plus_vector": jsm_core::io::rle_to_value(&v.plus),
        }));
    }
    let cert = mu.certificate(16);
    let cert_ok = cert.holds && cert.total <= jsm_core::q(1, 2);
    passed &= cert_ok;
    text.push_str(&format!(
        "{} weight certificate {} ~ {} <= 1/2\n",
        if cert_ok { "PASS" } else { "FAIL" },
        fmt_rational(&cert.total),
        decimal12(&cert.total)
    ));
    let result = json!({
        "mu": mu.rule().name(),
        "sequences": rows,
        "certificate": { "total": fmt_rational(&cert.total), "prefix": fmt_rational(&cert.prefix), "tail": fmt_rational(&cert.tail), "holds": cert_ok },
        "registry_size": reg.len(),
    });
    let params = json!({ "n": a.n, "mu": a.mu, "registry": a.registry.as_ref().map(|p| p.display().to_string()) });
    let mut b = RunBuilder::new("mr-special", params, seed).table("mr-special.csv", csv);
    b.registry = Some(sha256_hex(reg.log_text().as_bytes()));
    Ok(b.finish(result, passed, text))
}

