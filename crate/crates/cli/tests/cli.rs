use std::process::Command;

fn jsm(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_jsm")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn strict_enumeration_prints_one_family() {
    let (code, out) = jsm(&["plegma", "enum", "--ground", "1..4", "--l", "2", "--k", "2", "--strict"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("1,3;2,4\n1 families\n"), "{out}");
}

#[test]
fn calx_verification_passes() {
    let (code, out) = jsm(&["uals", "verify", "--case", "calx", "--n", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("calx(3) pass"));
}

#[test]
fn james_norm_prints_fraction_and_decimal() {
    let dir = tempfile::tempdir().unwrap();
    let v = dir.path().join("v.json");
    std::fs::write(&v, r#"{"scheme":"natural","entries":[[1,"1"],[2,"-1/2"],[5,"3"]]}"#).unwrap();
    let (code, out) = jsm(&["norm", "--space", "james", "--vec", v.to_str().unwrap()]);
    assert_eq!(code, 0);
    // (1 - 1/2 + 3)^2
    assert!(out.contains("norm^2 = 49/4 ~ 12.250000000000"), "{out}");
}

#[test]
fn exit_codes() {
    assert_eq!(jsm(&["plegma", "check", "1,2;3,4"]).0, 1);
    assert_eq!(jsm(&["plegma", "check", "1,3;2,4", "--strict"]).0, 0);
    assert_eq!(jsm(&["frobnicate"]).0, 2);
    assert_eq!(jsm(&["uals", "verify", "--case", "nope"]).0, 2);
    assert_eq!(jsm(&["norm", "--space", "james", "--vec", "/nonexistent.json"]).0, 2);
    assert_eq!(jsm(&["ucs", "--gen", "james-pair", "--k", "2", "--ground", "2..6", "--max", "11/10"]).0, 1);
}

#[test]
fn reports_are_written_with_schema_and_digest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let (code, text) = jsm(&["jsm", "--gen", "l2", "--l", "2", "--kmax", "2", "--ground", "1..6", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("jsm.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], jsm_cli::SCHEMA);
    let digest = report["manifest"]["digest"].as_str().unwrap();
    assert!(text.contains(&format!("digest {digest}")));
    let csv = std::fs::read_to_string(out.join("jsm-k2.csv")).unwrap();
    assert!(csv.starts_with("coeffs,norm_sq,oscillation,ratio_l1/1,ratio_l2/1\n"), "{csv}");
}

#[test]
fn seeds_change_random_reports_only_through_the_seed() {
    let run = |seed: &str| jsm_cli::run_args(["jsm", "jt-family", "--bands", "3", "--l", "2", "--seed", seed]).unwrap();
    let (a, b, c) = (run("5"), run("5"), run("6"));
    assert_eq!(a.manifest.digest, b.manifest.digest);
    assert_ne!(a.manifest.digest, c.manifest.digest);
}

#[test]
fn registry_log_replays() {
    let dir = tempfile::tempdir().unwrap();
    let reg = dir.path().join("sigma.jsonl");
    let reg = reg.to_str().unwrap();
    let a = jsm_cli::run_args(["jsm", "mr-special", "--n", "2", "--registry", reg]).unwrap();
    let b = jsm_cli::run_args(["jsm", "mr-special", "--n", "2", "--registry", reg]).unwrap();
    assert!(a.passed);
    assert_eq!(a.manifest.registry, b.manifest.registry);
    assert_eq!(a.manifest.digest, b.manifest.digest);
}
