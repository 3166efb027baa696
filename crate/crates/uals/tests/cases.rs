use std::time::Instant;

use jsm_core::{q, qi};
use jsm_uals::{verify_case, Case, CaseOptions, GapValue};

fn run(case: Case) -> jsm_uals::GapReport {
    let t = Instant::now();
    let rep = verify_case(&case, &CaseOptions::default()).unwrap();
    print!("{}", rep.summary());
    println!("{} took {:?}", case.name(), t.elapsed());
    rep
}

#[test]
fn ell1_tail_gap_is_half() {
    let rep = run(Case::Ell1 { m: 50 });
    assert!(rep.passed());
    assert_eq!(rep.lower.unwrap().value, GapValue::Exact(q(1, 2)));
    assert!(rep.pointwise.iter().all(|p| p.gap == GapValue::Exact(qi(0))));
}

#[test]
fn calx_three() {
    let rep = run(Case::Calx { n: 3 });
    assert!(rep.passed());
    assert_eq!(rep.lower.as_ref().unwrap().value, GapValue::Exact(q(1, 2)));
    assert!(rep.pointwise.iter().all(|p| p.gap.is_exact() && p.gap.at_most(&q(1, 4), 0.0)));
}

#[test]
fn mixed_three_halves_three() {
    let rep = run(Case::Mixed { p: q(3, 2), q: qi(3), n: 4 });
    assert!(rep.passed());
    assert!(rep.lower.unwrap().value.at_least(&q(1, 2), 1e-6));
}

#[test]
fn rank_one_plane() {
    let rep = run(Case::RankOne);
    assert!(rep.passed());
    assert_eq!(rep.lower.unwrap().value, GapValue::Exact(q(1, 2)));
}
