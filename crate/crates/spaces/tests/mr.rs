use jsm_core::random::{nonzero_rational, seeded};
use jsm_core::{q, FinVec, Index, IndexScheme, Q, RleVec};
use jsm_spaces::brute::mr_brute;
use jsm_spaces::mr::{build_special_vectors, mr_norm_bounds, BoundMethod, MuRule, MuSequence, SigmaRegistry};
use rand::seq::IndexedRandom;
use rand::Rng;

fn random_window(rng: &mut impl Rng, n: u64) -> FinVec {
    let pool: Vec<u64> = (1..=n).collect();
    let len = rng.random_range(1..=pool.len().min(6));
    let mut x = FinVec::zero(IndexScheme::MrLine);
    for &i in pool.choose_multiple(rng, len) {
        x.set(Index::Nat(i), nonzero_rational(rng, 5, 4));
    }
    x
}

#[test]
fn small_windows_are_exact() {
    let mu = MuSequence::default();
    let mut reg = SigmaRegistry::in_memory();
    let mut rng = seeded(21);
    for round in 0..150 {
        let x = random_window(&mut rng, if round % 3 == 0 { 10 } else { 8 });
        let r = RleVec::from_finvec(&x).unwrap();
        let b = mr_norm_bounds(&r, &mu, &mut reg).unwrap();
        assert_eq!(b.method, BoundMethod::Exact);
        assert_eq!(b.lower, b.upper);
        assert!(b.witness.f.check(&mu).unwrap());
        assert_eq!(b.witness.eval(&r, &mu).unwrap(), b.lower, "{x:?}");
        assert_eq!(mr_brute(&x, &mu, &mut reg).unwrap(), b.lower, "{x:?}");
    }
}

#[test]
fn odd_only_support_sees_second_pair() {
    // e_1 + e_9: the pair ({1},{2}) followed by a second odd set through 9.
    let mu = MuSequence::default();
    let mut reg = SigmaRegistry::in_memory();
    let x = FinVec::from_entries(IndexScheme::MrLine, [(Index::Nat(1), Q::from_integer(1.into())), (Index::Nat(9), Q::from_integer(1.into()))]).unwrap();
    let b = mr_norm_bounds(&RleVec::from_finvec(&x).unwrap(), &mu, &mut reg).unwrap();
    assert_eq!(b.lower, mr_brute(&x, &mu, &mut reg).unwrap());
    assert!(b.lower > Q::from_integer(1.into()));
}

#[test]
fn tower_rule_windows() {
    let mu = MuSequence::new(MuRule::Tower);
    let mut reg = SigmaRegistry::in_memory();
    let mut rng = seeded(22);
    for _ in 0..60 {
        let x = random_window(&mut rng, 10);
        let b = mr_norm_bounds(&RleVec::from_finvec(&x).unwrap(), &mu, &mut reg).unwrap();
        assert_eq!((b.lower.clone(), b.method), (b.upper.clone(), BoundMethod::Exact));
        assert_eq!(mr_brute(&x, &mu, &mut reg).unwrap(), b.lower);
    }
}

#[test]
fn weighted_vector_of_first_size() {
    let mu = MuSequence::default();
    let mut reg = SigmaRegistry::in_memory();
    let x = FinVec::from_entries(IndexScheme::MrLine, [(Index::Nat(3), Q::from_integer(1.into()))]).unwrap();
    let b = mr_norm_bounds(&RleVec::from_finvec(&x).unwrap(), &mu, &mut reg).unwrap();
    assert_eq!((b.lower, b.upper), (Q::from_integer(1.into()), Q::from_integer(1.into())));
}

#[test]
fn special_vector_inequalities() {
    let mu = MuSequence::default();
    let mut reg = SigmaRegistry::in_memory();
    for n in 1..=3 {
        let v = build_special_vectors(n, &mu, &mut reg).unwrap();
        assert_eq!(v.plus.runs().len(), 2 * n);
        let plus = mr_norm_bounds(&v.plus, &mu, &mut reg).unwrap();
        assert!(plus.lower >= Q::from_integer((2 * n as i64).into()));
        assert_eq!(plus.witness.eval(&v.plus, &mu).unwrap(), plus.lower);
        let alt = mr_norm_bounds(&v.alternating, &mu, &mut reg).unwrap();
        assert!(alt.upper <= Q::from_integer(5.into()), "n={n} upper={}", alt.upper);
        assert!(alt.lower <= alt.upper);
    }
}

#[test]
fn special_vectors_after_a_busy_registry() {
    // Many earlier registrations push σ of the second prefix up; the
    // inequalities must survive.
    let mu = MuSequence::default();
    let mut reg = SigmaRegistry::in_memory();
    let mut rng = seeded(23);
    for _ in 0..20 {
        let x = random_window(&mut rng, 10);
        mr_norm_bounds(&RleVec::from_finvec(&x).unwrap(), &mu, &mut reg).unwrap();
    }
    assert!(reg.len() > 10);
    for n in 1..=3 {
        let v = build_special_vectors(n, &mu, &mut reg).unwrap();
        assert!(mr_norm_bounds(&v.plus, &mu, &mut reg).unwrap().lower >= Q::from_integer((2 * n as i64).into()));
        assert!(mr_norm_bounds(&v.alternating, &mu, &mut reg).unwrap().upper <= Q::from_integer(5.into()));
    }
}

#[test]
fn certificate_holds_for_shipped_rule() {
    let mu = MuSequence::default();
    for p in [4, 8, 16] {
        let c = mu.certificate(p);
        assert!(c.holds && c.total <= q(1, 2), "p={p}: {}", c.total);
    }
}

#[test]
fn registry_replays_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sigma.jsonl");
    let mu = MuSequence::default();
    let first = {
        let mut reg = SigmaRegistry::open(&path).unwrap();
        build_special_vectors(3, &mu, &mut reg).unwrap();
        reg.log_text()
    };
    let mut again = SigmaRegistry::open(&path).unwrap();
    assert_eq!(again.log_text(), first);
    let v = build_special_vectors(3, &mu, &mut again).unwrap();
    assert_eq!(again.log_text(), first);
    assert_eq!(v.seq.weights.len(), 3);
}
