use std::collections::BTreeSet;

use jsm_core::random::seeded;
use jsm_core::{q, qi, FinVec, Index, IndexScheme, Part, Q};
use jsm_uals::cases::{ell1_extremes, ell1_selector, ell1_witnesses, greedy_slots, SelectorCase};
use jsm_uals::{
    coverage, half_subsets, minimax_descent, minimax_gap, pigeonhole_witness, pointwise_gap, residual_gap,
    Action, ConvexCombination, GapValue, OperatorModel, UalsError,
};
use rand::seq::IndexedRandom;
use rand::Rng;

fn rat<R: Rng>(rng: &mut R) -> Q {
    jsm_core::random::rational(rng, 9, 9)
}

fn calx_probe<R: Rng>(rng: &mut R, case: &SelectorCase) -> FinVec {
    let mut x = FinVec::zero(IndexScheme::MixedSum);
    for j in 1..=2 * case.n {
        for m in 1..=case.inner {
            x.set(Index::mixed(case.n, Part::X, j, m), rat(rng));
        }
    }
    x
}

/// One nonzero coordinate per slot keeps every slot norm rational.
fn calx_probe_exact<R: Rng>(rng: &mut R, case: &SelectorCase) -> FinVec {
    let mut x = FinVec::zero(IndexScheme::MixedSum);
    for j in 1..=2 * case.n {
        let m = rng.random_range(1..=case.inner);
        x.set(Index::mixed(case.n, Part::X, j, m), rat(rng));
    }
    x
}

fn exact(g: &GapValue) -> Q {
    match g {
        GapValue::Exact(v) => v.clone(),
        GapValue::Approx(v) => panic!("expected an exact value, got {v}"),
    }
}

#[test]
fn hull_containing_a_has_zero_gap() {
    let case = SelectorCase::calx(2);
    let a = case.a();
    let mut rng = seeded(3);
    let x = calx_probe(&mut rng, &case);
    let s = pointwise_gap(&a, &[a.clone()], &x).unwrap();
    assert_eq!(s.value, GapValue::Exact(qi(0)));
    let w = case.slot_witness(1);
    let s = minimax_gap(&a, &[a.clone()], &[w.clone(), w.clone(), w]).unwrap();
    assert_eq!(s.value, GapValue::Exact(qi(0)));
    assert_eq!(minimax_gap(&a, &[a.clone()], &[]), Err(UalsError::NoWitnesses));
}

#[test]
fn dimension_mismatch_is_reported() {
    let case = SelectorCase::calx(2);
    let other = SelectorCase::calx(3);
    let x = case.slot_witness(1);
    assert!(matches!(pointwise_gap(&case.a(), &[other.a()], &x), Err(UalsError::Dimension(_))));
    assert!(matches!(pointwise_gap(&other.a(), &other.hull(), &x), Err(UalsError::Dimension(_))));
}

#[test]
fn gaps_are_monotone_in_hull_and_witnesses() {
    let case = SelectorCase::calx(2);
    let a = case.a();
    let hull = case.hull();
    let mut rng = seeded(11);
    for _ in 0..20 {
        let k = rng.random_range(1..hull.len());
        let small: Vec<OperatorModel> = hull.choose_multiple(&mut rng, k).cloned().collect();
        let mut big = small.clone();
        big.extend(hull.choose_multiple(&mut rng, 2).cloned());
        let x = calx_probe_exact(&mut rng, &case);
        let gs = exact(&pointwise_gap(&a, &small, &x).unwrap().value);
        let gb = exact(&pointwise_gap(&a, &big, &x).unwrap().value);
        assert!(gb <= gs);

        let ws: Vec<FinVec> = (0..3).map(|_| calx_probe_exact(&mut rng, &case)).collect();
        let m_small = exact(&minimax_gap(&a, &big, &ws[..2]).unwrap().value);
        let m_big = exact(&minimax_gap(&a, &big, &ws).unwrap().value);
        assert!(m_small <= m_big);
        let m_fewer = exact(&minimax_gap(&a, &small, &ws).unwrap().value);
        assert!(m_big <= m_fewer);
    }
}

#[test]
fn lp_optimum_is_attained_by_its_weights() {
    let case = SelectorCase::calx(2);
    let a = case.a();
    let hull = case.hull();
    let mut rng = seeded(5);
    for _ in 0..10 {
        let ws: Vec<FinVec> = (0..3).map(|_| calx_probe(&mut rng, &case)).collect();
        let s = minimax_gap(&a, &hull, &ws).unwrap();
        let comb = s.weights.combination(&hull).unwrap();
        let worst = ws.iter().map(|w| residual_gap(&a, &comb, w).unwrap().to_f64()).fold(0.0, f64::max);
        // Random directions make the block norms irrational, so the exact
        // path is not available here and the comparison is in floating point.
        assert!((worst - s.value.to_f64()).abs() < 1e-7, "{worst} vs {}", s.value);
    }
}

#[test]
fn descent_never_beats_the_lp_on_l1_codomain() {
    let m = 6;
    let hull = ell1_extremes(m);
    let a = OperatorModel::new(hull[0].domain.clone(), hull[0].codomain.clone(), Action::OddEven);
    let mut rng = seeded(21);
    let mut close = 0;
    let mut runs = 0;
    for t in 0..15 {
        let ws: Vec<FinVec> = (0..rng.random_range(1..4))
            .map(|_| FinVec::naturals(&(0..2 * m).map(|_| rat(&mut rng)).collect::<Vec<_>>()))
            .filter(|w| !w.is_empty())
            .collect();
        if ws.is_empty() {
            continue;
        }
        let lp = minimax_gap(&a, &hull, &ws).unwrap().value.to_f64();
        let d = minimax_descent(&a, &hull, &ws, 5, t).unwrap();
        assert!(d.value >= lp - 1e-9, "{t}: descent {} below LP {lp}", d.value);
        assert!(d.value - lp <= 1e-3 * lp.max(1.0), "{t}: descent {} far above LP {lp}", d.value);
        runs += 1;
        close += usize::from(d.value - lp <= 1e-9);
    }
    println!("descent within 1e-9 of the LP on {close}/{runs} random instances");
}

#[test]
fn descent_matches_lp_on_the_tail_witnesses() {
    for m in [4, 10, 50] {
        let hull = ell1_extremes(m);
        let a = OperatorModel::new(hull[0].domain.clone(), hull[0].codomain.clone(), Action::OddEven);
        let w = ell1_witnesses(m / 2);
        let lp = minimax_gap(&a, &hull, &w).unwrap();
        assert_eq!(lp.value, GapValue::Exact(q(1, 2)));
        let d = minimax_descent(&a, &hull, &w, 20, m).unwrap();
        assert!((d.value - 0.5).abs() <= 1e-9);
    }
}

#[test]
fn ell1_selector_reproduces_a() {
    let m = 10;
    let hull = ell1_extremes(m);
    let a = OperatorModel::new(hull[0].domain.clone(), hull[0].codomain.clone(), Action::OddEven);
    let mut rng = seeded(8);
    for _ in 0..200 {
        let x = FinVec::naturals(&(0..2 * m).map(|_| rat(&mut rng)).collect::<Vec<_>>());
        let b = ell1_selector(m, &x).unwrap();
        assert_eq!(b.apply(&x).unwrap(), a.apply(&x).unwrap());
    }
    // A(x) = 0 still has an exact selector.
    let x = FinVec::naturals(&[qi(1), qi(0), qi(-1)]);
    assert_eq!(residual_gap(&a, &ell1_selector(m, &x).unwrap(), &x).unwrap(), GapValue::Exact(qi(0)));
}

#[test]
fn ell1_witness_pair_inequality() {
    // For B = Σ aᵢ B⁺ + Σ bᵢ B⁻ one witness sees 1 − Σaᵢ and the other Σaᵢ.
    let m = 8;
    let hull = ell1_extremes(m);
    let a = OperatorModel::new(hull[0].domain.clone(), hull[0].codomain.clone(), Action::OddEven);
    let w = ell1_witnesses(3);
    let mut rng = seeded(2);
    for _ in 0..100 {
        let raw: Vec<i64> = (0..8).map(|_| rng.random_range(0..5)).collect();
        let total: i64 = raw.iter().sum::<i64>().max(1);
        let mut weights: Vec<Q> = raw.iter().map(|r| q(*r, total)).collect();
        if raw.iter().all(|r| *r == 0) {
            weights[0] = qi(1);
        }
        let plus: Q = weights[..4].iter().sum();
        let comb = ConvexCombination::new(hull.clone(), weights).unwrap();
        let gp = exact(&residual_gap(&a, &comb, &w[0]).unwrap());
        let gm = exact(&residual_gap(&a, &comb, &w[1]).unwrap());
        assert!(gp >= qi(1) - &plus && gm >= plus);
        assert!(gp.max(gm) >= q(1, 2));
    }
}

#[test]
fn calx_greedy_gap_matches_the_space_norm() {
    let case = SelectorCase::calx(3);
    let a = case.a();
    let mut rng = seeded(9);
    for _ in 0..50 {
        let x = calx_probe(&mut rng, &case);
        let g = greedy_slots(&x, &case.domain.norm, case.n);
        let comb = ConvexCombination::single(case.op(g));
        let r = a.apply(&x).unwrap().sub(&comb.apply(&x).unwrap()).unwrap();
        let ours = case.codomain.norm.value(&r);
        let theirs = jsm_spaces::calx::calx_norm(&r).unwrap();
        assert!((ours - theirs).abs() < 1e-12);
        let dom = jsm_spaces::calx::calx_norm(&x).unwrap();
        assert!((case.domain.norm.value(&x) - dom).abs() < 1e-12);
        // The (n+1)-th largest slot norm is at most a 1/(n+1) share.
        assert!(ours <= dom / (case.n as f64 + 1.0) + 1e-12);
    }
}

#[test]
fn mixed_norm_matches_the_space_oracle() {
    let case = SelectorCase::mixed(q(3, 2), qi(3), 4);
    let mut rng = seeded(4);
    for _ in 0..50 {
        let x = calx_probe(&mut rng, &case);
        let y = case.a().apply(&x).unwrap();
        let inter = y
            .map_indices(IndexScheme::Interleaved(2 * case.n), |i| match i {
                Index::Mixed { slot, inner, .. } => Ok(Index::pair(*slot, *inner)),
                _ => unreachable!(),
            })
            .unwrap();
        let theirs = jsm_spaces::mixed_pq_norm(&inter, &q(3, 2), &qi(3)).unwrap().value;
        assert!((case.codomain.norm.value(&y) - theirs).abs() < 1e-12 * theirs.max(1.0));
    }
}

#[test]
fn structured_selectors_match_matrices() {
    let case = SelectorCase::calx(2);
    let mut rng = seeded(6);
    for op in case.hull() {
        let mat = op.expand().unwrap();
        for _ in 0..5 {
            let x = calx_probe(&mut rng, &case);
            assert_eq!(op.apply(&x).unwrap(), mat.apply(&x).unwrap());
        }
    }
}

#[test]
fn uniform_mixture_coverage_from_scratch() {
    // Independent count: each slot of {1..4} lies in 3 of the 6 two-element subsets.
    let mut subsets: Vec<BTreeSet<u32>> = Vec::new();
    for a in 1..=4u32 {
        for b in a + 1..=4 {
            subsets.push([a, b].into());
        }
    }
    assert_eq!(subsets.len(), 6);
    let counts: Vec<usize> = (1..=4).map(|j| subsets.iter().filter(|g| g.contains(&j)).count()).collect();
    assert_eq!(counts, vec![3; 4]);
    let w = vec![q(1, 6); 6];
    let cov = coverage(2, &subsets, &w).unwrap();
    assert_eq!(cov, counts.iter().map(|c| q(*c as i64, 6)).collect::<Vec<_>>());
    let s = pigeonhole_witness(2, &subsets, &w).unwrap();
    assert_eq!((s.slot, s.coverage), (1, q(1, 2)));
}

#[test]
fn averaging_identity_holds_for_random_mixtures() {
    let mut rng = seeded(13);
    for n in 1..=4u32 {
        let sets = half_subsets(n);
        for _ in 0..50 {
            let raw: Vec<i64> = sets.iter().map(|_| rng.random_range(0..4)).collect();
            let total: i64 = raw.iter().sum();
            if total == 0 {
                continue;
            }
            let w: Vec<Q> = raw.iter().map(|r| q(*r, total)).collect();
            let cov = coverage(n, &sets, &w).unwrap();
            assert_eq!(cov.iter().sum::<Q>() / Q::from_integer((2 * n).into()), q(1, 2));
            let s = pigeonhole_witness(n, &sets, &w).unwrap();
            assert!(s.coverage <= q(1, 2));
            assert!(cov[..s.slot as usize - 1].iter().all(|c| *c > q(1, 2)));
        }
    }
}
