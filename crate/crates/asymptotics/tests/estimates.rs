use jsm_asymptotics::estimate::format_ratio;
use jsm_asymptotics::*;
use jsm_core::random::{rational, seeded};
use jsm_core::{q, qi, FinVec, Index, IndexScheme, Q};
use num_traits::{Signed, Zero};

fn ground(n: u64) -> Vec<u64> {
    (1..=n).collect()
}

fn estimate(g: &SequenceGenerator, l: usize, k_max: usize, random: usize, n: u64) -> JsmEstimate {
    let nets = standard_nets(l, k_max, random, 9);
    jsm_estimate(g, l, k_max, &nets, &StabilizationSchedule::halving(k_max), &ground(n), DEFAULT_BUDGET).unwrap()
}

#[test]
fn lp_tables_match_the_coefficient_norm() {
    for p in [qi(1), qi(2)] {
        let est = estimate(&SequenceGenerator::Lp { p: p.clone() }, 2, 3, 30, 10);
        assert_eq!(est.outcome, Outcome::Stable);
        for t in &est.tables {
            assert!(t.exactly_constant(), "p={p} k={}", t.k);
            for row in &t.rows {
                let flat: Vec<&Q> = row.coeffs.iter().flatten().collect();
                let expect = if p == qi(1) {
                    flat.iter().map(|c| c.abs()).sum::<Q>().pow(2)
                } else {
                    flat.iter().map(|c| *c * *c).sum::<Q>()
                };
                assert_eq!(row.representative.squared(), Some(&expect));
            }
        }
    }
}

#[test]
fn l1_blocks_are_isometric_l1() {
    let est = estimate(&SequenceGenerator::L1Blocks { block: 2 }, 2, 2, 20, 8);
    let t = est.table(2).unwrap();
    assert!(t.exactly_constant());
    for row in &t.rows {
        let s: Q = row.coeffs.iter().flatten().map(|c| c.abs()).sum();
        assert_eq!(row.representative.squared(), Some(&(&s * &s)));
    }
    // all-ones against ℓ₂ on four coordinates: 4 / 2
    let e = equivalence_constant(&est, 2, &qi(2)).unwrap();
    assert!(e.ratio.squared.unwrap() >= qi(4));
}

#[test]
fn james_pair_is_plegma_spreading() {
    let nets: Vec<CoeffNet> = (1..=3).map(|k| CoeffNet::signs(2, k)).collect();
    let est = jsm_estimate(&SequenceGenerator::JamesPair, 2, 3, &nets, &StabilizationSchedule::halving(3), &ground(12), DEFAULT_BUDGET).unwrap();
    assert_eq!(est.outcome, Outcome::Stable);
    assert_eq!(est.thinned, ground(12));
    for t in &est.tables {
        assert!(t.families > 0 && t.exactly_constant(), "k={}", t.k);
    }
}

#[test]
fn lp_three_halves_is_spreading_without_rounding_noise() {
    let est = estimate(&SequenceGenerator::Lp { p: q(3, 2) }, 2, 2, 40, 9);
    for t in &est.tables {
        assert_eq!(t.oscillation(), 0.0);
    }
}

#[test]
fn rerun_on_a_subset_reproduces_the_table() {
    let g = SequenceGenerator::Lp { p: qi(3) };
    let nets = standard_nets(2, 2, 20, 3);
    let sched = StabilizationSchedule::halving(2);
    let full = jsm_estimate(&g, 2, 2, &nets, &sched, &ground(12), DEFAULT_BUDGET).unwrap();
    let sub: Vec<u64> = full.thinned.iter().copied().filter(|n| n % 3 != 0).collect();
    let part = jsm_estimate(&g, 2, 2, &nets, &sched, &sub, DEFAULT_BUDGET).unwrap();
    for (a, b) in full.tables.iter().zip(&part.tables) {
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert!(ra.representative.within(&rb.representative, &a.delta));
        }
    }
}

#[test]
fn refining_the_net_never_lowers_the_constant() {
    let fam = build_level_block_family(40, 8, 2, 4).unwrap();
    let g = SequenceGenerator::LevelBlocks(fam);
    let sched = StabilizationSchedule::halving(2);
    let coarse = vec![CoeffNet::signs(2, 1), CoeffNet::signs(2, 2)];
    let fine: Vec<CoeffNet> = coarse.iter().zip(standard_nets(2, 2, 30, 8)).map(|(c, f)| c.refine(&f)).collect();
    let a = jsm_estimate(&g, 2, 2, &coarse, &sched, &ground(8), DEFAULT_BUDGET).unwrap();
    let b = jsm_estimate(&g, 2, 2, &fine, &sched, &ground(8), DEFAULT_BUDGET).unwrap();
    let ea = equivalence_constant(&a, 2, &qi(2)).unwrap();
    let eb = equivalence_constant(&b, 2, &qi(2)).unwrap();
    assert!(!ea.ratio.gt(&eb.ratio));
    assert!(eb.ratio.at_most_sqrt_plus(&qi(2), &q(1, 10)), "{}", format_ratio(&eb.ratio));
}

#[test]
fn level_block_families_respect_the_square_function_bounds() {
    let mut rng = seeded(31);
    for seed in 0..20 {
        let l = 1 + seed as usize % 2;
        let bands = 1 + seed as usize % 4;
        let fam = build_level_block_family(24, bands, l, seed).unwrap();
        let mut coeffs = sign_vectors(bands);
        coeffs.extend((0..100).map(|_| (0..bands).map(|_| rational(&mut rng, 5, 4)).collect::<Vec<_>>()));
        let r = level_block_check(&fam, &coeffs).unwrap();
        assert!(r.holds && r.lower_ratio >= qi(1));
        assert!(r.upper_ratio <= qi(2) * q(21, 20).pow(2));
    }
}

#[test]
fn incomparable_nodes_have_ratio_one() {
    let e = |s: &str| FinVec::unit(IndexScheme::Dyadic, Index::node(s));
    let x = e("00").add(&e("01")).unwrap();
    assert_eq!(jsm_spaces::jt_norm_sq(&x).unwrap().value, qi(2));
}

#[test]
fn suppression_constants() {
    let net: Vec<Vec<Q>> = CoeffNet::standard(2, 2, 40, 2).matrices.iter().map(|m| m.concat()).collect();
    let first = jsm_plegma::enumerate(&ground(4), 2, 2, true).next().unwrap();
    for p in [q(3, 2), qi(2), qi(3)] {
        let g = SequenceGenerator::Lp { p: p.clone() };
        let vs: Vec<FinVec> = (1..=2).flat_map(|i| (1..=2).map(move |j| (i, j))).map(|(i, j)| g.vector(i, first.get(i, j), 2).unwrap()).collect();
        let s = suppression_constant(&vs, &g.ambient(), &net).unwrap();
        assert!(s.ratio.value <= 1.0 + 1e-12, "p={p}: {}", s.ratio.value);
    }
    let fam = build_level_block_family(24, 4, 2, 11).unwrap();
    let g = SequenceGenerator::LevelBlocks(fam);
    let vs: Vec<FinVec> = (1..=2).flat_map(|i| (1..=2).map(move |j| (i, j))).map(|(i, j)| g.vector(i, first.get(i, j), 2).unwrap()).collect();
    let s = suppression_constant(&vs, &Ambient::Jt, &net).unwrap();
    assert!(s.ratio.at_most_sqrt_plus(&qi(1), &q(1, 10)));
}

#[test]
fn james_pair_suppression_regression() {
    let first = jsm_plegma::enumerate(&ground(6), 2, 2, true).find(|s| s.get(1, 1) >= 2).unwrap();
    let vs: Vec<FinVec> = (1..=2)
        .flat_map(|i| (1..=2).map(move |j| (i, j)))
        .map(|(i, j)| SequenceGenerator::JamesPair.vector(i, first.get(i, j), 2).unwrap())
        .collect();
    let net: Vec<Vec<Q>> = CoeffNet::signs(2, 2).matrices.iter().map(|m| m.concat()).collect();
    let s = suppression_constant(&vs, &Ambient::James, &net).unwrap();
    let sq = s.ratio.squared.clone().unwrap();
    assert!(sq >= qi(1) && !sq.is_zero());
    assert_eq!(sq, q(5, 2));
    // Same maximum with the labelling brute force in place of the DP.
    let mut brute_best = qi(1);
    for a in &net {
        let combine = |mask: u32| {
            let mut x = FinVec::zero(IndexScheme::Natural);
            for (i, (v, c)) in vs.iter().zip(a).enumerate() {
                if mask >> i & 1 == 1 {
                    x = x.lin_comb(&qi(1), v, c).unwrap();
                }
            }
            jsm_spaces::brute::james_brute_sq(&x).unwrap()
        };
        let full = combine(15);
        for mask in 1..15 {
            brute_best = brute_best.max(combine(mask) / &full);
        }
    }
    assert_eq!(brute_best, sq);
}
