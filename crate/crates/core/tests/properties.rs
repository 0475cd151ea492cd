use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::Rng;

use markov_identity::contrast::{contrast, renyi_rate_via_paths};
use markov_identity::embedding::{
    build_symmetrizer, induced_edge_image, is_lumpable, lump, verify_symmetrization, LUMP_TOL,
};
use markov_identity::generate::{
    random_memoryless_embedding, random_positive_matrix, random_stochastic, random_vtest_pair,
};
use markov_identity::markov::{
    check_vtest_membership, rationalize, spectral_radius, stationary_distribution, EdgeSet,
    RationalStationary, TransitionMatrix,
};
use markov_identity::paths::{verify_monotonicity_equality, verify_path_morphism};
use markov_identity::sampling::{embed_trajectory, simulate, RandomSource};
use markov_identity::testing::{reduced_identity_test, PluginTester, SymmetricTester, TestConfig};

fn rng(seed: u64) -> rand_chacha::ChaCha20Rng {
    RandomSource::new(seed, 0).rng()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn stationary_law_is_a_fixed_point(seed in any::<u64>(), k in 1usize..7) {
        let p = random_stochastic(&mut rng(seed), k);
        let pi = stationary_distribution(&p).unwrap();
        prop_assert!(pi.residual(&p) <= 1e-10);
        prop_assert!((pi.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(pi.probs().iter().all(|&v| v > 0.0));
    }

    #[test]
    fn stochastic_matrices_have_unit_radius(seed in any::<u64>(), k in 1usize..7) {
        let p = random_stochastic(&mut rng(seed), k);
        let rho = spectral_radius(&p.to_dmatrix()).unwrap();
        prop_assert!((rho - 1.0).abs() <= 1e-10, "rho = {rho}");
    }

    #[test]
    fn radius_is_homogeneous(seed in any::<u64>(), k in 1usize..6) {
        let a = random_positive_matrix(&mut rng(seed), k);
        let rho = spectral_radius(&a).unwrap();
        for c in [0.5, 2.0, 10.0] {
            let scaled = spectral_radius(&(&a * c)).unwrap();
            assert_relative_eq!(scaled, c * rho, max_relative = 1e-10);
        }
    }

    #[test]
    fn reversibility_matches_symmetric_flow(seed in any::<u64>(), k in 2usize..6) {
        let mut g = rng(seed);
        let pair = random_vtest_pair(&mut g, k, 12).unwrap();
        let pi = pair.rational.to_distribution();
        prop_assert!(pair.reference.is_reversible(&pi, 1e-9));
        // a generic dense chain is not reversible
        let p = random_stochastic(&mut g, 3);
        let pi = stationary_distribution(&p).unwrap();
        let flow_defect = p.detailed_balance_defect(pi.probs());
        prop_assert_eq!(p.is_reversible(&pi, 1e-9), flow_defect <= 1e-9);
    }

    #[test]
    fn rationalize_round_trip(seed in any::<u64>(), k in 1usize..6) {
        let mut g = rng(seed);
        let delta = g.random_range(k as u64..=60);
        let mut nums = vec![1u64; k];
        for _ in 0..(delta - k as u64) {
            nums[g.random_range(0..k)] += 1;
        }
        let r = RationalStationary::new(nums.clone(), delta).unwrap();
        let back = rationalize(&r.to_distribution(), 1000).unwrap();
        let g0 = num_gcd(&nums, delta);
        prop_assert_eq!(back.denominator(), delta / g0);
        let expect: Vec<u64> = nums.iter().map(|v| v / g0).collect();
        prop_assert_eq!(back.numerators(), &expect[..]);
    }

    #[test]
    fn contrast_is_symmetric_and_bounded(seed in any::<u64>(), k in 1usize..6) {
        let mut g = rng(seed);
        let p = random_stochastic(&mut g, k);
        let q = random_stochastic(&mut g, k);
        let a = contrast(&p, &q).unwrap().k;
        let b = contrast(&q, &p).unwrap().k;
        prop_assert!((a - b).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(contrast(&p, &p).unwrap().k.abs() <= 1e-12);
    }

    #[test]
    fn rate_is_consistent_with_contrast(seed in any::<u64>(), k in 1usize..5) {
        let mut g = rng(seed);
        let p = random_stochastic(&mut g, k);
        let q = random_stochastic(&mut g, k);
        let c = contrast(&p, &q).unwrap();
        prop_assert!((c.renyi_rate + 2.0 * (1.0 - c.k).ln()).abs() <= 1e-12);
    }

    #[test]
    fn embedding_section_and_transport(seed in any::<u64>(), k in 1usize..5) {
        let mut g = rng(seed);
        let p = random_stochastic(&mut g, k);
        let l = random_memoryless_embedding(&mut g, k, 9).unwrap();
        let embedded = l.embed_matrix(&p).unwrap();
        prop_assert!(is_lumpable(&embedded, l.lumping(), LUMP_TOL));
        prop_assert!(lump(&embedded, l.lumping()).unwrap().max_abs_diff(&p) <= 1e-12);
        let pi = stationary_distribution(&p).unwrap();
        let pushed = l.embed_distribution(&pi).unwrap();
        prop_assert!(pushed.residual(&embedded) <= 1e-10);
        // the pushed law is the stationary law of the embedded chain
        let direct = stationary_distribution(&embedded).unwrap();
        prop_assert!(direct.max_abs_diff(pushed.probs()) <= 1e-10);
    }

    #[test]
    fn symmetrizer_symmetrizes(seed in any::<u64>(), k in 2usize..6) {
        let pair = random_vtest_pair(&mut rng(seed), k, 12).unwrap();
        let s = build_symmetrizer(&pair.rational, pair.reference.edges()).unwrap();
        prop_assert_eq!(s.delta() as u64, pair.rational.denominator());
        prop_assert!(verify_symmetrization(&s, &pair.reference).unwrap() <= 1e-12);
        let embedded = s.embed_matrix(&pair.reference).unwrap();
        prop_assert!(embedded.max_asymmetry() <= 1e-12);
        prop_assert_eq!(
            &induced_edge_image(s.lumping(), s.target_edges()).unwrap(),
            pair.reference.edges()
        );
    }

    #[test]
    fn contrast_survives_symmetrization(seed in any::<u64>(), k in 2usize..6) {
        let pair = random_vtest_pair(&mut rng(seed), k, 12).unwrap();
        let s = build_symmetrizer(&pair.rational, pair.reference.edges()).unwrap();
        let base = contrast(&pair.alternative, &pair.reference).unwrap().k;
        let lifted = contrast(
            &s.embed_matrix(&pair.alternative).unwrap(),
            &s.embed_matrix(&pair.reference).unwrap(),
        )
        .unwrap()
        .k;
        prop_assert!((base - lifted).abs() <= 1e-9);
    }

    #[test]
    fn embedded_chains_stay_in_the_symmetric_class(seed in any::<u64>(), k in 2usize..6) {
        let pair = random_vtest_pair(&mut rng(seed), k, 12).unwrap();
        let s = build_symmetrizer(&pair.rational, pair.reference.edges()).unwrap();
        let delta = s.delta() as u64;
        let uniform = RationalStationary::new(vec![1; delta as usize], delta).unwrap();
        let lifted = s.embed_matrix(&pair.alternative).unwrap();
        prop_assert!(check_vtest_membership(&lifted, &uniform, s.target_edges()).is_member());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn path_morphism_and_renyi_equality(seed in any::<u64>(), k in 2usize..4, n in 2usize..5) {
        let pair = random_vtest_pair(&mut rng(seed), k, 6).unwrap();
        let s = build_symmetrizer(&pair.rational, pair.reference.edges()).unwrap();
        prop_assert!(verify_path_morphism(&pair.reference, s.embedding(), n).unwrap() <= 1e-12);
        let (a, b) =
            verify_monotonicity_equality(&pair.alternative, &pair.reference, s.embedding(), n)
                .unwrap();
        prop_assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
    }

    #[test]
    fn path_rate_is_monotone_towards_the_contrast_rate(seed in any::<u64>()) {
        let pair = random_vtest_pair(&mut rng(seed), 2, 8).unwrap();
        let pi = pair.rational.to_distribution();
        let rate = contrast(&pair.alternative, &pair.reference).unwrap().renyi_rate;
        let r = |n| {
            renyi_rate_via_paths(&pair.alternative, &pair.reference, &pi, &pi, n).unwrap()
        };
        prop_assert!((r(12) - rate).abs() < (r(4) - rate).abs() + 1e-9);
    }

    #[test]
    fn verdict_is_deterministic(seed in any::<u64>()) {
        let pair = random_vtest_pair(&mut rng(seed), 3, 10).unwrap();
        let cfg = TestConfig::new(0.1, 0.2, 400, seed).unwrap();
        let x = simulate(
            &pair.alternative,
            &pair.rational.probs(),
            cfg.n,
            &RandomSource::new(seed, 1),
        )
        .unwrap();
        let run = || {
            reduced_identity_test(
                &pair.reference,
                &pair.rational,
                &x,
                &cfg,
                &PluginTester::default(),
                &RandomSource::new(seed, 2),
                &RandomSource::new(seed, 3),
            )
            .unwrap()
        };
        prop_assert_eq!(run(), run());
    }

    #[test]
    fn embedded_trajectory_lumps_back(seed in any::<u64>(), k in 1usize..5) {
        let mut g = rng(seed);
        let p = random_stochastic(&mut g, k);
        let l = random_memoryless_embedding(&mut g, k, 9).unwrap();
        let pi = stationary_distribution(&p).unwrap();
        let x = simulate(&p, pi.probs(), 200, &RandomSource::new(seed, 1)).unwrap();
        let y = embed_trajectory(&l, &x, &RandomSource::new(seed, 2)).unwrap();
        let lumped: Vec<usize> = y.states.iter().map(|&s| l.lumping().map(s)).collect();
        prop_assert_eq!(lumped, x.states);
    }
}

fn num_gcd(nums: &[u64], delta: u64) -> u64 {
    nums.iter()
        .fold(delta, |a, &b| num_integer::Integer::gcd(&a, &b))
}

#[test]
fn empirical_transitions_converge() {
    let mut g = rng(99);
    for _ in 0..5 {
        let p = random_stochastic(&mut g, 3);
        let pi = stationary_distribution(&p).unwrap();
        let x = simulate(&p, pi.probs(), 100_000, &RandomSource::new(5, g.random())).unwrap();
        let counts = x.transition_counts();
        for a in 0..3 {
            let out: u64 = counts[a * 3..a * 3 + 3].iter().sum();
            for b in 0..3 {
                let hat = counts[a * 3 + b] as f64 / out as f64;
                assert!((hat - p.get(a, b)).abs() < 0.02);
            }
        }
    }
}

#[test]
fn embedded_trajectory_matches_embedded_matrix() {
    let mut g = rng(7);
    let pair = random_vtest_pair(&mut g, 3, 8).unwrap();
    let s = build_symmetrizer(&pair.rational, pair.reference.edges()).unwrap();
    let lifted = s.embed_matrix(&pair.reference).unwrap();
    let x = simulate(
        &pair.reference,
        &pair.rational.probs(),
        200_000,
        &RandomSource::new(1, 0),
    )
    .unwrap();
    let y = embed_trajectory(s.embedding(), &x, &RandomSource::new(1, 1)).unwrap();
    let d = s.delta();
    let counts = y.transition_counts();
    for a in 0..d {
        let out: u64 = counts[a * d..(a + 1) * d].iter().sum();
        for b in 0..d {
            let hat = counts[a * d + b] as f64 / out as f64;
            assert!((hat - lifted.get(a, b)).abs() < 0.02, "({a},{b})");
        }
    }
}

#[test]
fn short_paths_have_the_exact_law() {
    use markov_identity::paths::{encode, path_distribution};
    let p = TransitionMatrix::from_rows(&[vec![0.5, 0.5], vec![0.25, 0.75]]).unwrap();
    let pi = stationary_distribution(&p).unwrap();
    for n in 1..=4 {
        let exact = path_distribution(&p, &pi, n).unwrap();
        let mut hist = vec![0u64; exact.probs().len()];
        let reps = 100_000u64;
        let mut g = RandomSource::new(n as u64, 0).rng();
        for _ in 0..reps {
            let x = simulate(&p, pi.probs(), n, &RandomSource::new(n as u64, g.random())).unwrap();
            hist[encode(&x.states, 2)] += 1;
        }
        let tv: f64 = exact
            .probs()
            .iter()
            .zip(&hist)
            .map(|(q, &c)| (q - c as f64 / reps as f64).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv <= 0.02, "n={n}: tv={tv}");
    }
}

#[test]
fn contrast_vanishes_on_a_reducible_pair() {
    // two absorbing states versus two chains mixing inside disjoint halves
    let p = TransitionMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let q = TransitionMatrix::from_rows(&[vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
    let c = contrast(&p, &q).unwrap();
    assert!(c.k.abs() < 1e-12);
    assert!(p.max_abs_diff(&q) > 0.0);
}

#[test]
fn uniform_reference_skips_the_expansion() {
    let rows = vec![
        vec![0.5, 0.25, 0.25],
        vec![0.25, 0.5, 0.25],
        vec![0.25, 0.25, 0.5],
    ];
    let p = TransitionMatrix::from_rows(&rows).unwrap();
    let r = RationalStationary::new(vec![1, 1, 1], 3).unwrap();
    let x = simulate(&p, &r.probs(), 500, &RandomSource::new(3, 0)).unwrap();
    let cfg = TestConfig::new(0.1, 0.2, 500, 3).unwrap();
    let tester = PluginTester::default();
    let src = RandomSource::new(3, 2);
    let via =
        reduced_identity_test(&p, &r, &x, &cfg, &tester, &RandomSource::new(3, 1), &src).unwrap();
    let direct = tester.test(&p, &x, &cfg, &src).unwrap();
    assert_eq!(via, direct);
    let d = EdgeSet::complete(3).unwrap();
    assert_eq!(build_symmetrizer(&r, &d).unwrap().delta(), 3);
}
