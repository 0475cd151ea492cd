//! Acceptance criteria. Each test prints a single `PASS`/`FAIL` line; run
//! with `--nocapture` to see them alongside the harness summary.

use rand::Rng;

use markov_identity::contrast::{contrast, renyi_rate_via_paths};
use markov_identity::embedding::{build_symmetrizer, lump, verify_symmetrization};
use markov_identity::generate::{random_vtest_pair, VtestPair};
use markov_identity::markov::{RationalStationary, TransitionMatrix};
use markov_identity::paths::{verify_monotonicity_equality, verify_path_morphism};
use markov_identity::sampling::{embed_trajectory, simulate, RandomSource};
use markov_identity::testing::{sample_complexity_scan, PluginTester, TestConfig};

const SEED: u64 = 20_240_917;

/// Smallest grid length whose estimated risk fell below `δ` for the fixture
/// pair, grid `10, 20, …, 100`, seed 2024, 200 trials.
const SCAN_N_STAR: usize = 40;

fn report(criterion: u32, name: &str, passed: bool, detail: String) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("criterion {criterion} [{name}]: {verdict} ({detail})");
    assert!(passed, "criterion {criterion} [{name}] failed: {detail}");
}

fn pairs(
    stream: u64,
    count: usize,
    states: std::ops::RangeInclusive<usize>,
    max_delta: u64,
) -> Vec<VtestPair> {
    let mut rng = RandomSource::new(SEED, stream).rng();
    (0..count)
        .map(|_| {
            let k = rng.random_range(states.clone());
            random_vtest_pair(&mut rng, k, max_delta).unwrap()
        })
        .collect()
}

#[test]
fn criterion_1_contrast_preservation() {
    let mut worst = 0.0f64;
    let cases = pairs(1, 200, 2..=5, 12);
    for pair in &cases {
        let s = build_symmetrizer(&pair.rational, pair.reference.edges()).unwrap();
        let base = contrast(&pair.alternative, &pair.reference).unwrap().k;
        let lifted = contrast(
            &s.embed_matrix(&pair.alternative).unwrap(),
            &s.embed_matrix(&pair.reference).unwrap(),
        )
        .unwrap()
        .k;
        worst = worst.max((base - lifted).abs());
    }
    report(
        1,
        "contrast preservation",
        worst <= 1e-9,
        format!("{} pairs, worst |K - K_lifted| = {worst:.3e}", cases.len()),
    );
}

#[test]
fn criterion_2_symmetrization() {
    let (mut sym, mut uni, mut ret) = (0.0f64, 0.0f64, 0.0f64);
    let cases = pairs(2, 200, 2..=5, 12);
    for pair in &cases {
        let s = build_symmetrizer(&pair.rational, pair.reference.edges()).unwrap();
        sym = sym.max(verify_symmetrization(&s, &pair.reference).unwrap());
        let law = s
            .embedding()
            .embed_distribution(&pair.rational.to_distribution())
            .unwrap();
        let u = 1.0 / s.delta() as f64;
        uni = uni.max(
            law.probs()
                .iter()
                .map(|p| (p - u).abs())
                .fold(0.0, f64::max),
        );
        let embedded = s.embed_matrix(&pair.reference).unwrap();
        ret = ret.max(
            lump(&embedded, s.lumping())
                .unwrap()
                .max_abs_diff(&pair.reference),
        );
    }
    report(
        2,
        "symmetrization",
        sym <= 1e-12 && uni <= 1e-12 && ret <= 1e-12,
        format!("asymmetry {sym:.3e}, law {uni:.3e}, retraction {ret:.3e}"),
    );
}

#[test]
fn criterion_3_path_morphism() {
    let (mut l1, mut renyi) = (0.0f64, 0.0f64);
    let cases = pairs(3, 50, 2..=4, 6);
    for (i, pair) in cases.iter().enumerate() {
        let n = 2 + i % 3;
        let s = build_symmetrizer(&pair.rational, pair.reference.edges()).unwrap();
        l1 = l1.max(verify_path_morphism(&pair.reference, s.embedding(), n).unwrap());
        let (a, b) =
            verify_monotonicity_equality(&pair.alternative, &pair.reference, s.embedding(), n)
                .unwrap();
        renyi = renyi.max((a - b).abs());
    }
    report(
        3,
        "path morphism",
        l1 <= 1e-12 && renyi <= 1e-10,
        format!("path law {l1:.3e}, renyi {renyi:.3e}"),
    );
}

#[test]
fn criterion_4_rate_convergence() {
    let mut failures = 0;
    let cases = pairs(4, 20, 2..=3, 10);
    for pair in &cases {
        let pi = pair.rational.to_distribution();
        let rate = contrast(&pair.alternative, &pair.reference)
            .unwrap()
            .renyi_rate;
        let gap = |n| {
            (renyi_rate_via_paths(&pair.alternative, &pair.reference, &pi, &pi, n).unwrap() - rate)
                .abs()
        };
        if gap(12) >= gap(4) + 1e-9 {
            failures += 1;
        }
    }
    report(
        4,
        "rate convergence",
        failures == 0,
        format!("{failures} of {} pairs not closer at n=12", cases.len()),
    );
}

#[test]
fn criterion_5_sample_complexity_scan() {
    let reference = TransitionMatrix::from_rows(&[
        vec![0.8, 0.1, 0.1],
        vec![0.1, 0.8, 0.1],
        vec![0.05, 0.05, 0.9],
    ])
    .unwrap();
    let alternative = TransitionMatrix::from_rows(&[
        vec![0.16, 0.04, 0.8],
        vec![0.04, 0.16, 0.8],
        vec![0.4, 0.4, 0.2],
    ])
    .unwrap();
    let r = RationalStationary::new(vec![1, 1, 2], 4).unwrap();
    let cfg = TestConfig::new(0.15, 0.2, 1, 2024).unwrap();
    let grid: Vec<usize> = (1..=10).map(|i| 10 * i).collect();
    let table = sample_complexity_scan(
        &reference,
        &r,
        &[alternative],
        &cfg,
        &grid,
        200,
        &PluginTester::default(),
    )
    .unwrap();
    let row = table.rows.iter().find(|row| row.n == SCAN_N_STAR).unwrap();
    report(
        5,
        "sample complexity scan",
        table.n_star == Some(SCAN_N_STAR) && row.risk_estimate < 0.2,
        format!(
            "n* = {:?}, risk at n* = {}",
            table.n_star, row.risk_estimate
        ),
    );
}

#[test]
fn criterion_6_embedded_trajectory_commutes() {
    let mut worst = 0.0f64;
    let cases = pairs(6, 10, 2..=4, 8);
    for (case, pair) in cases.iter().enumerate() {
        let s = build_symmetrizer(&pair.rational, pair.reference.edges()).unwrap();
        let lifted = s.embed_matrix(&pair.reference).unwrap();
        let case = case as u64;
        let x = simulate(
            &pair.reference,
            &pair.rational.probs(),
            100_000,
            &RandomSource::new(SEED, 100 + 2 * case),
        )
        .unwrap();
        let y =
            embed_trajectory(s.embedding(), &x, &RandomSource::new(SEED, 101 + 2 * case)).unwrap();
        let d = s.delta();
        let counts = y.transition_counts();
        for a in 0..d {
            let out: u64 = counts[a * d..(a + 1) * d].iter().sum();
            for b in 0..d {
                let hat = counts[a * d + b] as f64 / out as f64;
                worst = worst.max((hat - lifted.get(a, b)).abs());
            }
        }
    }
    report(
        6,
        "embedded trajectory commutes",
        worst <= 0.02,
        format!(
            "{} cases, worst empirical deviation {worst:.4}",
            cases.len()
        ),
    );
}

#[test]
fn criterion_7_reducible_pair() {
    let p = TransitionMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let q = TransitionMatrix::from_rows(&[vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
    let c = contrast(&p, &q).unwrap();
    report(
        7,
        "reducible pair",
        c.k.abs() < 1e-12 && p.max_abs_diff(&q) > 0.0,
        format!("K = {:e} for distinct chains", c.k),
    );
}
