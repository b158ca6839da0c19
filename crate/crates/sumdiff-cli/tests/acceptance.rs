//! Release gate: ten numbered end-to-end checks with hard tolerances and
//! runtime budgets. Each check prints one `PASS criterion NN` line with the
//! measured quantities, so `cargo test --test acceptance -- --show-output`
//! reads as a report. Thresholds marked "frozen" were pinned from pilot runs
//! and must not be loosened to make a failing run green.

use std::time::{Duration, Instant};

use sumdiff::oracle::{exact_cov, exact_law};
use sumdiff::rng::SplitMix64;
use sumdiff::{
    cov_bound_markov, expectation_gap_scaled, expectation_summary, mc, p_diff_hit, p_sum_hit,
    sum_dominant_hunt, sweep, DensitySchedule, Dominance, HitFamily, ModelParams,
};

const P_GRID: [f64; 4] = [0.1, 0.25, 0.5, 0.9];

fn assert_budget(start: Instant, limit: Duration, label: &str) -> Duration {
    let elapsed = start.elapsed();
    assert!(
        elapsed < limit,
        "{label} took {elapsed:.2?}, budget {limit:.2?}"
    );
    elapsed
}

/// Closed-form hit probabilities and expectations agree with exhaustive
/// enumeration for every universe size up to 12 on the probability grid.
#[test]
fn criterion_01_hit_laws_match_enumeration() {
    let start = Instant::now();
    let mut max_hit_err = 0.0f64;
    let mut max_exp_err = 0.0f64;
    for n in 1..=12usize {
        for &p in &P_GRID {
            let params = ModelParams::new(n, p).unwrap();
            let law = exact_law(&params).unwrap();
            for i in 0..=2 * n - 2 {
                let closed = p_sum_hit(i, &params).unwrap();
                max_hit_err = max_hit_err.max((closed - law.p_sum_hit_by_index[i]).abs());
            }
            let h = n as i64 - 1;
            for d in -h..=h {
                let closed = p_diff_hit(d, &params).unwrap();
                let idx = (d + h) as usize;
                max_hit_err = max_hit_err.max((closed - law.p_diff_hit_by_index[idx]).abs());
            }
            let summary = expectation_summary(&params);
            max_exp_err = max_exp_err.max((summary.exact_sum - law.e_s1).abs());
            max_exp_err = max_exp_err.max((summary.exact_diff - law.e_s2).abs());
        }
    }
    assert!(max_hit_err <= 1e-12, "hit probability error {max_hit_err:e}");
    assert!(max_exp_err <= 1e-10, "expectation error {max_exp_err:e}");
    let elapsed = assert_budget(start, Duration::from_secs(60), "criterion 01");
    println!(
        "PASS criterion 01: closed-form laws match enumeration for n <= 12 \
         (max hit err {max_hit_err:.2e}, max expectation err {max_exp_err:.2e}, {elapsed:.2?})"
    );
}

/// The enumerated variance of each pair-set size equals the sum of indicator
/// variances plus twice the pairwise covariances.
#[test]
fn criterion_02_variance_decomposition() {
    let start = Instant::now();
    let mut max_err = 0.0f64;
    for n in 1..=10usize {
        for &p in &P_GRID {
            let params = ModelParams::new(n, p).unwrap();
            let law = exact_law(&params).unwrap();
            let h = n as i64 - 1;
            for family in [HitFamily::Sum, HitFamily::Diff] {
                let indices: Vec<i64> = match family {
                    HitFamily::Sum => (0..=2 * h).collect(),
                    HitFamily::Diff => (-h..=h).collect(),
                };
                let mut var = 0.0;
                for (a, &i) in indices.iter().enumerate() {
                    var += exact_cov(i, i, family, &params).unwrap();
                    for &k in &indices[a + 1..] {
                        var += 2.0 * exact_cov(i, k, family, &params).unwrap();
                    }
                }
                let direct = match family {
                    HitFamily::Sum => law.var_s1,
                    HitFamily::Diff => law.var_s2,
                };
                max_err = max_err.max((var - direct).abs());
            }
        }
    }
    assert!(max_err <= 1e-9, "decomposition error {max_err:e}");
    let elapsed = assert_budget(start, Duration::from_secs(60), "criterion 02");
    println!(
        "PASS criterion 02: variance decomposes over hit indicators for n <= 10 \
         (max err {max_err:.2e}, {elapsed:.2?})"
    );
}

/// Enumerated covariances are non-negative and never exceed the closed-form
/// bound `P(hit i)(1 - P(hit k))`.
#[test]
fn criterion_03_covariance_markov_bound() {
    let start = Instant::now();
    let mut min_cov = f64::INFINITY;
    let mut max_slack = f64::NEG_INFINITY;
    for n in 1..=10usize {
        for &p in &P_GRID {
            let params = ModelParams::new(n, p).unwrap();
            let h = n as i64 - 1;
            for family in [HitFamily::Sum, HitFamily::Diff] {
                let indices: Vec<i64> = match family {
                    HitFamily::Sum => (0..=2 * h).collect(),
                    HitFamily::Diff => (-h..=h).collect(),
                };
                for (a, &i) in indices.iter().enumerate() {
                    for &k in &indices[a + 1..] {
                        let cov = exact_cov(i, k, family, &params).unwrap();
                        let bound = cov_bound_markov(i, k, family, &params).unwrap();
                        min_cov = min_cov.min(cov);
                        max_slack = max_slack.max(cov - bound);
                        assert!(
                            cov <= bound + 1e-12,
                            "cov({i},{k},{family:?}) = {cov} exceeds bound {bound} at n={n} p={p}"
                        );
                        assert!(
                            cov >= -1e-12,
                            "cov({i},{k},{family:?}) = {cov} negative at n={n} p={p}"
                        );
                    }
                }
            }
        }
    }
    let elapsed = assert_budget(start, Duration::from_secs(60), "criterion 03");
    println!(
        "PASS criterion 03: covariances within [0, markov bound] for n <= 10 \
         (min cov {min_cov:.2e}, max cov-bound {max_slack:.2e}, {elapsed:.2?})"
    );
}

/// At fixed p = 0.2 the gap between the exact expectations and their
/// closed-form approximations stays bounded as n doubles.
///
/// Pilot (frozen): the sum-side error climbs 38.3421 -> 38.9889 -> 39.0000
/// and then stays put; the diff side falls 24.3150 -> 24.0067 -> 24.0000.
/// Both saturate, so "non-growing" is checked structurally: every error sits
/// below a frozen cap and the step-to-step movement shrinks to nothing.
#[test]
fn criterion_04_asymptotic_error_stays_bounded() {
    const ERR_CAP_SUM: f64 = 39.5;
    const ERR_CAP_DIFF: f64 = 24.5;
    let start = Instant::now();
    let grid = [200usize, 400, 800, 1600, 3200];
    let mut err_sum = Vec::new();
    let mut err_diff = Vec::new();
    for &n in &grid {
        let summary = expectation_summary(&ModelParams::new(n, 0.2).unwrap());
        err_sum.push((summary.exact_sum - summary.asymptotic_sum).abs());
        err_diff.push((summary.exact_diff - summary.asymptotic_diff).abs());
    }
    for (errs, cap, label) in [
        (&err_sum, ERR_CAP_SUM, "E S1"),
        (&err_diff, ERR_CAP_DIFF, "E S2"),
    ] {
        for (&n, &e) in grid.iter().zip(errs.iter()) {
            assert!(e <= cap, "{label} error {e} at n={n} exceeds cap {cap}");
        }
        let steps: Vec<f64> = errs.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for w in steps.windows(2) {
            assert!(
                w[1] <= w[0] + 1e-9,
                "{label} error movement grew along the grid: {steps:?}"
            );
        }
        let last = *steps.last().unwrap();
        assert!(
            last <= 1e-5,
            "{label} error still moving at the end of the grid: {steps:?}"
        );
    }
    let elapsed = assert_budget(start, Duration::from_secs(10), "criterion 04");
    println!(
        "PASS criterion 04: |exact - asymptotic| bounded and settled at p = 0.2 \
         (E S1 errs {err_sum:.4?} <= {ERR_CAP_SUM}, E S2 errs {err_diff:.4?} <= {ERR_CAP_DIFF}, \
         {elapsed:.2?})"
    );
}

/// Along p = 2/sqrt(n) the expectation gap measured in units of p^-2 stays
/// above 0.5 (it approaches 2(1 - e^-2)^2 ~ 1.495 from below).
#[test]
fn criterion_05_scaled_gap_large() {
    let start = Instant::now();
    let mut gaps = Vec::new();
    for &n in &[1_000usize, 10_000, 100_000] {
        let p = 2.0 / (n as f64).sqrt();
        let gap = expectation_gap_scaled(&ModelParams::new(n, p).unwrap()).unwrap();
        assert!(gap >= 0.5, "scaled gap {gap} below 0.5 at n={n}");
        gaps.push(gap);
    }
    let elapsed = assert_budget(start, Duration::from_secs(60), "criterion 05");
    println!("PASS criterion 05: gap * p^2 >= 0.5 along p = 2/sqrt(n) (gaps {gaps:.4?}, {elapsed:.2?})");
}

/// In the sparse regime p = n^-0.6 at n = 10^4, at least 99% of seeded
/// trials come out difference-dominant.
#[test]
fn criterion_06_sparse_regime_difference_dominant() {
    let start = Instant::now();
    let n = 10_000usize;
    let p = DensitySchedule::new(1.0, 0.6).unwrap().p(n);
    let stats = mc::run_trials(&ModelParams::new(n, p).unwrap(), 2000, 6);
    let frac = stats.count_diff_dominant as f64 / stats.trials as f64;
    assert!(frac >= 0.99, "difference-dominant fraction {frac} below 0.99");
    let elapsed = assert_budget(start, Duration::from_secs(120), "criterion 06");
    println!(
        "PASS criterion 06: difference dominance at p = n^-0.6, n = 10^4 \
         ({}/{} trials, {elapsed:.2?})",
        stats.count_diff_dominant, stats.trials
    );
}

/// Sum-dominant sets at n = 30, p = 0.5 are rare but reliably findable: the
/// observed fraction over 10^6 trials clears 2e-7 and every retained witness
/// re-classifies as sum-dominant.
#[test]
fn criterion_07_sum_dominant_rarity_floor() {
    let start = Instant::now();
    let params = ModelParams::new(30, 0.5).unwrap();
    let hunt = sum_dominant_hunt(&params, 1_000_000, 7);
    assert!(
        hunt.fraction > 2e-7,
        "sum-dominant fraction {} not above 2e-7",
        hunt.fraction
    );
    assert!(hunt.hits >= 1 && !hunt.witnesses.is_empty(), "no witness found");
    for w in &hunt.witnesses {
        assert_eq!(w.classify(), Dominance::SumDominant, "witness {w} misclassified");
    }
    let elapsed = assert_budget(start, Duration::from_secs(120), "criterion 07");
    println!(
        "PASS criterion 07: sum-dominant fraction {:.2e} > 2e-7 at n = 30, p = 0.5 \
         ({} hits, {} witnesses kept, capped = {}, {elapsed:.2?})",
        hunt.fraction,
        hunt.hits,
        hunt.witnesses.len(),
        hunt.capped
    );
}

/// At p = n^-0.8, n = 10^5, at least 95% of sampled sets are Sidon, and
/// every Sidon sample with at least 3 elements is difference-dominant.
#[test]
fn criterion_08_sidon_regime() {
    let start = Instant::now();
    let n = 100_000usize;
    let p = (n as f64).powf(-0.8);
    let params = ModelParams::new(n, p).unwrap();
    let trials = 1000u64;
    let mut sidon = 0u64;
    for t in 0..trials {
        let mut rng = SplitMix64::for_trial(8, t);
        let a = mc::sample(&params, &mut rng);
        if a.is_sidon() {
            sidon += 1;
            if a.len() >= 3 {
                assert_eq!(
                    a.classify(),
                    Dominance::DifferenceDominant,
                    "sidon sample {a} with {} elements not difference-dominant",
                    a.len()
                );
            }
        }
    }
    let frac = sidon as f64 / trials as f64;
    assert!(frac >= 0.95, "sidon fraction {frac} below 0.95");
    let elapsed = assert_budget(start, Duration::from_secs(120), "criterion 08");
    println!(
        "PASS criterion 08: {sidon}/{trials} samples sidon at p = n^-0.8, n = 10^5, \
         all with >= 3 elements difference-dominant ({elapsed:.2?})"
    );
}

/// Along p = n^-0.4 the empirical variances of both pair-set sizes shrink
/// relative to p^-4, falling below frozen caps at n = 10^4.
///
/// Pilot (frozen, seed 9, 2000 trials): Var S1 * p^4 drops 0.3285 -> 0.2044
/// and Var S2 * p^4 drops 0.2400 -> 0.1083.
#[test]
fn criterion_09_scaled_variance_decay() {
    const SCALED_VAR_CAP_S1: f64 = 0.30;
    const SCALED_VAR_CAP_S2: f64 = 0.16;
    let start = Instant::now();
    let schedule = DensitySchedule::new(1.0, 0.4).unwrap();
    let rows = sweep(&schedule, &[1_000, 10_000], 2000, 9).unwrap();
    let scaled: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| {
            let p4 = r.params.p().powi(4);
            (r.var_s1 * p4, r.var_s2 * p4)
        })
        .collect();
    assert!(
        scaled[1].0 < scaled[0].0,
        "Var S1 * p^4 did not decrease: {scaled:?}"
    );
    assert!(
        scaled[1].1 < scaled[0].1,
        "Var S2 * p^4 did not decrease: {scaled:?}"
    );
    assert!(
        scaled[1].0 <= SCALED_VAR_CAP_S1,
        "Var S1 * p^4 = {} above cap {SCALED_VAR_CAP_S1} at n = 10^4",
        scaled[1].0
    );
    assert!(
        scaled[1].1 <= SCALED_VAR_CAP_S2,
        "Var S2 * p^4 = {} above cap {SCALED_VAR_CAP_S2} at n = 10^4",
        scaled[1].1
    );
    let elapsed = assert_budget(start, Duration::from_secs(120), "criterion 09");
    println!(
        "PASS criterion 09: scaled variances decay along p = n^-0.4 \
         (S1: {:.4} -> {:.4}, S2: {:.4} -> {:.4}, {elapsed:.2?})",
        scaled[0].0, scaled[1].0, scaled[0].1, scaled[1].1
    );
}

/// The mc subcommand emits byte-identical output for the same seed across
/// 1, 2, and 8 worker threads, on both the sparse and dense sampling paths.
#[test]
fn criterion_10_thread_count_determinism() {
    let start = Instant::now();
    let exe = env!("CARGO_BIN_EXE_sumdiff");
    let run = |n: &str, p: &str, trials: &str, threads: &str| -> Vec<u8> {
        let out = std::process::Command::new(exe)
            .args(["mc", "--n", n, "--p", p, "--trials", trials])
            .args(["--seed", "42", "--threads", threads])
            .env_remove("SUMDIFF_SEED")
            .output()
            .expect("spawn sumdiff");
        assert!(out.status.success(), "mc exited with {:?}", out.status);
        out.stdout
    };
    for (n, p, trials) in [("500", "0.07", "4000"), ("40", "0.5", "20000")] {
        let one = run(n, p, trials, "1");
        let two = run(n, p, trials, "2");
        let eight = run(n, p, trials, "8");
        assert!(one.starts_with(b"n,p,trials,"), "unexpected output shape");
        assert_eq!(one, two, "threads 1 vs 2 differ at n={n} p={p}");
        assert_eq!(two, eight, "threads 2 vs 8 differ at n={n} p={p}");
    }
    let elapsed = assert_budget(start, Duration::from_secs(120), "criterion 10");
    println!(
        "PASS criterion 10: mc output byte-identical across 1, 2, 8 threads \
         on sparse and dense paths ({elapsed:.2?})"
    );
}
