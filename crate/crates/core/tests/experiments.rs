//! Monte Carlo properties of sweeps across estimators and noise levels.

use planted_core::experiments::{run_sweep, summarize, DRule, Sigma2Rule, SweepConfig, ThresholdKind};
use planted_core::model::PlantedMode;

fn config(ns: Vec<usize>, sigma2: Sigma2Rule, trials: usize, estimators: &[&str], seed: u64) -> SweepConfig {
    SweepConfig {
        description: None,
        ns,
        d_rule: DRule::Constant { d: 2 },
        sigma2,
        trials,
        estimators: estimators.iter().map(|s| s.to_string()).collect(),
        seed,
        planted: PlantedMode::Identity,
        paired_sigma2: true,
    }
}

#[test]
fn errors_stay_bounded_at_the_perfect_threshold() {
    let cfg = config(
        vec![200, 400, 800],
        Sigma2Rule::ThresholdMultiples {
            threshold: ThresholdKind::Perfect,
            multipliers: vec![1.0],
        },
        30,
        &["mle"],
        21,
    );
    for s in summarize(&run_sweep(&cfg).unwrap()).unwrap() {
        let mean = s.error_count.unwrap().mean;
        assert!(mean <= 10.0, "n={} mean={mean}", s.n);
    }
}

#[test]
fn zero_error_fraction_falls_with_noise() {
    let cfg = config(
        vec![100, 300],
        Sigma2Rule::ThresholdMultiples {
            threshold: ThresholdKind::Perfect,
            multipliers: vec![0.1, 0.3, 1.0, 3.0, 10.0, 30.0],
        },
        40,
        &["mle"],
        22,
    );
    let recs = run_sweep(&cfg).unwrap();
    let summary = summarize(&recs).unwrap();
    let mut violations = 0;
    let mut pairs = 0;
    for w in summary.windows(2).filter(|w| w[0].n == w[1].n) {
        pairs += 1;
        if w[1].zero_error_fraction.unwrap() > w[0].zero_error_fraction.unwrap() + 1e-12 {
            violations += 1;
        }
    }
    // Paired trials make this nearly deterministic; allow noise on 5% of pairs.
    assert!(violations as f64 <= 0.05 * pairs as f64 + 1.0, "violations {violations}/{pairs}");
    let first = &summary[0];
    let last = summary.iter().rfind(|s| s.n == first.n).unwrap();
    assert!(first.zero_error_fraction.unwrap() > last.zero_error_fraction.unwrap());
}

#[test]
fn estimators_are_ordered_on_shared_trials() {
    let cfg = config(
        vec![150],
        Sigma2Rule::Values { values: vec![0.001, 0.01, 0.05] },
        15,
        &["mle", "greedy_inner", "greedy_distance", "aug_matching_lower_bound"],
        23,
    );
    let recs = run_sweep(&cfg).unwrap();
    assert!(recs.iter().all(|r| !r.is_error()));
    let find = |est: &str, s2: f64, t: usize| {
        recs.iter()
            .find(|r| r.estimator == est && r.sigma2 == s2 && r.trial == t)
            .unwrap()
            .error_count
            .unwrap()
    };
    for &s2 in &[0.001, 0.01, 0.05] {
        for t in 0..15 {
            let e = find("mle", s2, t);
            let m = find("aug_matching_lower_bound", s2, t);
            assert!(m <= e, "M={m} > |E|={e} at s2={s2} t={t}");
        }
    }
    for s in summarize(&recs).unwrap().iter().filter(|s| s.estimator == "greedy_inner") {
        let mle_mean = summarize(&recs)
            .unwrap()
            .into_iter()
            .find(|m| m.estimator == "mle" && m.sigma2 == s.sigma2)
            .unwrap()
            .error_count
            .unwrap()
            .mean;
        assert!(mle_mean <= s.error_count.unwrap().mean, "s2={}", s.sigma2);
    }
}

#[test]
fn sublinear_ratio_is_bounded_across_n() {
    let cfg = config(vec![200, 400, 800], Sigma2Rule::NExponent { xis: vec![3.0] }, 20, &["mle"], 24);
    let ratios: Vec<f64> = summarize(&run_sweep(&cfg).unwrap())
        .unwrap()
        .iter()
        .map(|s| s.error_count.unwrap().mean / (s.sigma2 * (s.n * s.n) as f64))
        .collect();
    for r in &ratios {
        assert!(*r > 0.02 && *r < 10.0, "ratios {ratios:?}");
    }
}
