use std::collections::BTreeMap;

use ruqlp::bench::{
    compute_speedups, mean, median, run_benchmark, write_aggregate_csv, write_trials_csv, BenchConfig, BenchFamily,
    BenchRecord, AGGREGATE_HEADER, TRIALS_HEADER,
};
use ruqlp::randfact::Method;

fn config(methods: Vec<Method>) -> BenchConfig {
    BenchConfig {
        families: vec![BenchFamily::Dense, BenchFamily::Sparse { density: 0.1 }],
        sizes: vec![60],
        d_ratio: 0.2,
        q_values: vec![0, 1],
        methods,
        trials: 3,
        seed: 7,
    }
}

fn record(method: Method, median_s: f64) -> BenchRecord {
    BenchRecord {
        method,
        family: "gaussian_dense".into(),
        n: 100,
        d: 20,
        q: 0,
        seconds: vec![median_s],
        median_s,
        mean_s: median_s,
        speedup_vs: BTreeMap::new(),
        rel_errors: vec![0.5],
        accuracy_parity: true,
        threads: 1,
        failure: None,
    }
}

#[test]
fn no_methods_no_records() {
    assert!(run_benchmark(&config(vec![])).unwrap().is_empty());
}

#[test]
fn speedup_is_ratio_of_medians() {
    let mut recs = vec![record(Method::Rsvd, 10.0), record(Method::RuQlp, 5.0)];
    compute_speedups(&mut recs);
    assert_eq!(recs[1].speedup_vs[&Method::Rsvd], 2.0);
    assert_eq!(recs[0].speedup_vs[&Method::RuQlp], 0.5);
    assert!(!recs[0].speedup_vs.contains_key(&Method::Rsvd));
}

#[test]
fn failed_records_are_left_out_of_ratios() {
    let mut bad = record(Method::CorUtv, f64::NAN);
    bad.failure = Some("boom".into());
    let mut recs = vec![record(Method::Rsvd, 4.0), bad];
    compute_speedups(&mut recs);
    assert!(recs[0].speedup_vs.is_empty());
    assert!(recs[1].speedup_vs.is_empty());
}

#[test]
fn median_and_mean() {
    assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
    assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    assert_eq!(mean(&[1.0, 2.0, 6.0]), 3.0);
}

#[test]
fn preconditions_are_checked() {
    let mut c = config(Method::ALL.to_vec());
    c.trials = 0;
    assert!(run_benchmark(&c).is_err());
    let mut c = config(Method::ALL.to_vec());
    c.d_ratio = 0.01;
    assert!(run_benchmark(&c).is_err());
}

#[test]
fn small_run_fills_every_cell() {
    let recs = run_benchmark(&config(Method::ALL.to_vec())).unwrap();
    assert_eq!(recs.len(), 2 * 2 * 4);
    for r in &recs {
        assert!(!r.failed(), "{:?}", r.failure);
        assert_eq!((r.n, r.d, r.threads), (60, 12, 1));
        assert_eq!(r.seconds.len(), 3);
        assert!(r.median_s > 0.0 && r.mean_s > 0.0);
        assert!(r.accuracy_parity, "{} lost parity: {:?}", r.method, r.rel_errors);
        assert_eq!(r.speedup_vs.len(), 3);
        assert!(r.speedup_vs.values().all(|x| x.is_finite() && *x > 0.0));
    }

    let mut trials = Vec::new();
    write_trials_csv(&mut trials, &recs).unwrap();
    let trials = String::from_utf8(trials).unwrap();
    assert_eq!(trials.lines().next(), Some(TRIALS_HEADER));
    assert_eq!(trials.lines().count(), 1 + recs.len() * 3);

    let mut agg = Vec::new();
    write_aggregate_csv(&mut agg, &recs).unwrap();
    let agg = String::from_utf8(agg).unwrap();
    assert_eq!(agg.lines().next(), Some(AGGREGATE_HEADER));
    assert_eq!(agg.lines().count(), 1 + recs.len());
    for line in agg.lines().skip(1) {
        assert_eq!(line.split(',').count(), 10);
    }
}

#[test]
fn workload_is_shared_across_methods() {
    // Same matrix and sketch seed per trial: R-SVD and RU-QLP share Q's range,
    // so their best rank-d errors coincide.
    let c = BenchConfig {
        families: vec![BenchFamily::PolyDecay { k: 5, z: 1.0 }],
        sizes: vec![50],
        d_ratio: 0.2,
        q_values: vec![1],
        methods: vec![Method::RuQlp, Method::Rsvd],
        trials: 2,
        seed: 3,
    };
    let recs = run_benchmark(&c).unwrap();
    for t in 0..2 {
        let (a, b) = (recs[0].rel_errors[t], recs[1].rel_errors[t]);
        assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }
}

#[test]
fn cost_grows_with_power_steps() {
    let c = BenchConfig {
        families: vec![BenchFamily::Dense],
        sizes: vec![300],
        d_ratio: 0.2,
        q_values: vec![0, 1, 2],
        methods: Method::ALL.to_vec(),
        trials: 5,
        seed: 0,
    };
    let recs = run_benchmark(&c).unwrap();
    for m in Method::ALL {
        let med: Vec<f64> = recs.iter().filter(|r| r.method == m).map(|r| r.median_s).collect();
        assert_eq!(med.len(), 3);
        for w in med.windows(2) {
            assert!(w[1] >= 0.8 * w[0], "{m}: {med:?}");
        }
    }
}
