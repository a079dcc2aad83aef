use proptest::prelude::*;
use tempered_core::ParamVector;
use tempered_estimate::{ConfidenceInterval, Method};
use tempered_experiments::*;

fn small_config() -> MCConfig {
    let mut cfg = MCConfig::new(
        ParamVector::tss(0.5, 1.0, 1.0).unwrap(),
        200,
        6,
        vec![Method::Mle, Method::Gmm { r: None }, Method::Gmc { p: 4, gamma: None }],
    );
    cfg.seed = 42;
    cfg
}

#[test]
fn single_replication_bias_is_the_error() {
    let mut cfg = small_config();
    cfg.replications = 1;
    let reps = run_replications(&cfg).unwrap();
    let report = aggregate(&cfg, &reps);
    let truth = cfg.theta0.values();
    for (m, s) in report.methods.iter().enumerate() {
        let fitted = reps[0].fits[m].as_ref().unwrap();
        for k in 0..truth.len() {
            assert_eq!(s.bias[k], fitted.theta_hat[k] - truth[k]);
            assert_eq!(s.rmse[k], s.bias[k].abs());
        }
    }
}

#[test]
fn reports_are_deterministic_under_parallelism() {
    let mut cfg = small_config();
    cfg.parallelism = Some(1);
    let a = run_mc(&cfg).unwrap();
    let b = run_mc(&cfg).unwrap();
    cfg.parallelism = Some(4);
    let c = run_mc(&cfg).unwrap();
    assert_eq!(a.without_timing(), b.without_timing());
    assert_eq!(a.without_timing(), c.without_timing());
    let mle = a.summary(&Method::Mle).unwrap();
    assert!(mle.coverage.is_some());
    assert_eq!(mle.intervals, mle.successes);
}

#[test]
fn failing_fits_are_counted_not_fatal() {
    let mut cfg = MCConfig::new(ParamVector::nts(0.5, 0.0, 1.0, 1.0, 0.0).unwrap(), 100, 3, vec![Method::Gmc { p: 5, gamma: None }, Method::Gmm { r: None }]);
    cfg.seed = 1;
    let report = run_mc(&cfg).unwrap();
    assert_eq!(report.methods[0].failures, 3);
    assert_eq!(report.methods[0].successes, 0);
    assert_eq!(report.methods[1].failures, 0);
}

#[test]
fn config_json() {
    let cfg = MCConfig::from_json(
        r#"{"theta0": {"family": "cts", "values": [1.5, 1, 1, 1, 1, 0]}, "n_obs": 1000, "replications": 200,
            "methods": [{"method": "cgmm"}, {"method": "gmm", "r": 20}, {"method": "gmc", "p": 6}], "seed": 7}"#,
    )
    .unwrap();
    assert_eq!(cfg.methods[1], Method::Gmm { r: Some(20) });
    assert_eq!(cfg.cutoff, tempered_sim::Cutoff::Auto);
    assert_eq!(cfg.ci_level, 0.95);
    assert_eq!(cfg.info_at, InfoAt::Estimate);
    let bad = r#"{"theta0": {"family": "tss", "values": [0.5, 1, 1]}, "n_obs": 2, "replications": 1, "methods": [{"method": "mle"}]}"#;
    assert!(MCConfig::from_json(bad).is_err());
    let zero = r#"{"theta0": {"family": "tss", "values": [0.5, 1, 1]}, "n_obs": 20, "replications": 0, "methods": [{"method": "mle"}]}"#;
    assert!(MCConfig::from_json(zero).is_err());
}

#[test]
fn tables() {
    let cfg = small_config();
    let mut report = run_mc(&MCConfig { replications: 2, ..cfg }).unwrap();
    let text = report_to_table(&report, TableFormat::Text);
    let header: Vec<&str> = text.lines().next().unwrap().split_whitespace().collect();
    assert_eq!(&header[..6], &["method", "n", "α", "δ", "λ", "time"]);

    let csv_text = report_to_table(&report, TableFormat::Csv);
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(csv_text.as_bytes());
    let first = rdr.records().next().unwrap().unwrap();
    let (bias, rmse, mad) = parse_cell(&first[2]).unwrap();
    let s = &report.methods[0];
    assert!((bias - s.bias[0]).abs() <= 5e-4 * s.bias[0].abs().max(1.0));
    assert!((rmse - s.rmse[0]).abs() <= 5e-4 * s.rmse[0].max(1.0));
    assert!((mad - s.mad[0]).abs() <= 5e-4 * s.mad[0].max(1.0));
    assert_eq!(parse_cell(&format_cell(-1.25e5, 3.0, 0.0004)), Some((-1.25e5, 3.0, 0.0004)));

    report.methods.clear();
    let empty = report_to_table(&report, TableFormat::Csv);
    assert_eq!(empty.lines().count(), 1);
    assert!(empty.starts_with("method,n,α,δ,λ,time"));
}

fn fitted(theta: Vec<f64>, boundary: bool, ci: Option<(f64, f64)>) -> Result<Fitted, String> {
    Ok(Fitted {
        ci: ci.map(|(lo, hi)| ConfidenceInterval { lower: vec![lo; theta.len()], upper: vec![hi; theta.len()], level: 0.95 }),
        theta_hat: theta,
        converged: true,
        boundary_hit: boundary,
        runtime_seconds: 0.0,
    })
}

fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn summaries_are_order_free_and_consistent(
        draws in proptest::collection::vec((proptest::collection::vec(-5.0f64..5.0, 3), any::<bool>(), any::<bool>()), 1..30),
        seed in any::<u64>(),
    ) {
        let truth = [0.5, 1.0, 1.0];
        let fits: Vec<Result<Fitted, String>> = draws
            .iter()
            .map(|(v, b, fail)| if *fail { Err("failed".into()) } else { fitted(v.clone(), *b, Some((-1.0, 1.5))) })
            .collect();
        let mut order: Vec<usize> = (0..fits.len()).collect();
        // deterministic shuffle from the seed
        let mut s = seed;
        for i in (1..order.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = summarize(Method::Mle, &truth, &fits.iter().collect::<Vec<_>>());
        let b = summarize(Method::Mle, &truth, &order.iter().map(|&i| &fits[i]).collect::<Vec<_>>());
        prop_assert_eq!(bits(&a.bias), bits(&b.bias));
        prop_assert_eq!(bits(&a.rmse), bits(&b.rmse));
        prop_assert_eq!(bits(&a.mad), bits(&b.mad));
        prop_assert_eq!(&a.coverage, &b.coverage);
        prop_assert_eq!(a.boundary_rate.to_bits(), b.boundary_rate.to_bits());
        if a.successes > 0 {
            for k in 0..3 {
                prop_assert!(a.rmse[k] >= a.bias[k].abs() * (1.0 - 1e-12));
                prop_assert!(a.mad[k] >= 0.0);
            }
            prop_assert!((0.0..=1.0).contains(&a.boundary_rate));
        }
        prop_assert_eq!(a.successes + a.failures, fits.len());
    }
}
