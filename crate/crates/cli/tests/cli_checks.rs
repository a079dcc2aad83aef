use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tstable(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tstable")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = tstable(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn density_grid_has_unit_mass() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.csv");
    ok(&["density", "--family", "tss", "--params", "0.5,1,1", "--grid-out", p(&grid)]);
    let text = fs::read_to_string(&grid).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,f"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (x, f) = l.split_once(',').unwrap();
            (x.parse().unwrap(), f.parse().unwrap())
        })
        .collect();
    let dx = rows[1].0 - rows[0].0;
    let mass: f64 = rows.iter().map(|r| r.1).sum::<f64>() * dx;
    assert!((mass - 1.0).abs() < 1e-6, "mass {mass}");
}

#[test]
fn simulate_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let sample = dir.path().join("x.csv");
    let result = dir.path().join("fit.json");
    ok(&["simulate", "--family", "cts", "--params", "1.5,1,1,1,1,0", "--n", "1000", "--seed", "7", "--cutoff", "auto", "--out", p(&sample)]);
    assert_eq!(fs::read_to_string(&sample).unwrap().lines().count(), 1000);

    // same seed, same draws
    let again = ok(&["simulate", "--family", "cts", "--params", "1.5,1,1,1,1,0", "--n", "1000", "--seed", "7", "--cutoff", "auto"]);
    assert_eq!(again, fs::read_to_string(&sample).unwrap());

    ok(&["fit", "--family", "cts", "--method", "cgmm", "--gamma", "0.01", "--input", p(&sample), "--out", p(&result)]);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&result).unwrap()).unwrap();
    for key in ["method", "theta_hat", "objective", "converged", "iterations", "runtime_seconds", "boundary_hit"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["method"]["method"], "cgmm");

    let gmc = ok(&["fit", "--family", "cts", "--method", "gmc", "--p", "6", "--input", p(&sample)]);
    assert!(gmc.contains("\"gmc\""));
}

#[test]
fn bad_arguments_fail() {
    assert!(!tstable(&["simulate", "--family", "tss", "--params", "1.5,1,1", "--n", "10"]).status.success());
    assert!(!tstable(&["simulate", "--family", "tss", "--params", "0.5,1,1", "--n", "10", "--cutoff", "often"]).status.success());
    assert!(!tstable(&["fit", "--family", "tss", "--method", "gmc", "--input", "/nonexistent"]).status.success());
    assert!(!tstable(&["density", "--family", "xyz", "--params", "1"]).status.success());
}

#[test]
fn monte_carlo_table() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("mc.json");
    let table = dir.path().join("table.csv");
    let report = dir.path().join("report.json");
    fs::write(
        &config,
        r#"{"theta0": {"family": "tss", "values": [0.5, 1.0, 1.0]},
            "n_obs": 200, "replications": 4, "methods": [{"method": "cgmm"}, {"method": "gmc", "p": 3}], "seed": 3}"#,
    )
    .unwrap();
    ok(&["mc", "--config", p(&config), "--out", p(&table), "--json-out", p(&report)]);
    let text = fs::read_to_string(&table).unwrap();
    assert_eq!(text.lines().count(), 3, "{text}");
    assert!(text.lines().next().unwrap().starts_with("method,n,"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["replications"], 4);
}

#[test]
fn gof_on_synthetic_prices() {
    let dir = tempfile::tempdir().unwrap();
    let prices = dir.path().join("prices.csv");
    let report = dir.path().join("report.json");
    let qq = dir.path().join("qq.csv");
    ok(&["synth", "--world", "2", "--out", p(&prices)]);
    assert!(fs::read_to_string(&prices).unwrap().starts_with("date,price\n"));
    ok(&["gof", "--input", p(&prices), "--models", "stable,cts", "--out", p(&report), "--qq-out", p(&qq)]);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let models = json["models"].as_array().unwrap();
    assert_eq!(models.len(), 2);
    assert_eq!(models[0]["model"], "stable");
    assert!(models[1]["gof"]["ks"].as_f64().unwrap() < 0.05);
    assert_eq!(fs::read_to_string(&qq).unwrap().lines().count(), 1 + 2 * 2499);

    ok(&["gof", "--input", p(&prices), "--deseasonalize", "weekly", "--models", "nts"]);
}
