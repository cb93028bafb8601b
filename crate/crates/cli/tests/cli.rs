use std::path::Path;
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayreg::distribution::RayleighMean;
use serde_json::Value;

fn rayreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rayreg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn fit_intercept_only_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("d.csv");
    std::fs::write(&csv, "y\n0.5\n1.2\n0.8\n").unwrap();
    let resid = dir.path().join("r.csv");
    let out = rayreg(&["fit", p(&csv), "--residuals", p(&resid)]);
    let v = json_of(&out);
    let ss: f64 = 0.25 + 1.44 + 0.64;
    let expected = (std::f64::consts::PI * ss / 12.0).sqrt().ln();
    let beta = floats(&v["coefficients"]);
    assert!((beta[0] - expected).abs() < 1e-8, "{} vs {expected}", beta[0]);
    assert_eq!(v["converged"], Value::Bool(true));
    assert!((floats(&v["standard_errors"])[0] - 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-8);

    let text = std::fs::read_to_string(&resid).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,residual");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1,"));
}

#[test]
fn fit_with_covariates_and_csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("d.csv");
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut text = String::from("x2,y\n");
    for i in 0..400 {
        let x = i as f64 / 400.0;
        let y = RayleighMean::new((0.5 + 0.8 * x).exp()).unwrap().sample(&mut rng);
        text.push_str(&format!("{x},{y}\n"));
    }
    std::fs::write(&csv, text).unwrap();
    let v = json_of(&rayreg(&["fit", p(&csv)]));
    assert_eq!(v["names"], serde_json::json!(["intercept", "x2"]));
    let beta = floats(&v["coefficients"]);
    assert!((beta[0] - 0.5).abs() < 0.15 && (beta[1] - 0.8).abs() < 0.25, "{beta:?}");
    assert!(v["r_squared"].as_f64().unwrap() > 0.0);

    let out = rayreg(&["--output", "csv", "fit", p(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.starts_with("name,estimate,std_error\nintercept,"));
    assert_eq!(table.lines().count(), 3);
}

#[test]
fn fit_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.csv");
    std::fs::write(&zero, "y,x\n1.0,0.1\n0,0.2\n2.0,0.3\n").unwrap();
    let out = rayreg(&["fit", p(&zero)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("row 2"), "{}", stderr(&out));

    let no_y = dir.path().join("noy.csv");
    std::fs::write(&no_y, "a,b\n1,2\n3,4\n").unwrap();
    assert_eq!(rayreg(&["fit", p(&no_y)]).status.code(), Some(1));

    let junk = dir.path().join("junk.csv");
    std::fs::write(&junk, "y\n1.0\nfoo\n").unwrap();
    assert_eq!(rayreg(&["fit", p(&junk)]).status.code(), Some(2));

    assert_eq!(rayreg(&["fit", p(&zero), "--link", "probit"]).status.code(), Some(1));
    assert_eq!(rayreg(&["fit", p(&dir.path().join("missing.csv"))]).status.code(), Some(2));
    assert_eq!(rayreg(&["frobnicate"]).status.code(), Some(1));
}

fn write_image(dir: &Path, amps: &[f64], labels: &[u32], width: usize) -> (std::path::PathBuf, std::path::PathBuf) {
    let grid = |cells: Vec<String>| {
        cells
            .chunks(width)
            .map(|row| row.join(","))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = dir.join("amp.csv");
    let m = dir.join("mask.csv");
    std::fs::write(&a, grid(amps.iter().map(|v| v.to_string()).collect())).unwrap();
    std::fs::write(&m, grid(labels.iter().map(|v| v.to_string()).collect())).unwrap();
    (a, m)
}

#[test]
fn detect_separated_regions() {
    let dir = tempfile::tempdir().unwrap();
    let means = [0.127, 0.112, 0.374];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let labels: Vec<u32> = (0..3000).map(|i| (i / 1000) as u32 + 1).collect();
    let amps: Vec<f64> = labels
        .iter()
        .map(|&l| RayleighMean::new(means[l as usize - 1]).unwrap().sample(&mut rng))
        .collect();
    let (a, m) = write_image(dir.path(), &amps, &labels, 50);
    let resid = dir.path().join("res.csv");
    let v = json_of(&rayreg(&[
        "detect", "--amplitude", p(&a), "--mask", p(&m), "--pfa", "0.05", "--residuals", p(&resid),
    ]));
    for key in ["coefficients", "standard_errors", "p_values", "thresholds", "r_squared", "region_effects", "converged"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["converged"], Value::Bool(true));
    let effects = v["region_effects"].as_array().unwrap();
    assert_eq!(effects.len(), 2);
    for e in effects {
        assert_eq!(e["wald"]["reject"], Value::Bool(true));
    }
    assert!((floats(&v["thresholds"])[1] - 3.841459).abs() < 1e-5);
    assert_eq!(std::fs::read_to_string(&resid).unwrap().lines().count(), 3001);
}

#[test]
fn detect_identical_regions_is_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let half: Vec<f64> = (0..200).map(|_| RayleighMean::new(0.3).unwrap().sample(&mut rng)).collect();
    let amps: Vec<f64> = half.iter().chain(&half).copied().collect();
    let labels: Vec<u32> = (0..400).map(|i| if i < 200 { 1 } else { 2 }).collect();
    let (a, m) = write_image(dir.path(), &amps, &labels, 20);
    let v = json_of(&rayreg(&["detect", "--amplitude", p(&a), "--mask", p(&m)]));
    assert_eq!(v["region_effects"][0]["wald"]["reject"], Value::Bool(false));
    assert!(floats(&v["coefficients"])[1].abs() < 1e-6);

    let bad_pfa = rayreg(&["detect", "--amplitude", p(&a), "--mask", p(&m), "--pfa", "1.5"]);
    assert_eq!(bad_pfa.status.code(), Some(1));
    let bad_base = rayreg(&["detect", "--amplitude", p(&a), "--mask", p(&m), "--baseline", "9"]);
    assert_eq!(bad_base.status.code(), Some(1));

    let short = dir.path().join("short.csv");
    std::fs::write(&short, "1,2\n").unwrap();
    let out = rayreg(&["detect", "--amplitude", p(&a), "--mask", p(&short)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("20x20") && stderr(&out).contains("1x2"), "{}", stderr(&out));
}

#[test]
fn simulate_bundled_scenario_one() {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/scenario1.cfg");
    let out = rayreg(&["--output", "csv", "simulate", "--config", p(&config)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let table = String::from_utf8(out.stdout).unwrap();
    let row = |name: &str| -> Vec<f64> {
        let line = table.lines().find(|l| l.starts_with(name)).unwrap();
        line.split(',').skip(1).map(|v| v.parse().unwrap()).collect()
    };
    assert!((row("MSE,")[0] - 0.0017).abs() < 0.0003, "{table}");
    for (m, paper) in row("Mean,").iter().zip([1.9993, -1.0001, 1.0002]) {
        assert!((m - paper).abs() < 0.003, "{table}");
    }
}

#[test]
fn simulate_is_deterministic_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    std::fs::write(&cfg, "beta = 0.5, 0.15\nN = 50\nreplications = 200\nseed = 7\n").unwrap();
    let first = rayreg(&["--output", "csv", "simulate", "--config", p(&cfg)]);
    let second = rayreg(&["--output", "csv", "simulate", "--config", p(&cfg)]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let reseeded = rayreg(&["--seed", "8", "--output", "csv", "simulate", "--config", p(&cfg)]);
    assert_ne!(first.stdout, reseeded.stdout);

    let v = json_of(&rayreg(&["simulate", "--config", p(&cfg)]));
    assert_eq!(v["summary"]["replications_used"].as_u64().unwrap() + v["summary"]["failures"].as_u64().unwrap(), 200);
    assert_eq!(floats(&v["summary"]["mean"]).len(), 2);

    std::fs::write(&cfg, "beta = 0.5, 0.15\nN = 50\nreplications = 0\n").unwrap();
    assert_eq!(rayreg(&["simulate", "--config", p(&cfg)]).status.code(), Some(1));
    std::fs::write(&cfg, "beta = 0.5\nN = 50\nreplications = 10\ncolour = red\n").unwrap();
    assert_eq!(rayreg(&["simulate", "--config", p(&cfg)]).status.code(), Some(1));
}

#[test]
fn sample_is_reproducible() {
    let a = rayreg(&["--seed", "11", "sample", "--mu", "2", "--count", "5"]);
    let b = rayreg(&["sample", "--mu", "2", "--count", "5", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let values: Vec<f64> = String::from_utf8(a.stdout)
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(values.len(), 5);
    assert!(values.iter().all(|&v| v > 0.0));
    let c = rayreg(&["--seed", "12", "sample", "--mu", "2", "--count", "5"]);
    assert_ne!(c.stdout, b.stdout);

    let v = json_of(&rayreg(&["--output", "json", "sample", "--mu", "2", "--count", "5", "--seed", "11"]));
    assert_eq!(floats(&v["samples"]), values);
}

#[test]
fn sample_validation() {
    assert_eq!(rayreg(&["sample", "--mu", "-1"]).status.code(), Some(1));
    assert_eq!(rayreg(&["sample", "--mu", "1", "--count", "0"]).status.code(), Some(1));
}

#[test]
fn sample_mean_at_one_million() {
    let out = rayreg(&["sample", "--mu", "1", "--count", "1000000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let (sum, count) = text
        .lines()
        .fold((0.0, 0usize), |(s, c), l| (s + l.parse::<f64>().unwrap(), c + 1));
    assert_eq!(count, 1_000_000);
    assert!((sum / count as f64 - 1.0).abs() < 0.003);
}

#[test]
fn json_numbers_round_trip_at_fifteen_digits() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("d.csv");
    std::fs::write(&csv, "y,x\n0.31,0.1\n1.7,0.9\n0.8,0.4\n2.2,0.7\n0.4,0.2\n").unwrap();
    let out = rayreg(&["fit", p(&csv)]);
    let v = json_of(&out);
    let again = serde_json::to_string_pretty(&v).unwrap();
    let reparsed: Value = serde_json::from_str(&again).unwrap();
    assert_eq!(v, reparsed);
    for x in floats(&v["coefficients"]).into_iter().chain(floats(&v["standard_errors"])) {
        assert_eq!(rayreg::numfmt::round_significant(x), x);
    }
}
