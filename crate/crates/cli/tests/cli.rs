use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn qchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qchar")).args(args).output().expect("binary runs")
}

fn write_scenario(dir: &Path, name: &str, doc: &Value) -> String {
    let path = dir.join(name);
    fs::write(&path, doc.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn diagnostic(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.lines().last().expect("diagnostic line")).expect("diagnostic is JSON")
}

fn quartic() -> Value {
    json!({
        "dimension": 1,
        "hbar": 0.1,
        "hamiltonian": "quartic_1d",
        "initial_points": [[1.0, 0.3], [-0.5, 0.0]],
        "time": {"t_end": 0.5, "dt": 1e-3},
        "observables": ["q^2", "p"],
        "wigner_state": {"mean": [0.5, 0.0], "covariance": [[0.2, 0.0], [0.0, 0.2]], "quadrature_degree": 10},
        "verify": ["composition-law"],
        "seed": 7
    })
}

#[test]
fn harmonic_moyal_invariance_passes() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json!({"dimension": 1, "hbar": 0.2, "hamiltonian": "harmonic", "verify": ["moyal-invariance"]});
    let file = write_scenario(dir.path(), "h.json", &doc);
    let out_dir = dir.path().join("out");
    let out = qchar(&["run", &file, "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(out_dir.join("verification.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("identity,order,residual_zero,checked,nonzero,first_nonzero"));
    assert!(lines.next().unwrap().starts_with("moyal-invariance,6,true,"));
}

#[test]
fn run_outputs_are_deterministic_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_scenario(dir.path(), "q.json", &quartic());
    let mut texts = Vec::new();
    for (k, threads) in ["1", "4"].iter().enumerate() {
        let od = dir.path().join(format!("out{k}"));
        let out = qchar(&["run", &file, "--out", od.to_str().unwrap(), "--threads", threads]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let names = ["trajectories.csv", "observables.csv", "expectations.csv", "verification.csv", "run_meta.json"];
        texts.push(names.map(|n| fs::read(od.join(n)).unwrap()));
    }
    assert_eq!(texts[0], texts[1]);

    let traj = String::from_utf8(texts[0][0].clone()).unwrap();
    let header = traj.lines().next().unwrap();
    assert_eq!(header, "t,point_id,u0_1,u0_2,u1_1,u1_2,detJ,energy_residual");
    assert_eq!(traj.lines().count(), 1 + 2 * 11);
    assert!(!traj.contains('\r'));
    let row: Vec<&str> = traj.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "0.0000000000000000e0");
    assert_eq!(row[2], "1.0000000000000000e0");
    for line in traj.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((cols[6] - 1.0).abs() < 1e-10, "det J drifted: {line}");
        assert!(cols[7].abs() < 1e-6, "energy residual: {line}");
    }
    let exp = String::from_utf8(texts[0][2].clone()).unwrap();
    let first: Vec<&str> = exp.lines().nth(1).unwrap().split(',').collect();
    // ⟨q²⟩ at t = 0 is mean² + variance
    assert_eq!(first[2], "quadrature");
    assert!((first[3].parse::<f64>().unwrap() - 0.45).abs() < 1e-12);
}

#[test]
fn json_format_has_sorted_keys() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_scenario(dir.path(), "q.json", &quartic());
    let od = dir.path().join("out");
    let out = qchar(&["--format", "json", "run", &file, "--out", od.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(od.join("run.json")).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&String> = doc.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(doc["trajectories"].as_array().unwrap().len(), 22);
    assert_eq!(doc["verification"][0]["residual_zero"], true);
    assert_eq!(doc["meta"]["seed"], 7);
}

#[test]
fn monte_carlo_expectations_follow_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = quartic();
    doc["wigner_state"] = json!({"mean": [0.5, 0.0], "covariance": [[0.2, 0.0], [0.0, 0.2]], "samples": 200});
    doc["time"]["sample_times"] = json!([0.0, 0.5]);
    let read = |doc: &Value, tag: &str| {
        let file = write_scenario(dir.path(), &format!("{tag}.json"), doc);
        let od = dir.path().join(tag);
        assert!(qchar(&["run", &file, "--out", od.to_str().unwrap()]).status.success());
        fs::read_to_string(od.join("expectations.csv")).unwrap()
    };
    let a = read(&doc, "a");
    assert_eq!(a, read(&doc, "b"));
    doc["seed"] = json!(8);
    assert_ne!(a, read(&doc, "c"));
    assert!(a.lines().nth(1).unwrap().contains("montecarlo"));
}

#[test]
fn validation_failures_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = quartic();
    doc["wigner_state"]["covariance"] = json!([[1.0, 2.0], [2.0, 1.0]]);
    let file = write_scenario(dir.path(), "bad.json", &doc);
    let out = qchar(&["run", &file, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostic(&out)["error"], "validation");

    fs::write(dir.path().join("broken.json"), "{\"dimension\": ").unwrap();
    let out = qchar(&["run", dir.path().join("broken.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostic(&out)["error"], "parse");

    let out = qchar(&["run", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(qchar(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json!({
        "dimension": 1,
        "hbar": 0.1,
        "hamiltonian": "p^2/2 - q^6",
        "initial_points": [[2.0, 0.0]],
        "time": {"t_end": 5.0, "abs_tol": 1e-9, "rel_tol": 1e-9},
    });
    let file = write_scenario(dir.path(), "blowup.json", &doc);
    let out = qchar(&["run", &file, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(diagnostic(&out)["error"], "numerical");
}

#[test]
fn verification_failures_exit_1() {
    let err = qchar::run::Outcome {
        files: vec![],
        failures: vec!["moyal-invariance residual nonzero".into()],
    }
    .into_result()
    .unwrap_err();
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn project_reports_linear_constraint_family() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json!({
        "dimension": 2,
        "hbar": 0.1,
        "hamiltonian": "(x1^2 + y1^2)/2 + (x2^2 + y2^2)/2",
        "observables": ["x1*y1 + x2*y2"],
        "constraints": ["x2", "y2"],
        "orders": {"tau_series": 4},
    });
    let file = write_scenario(dir.path(), "c.json", &doc);
    let od = dir.path().join("out");
    let out = qchar(&["project", &file, "--out", od.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(od.join("projection.csv")).unwrap();
    for mode in ["classical", "quantum"] {
        let h_row = csv.lines().find(|l| l.starts_with(&format!("{mode},H,"))).unwrap();
        let cols: Vec<&str> = h_row.split(',').collect();
        assert_eq!(
            qchar::literal::parse_polynomial(cols[2], 2).unwrap(),
            qchar::literal::parse_polynomial("(q1^2 + p1^2)/2", 2).unwrap()
        );
        assert_eq!(&cols[3..], ["true", "true"]);
    }
    assert!(csv.lines().any(|l| l.starts_with("classical,xi2,0,")));
    let checks = fs::read_to_string(od.join("projection_checks.csv")).unwrap();
    assert_eq!(checks.lines().count(), 5);
    assert!(checks.lines().skip(1).all(|l| l.contains(",true,")));

    let doc = json!({"dimension": 2, "hbar": 0.1, "hamiltonian": "harmonic"});
    let file = write_scenario(dir.path(), "nc.json", &doc);
    assert_eq!(qchar(&["project", &file]).status.code(), Some(2));
}

#[test]
fn example_s2_reports_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    let out = qchar(&["example-s2", "--Q", "1", "--P", "0", "--hbar", "0.1", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((doc["computed_circ_h2"].as_f64().unwrap() - 6.0).abs() < 1e-9);
    assert!((doc["computed_wedge_h2"].as_f64().unwrap() - 24.0).abs() < 1e-9);
    assert_eq!(doc["expected_wedge_h2"], 24.0);
    assert!(dir.path().join("example_s2.json").exists());

    let out = qchar(&["example-s2", "--Q", "1", "--P", "-0.5", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
