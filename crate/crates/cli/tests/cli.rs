use std::process::{Command, Output};

use pha_core::io::{ChainDocument, OrbitRecord};
use pha_core::weyl::orbit_from_seed;
use pha_core::{parse_rational, BigRat};
use serde_json::Value;

fn pha(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pha"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn q(n: i64, d: i64) -> BigRat {
    BigRat::new(n.into(), d.into())
}

#[test]
fn orbit_json_has_seed_and_three_images() {
    let out = pha(&[
        "orbit", "--m", "2", "--lambda", "1", "--depth", "1", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let records: Vec<OrbitRecord> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 4);
    let orbit = orbit_from_seed(3, q(1, 1), q(0, 1), 1).unwrap();
    for (rec, member) in records.iter().zip(&orbit.members) {
        assert_eq!(rec.to_solution().unwrap(), member.solution);
        assert_eq!(rec.word().unwrap(), member.word);
        assert!(rec.to_solution().unwrap().is_solution());
        // bit-exact round trip
        assert_eq!(
            serde_json::to_string(rec).unwrap(),
            text.lines().nth(rec.index).unwrap()
        );
    }
}

#[test]
fn orbit_csv_matches_json() {
    let args = [
        "orbit", "--m", "3", "--lambda", "2", "--c0", "1/2", "--depth", "2",
    ];
    let json_out = stdout(&pha(&[&args[..], &["--format", "json"]].concat()));
    let csv_out = stdout(&pha(&[&args[..], &["--format", "csv"]].concat()));
    let records: Vec<OrbitRecord> = json_out
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let rows: Vec<&str> = csv_out.lines().skip(1).collect();
    assert_eq!(records.len(), rows.len());
    for (rec, row) in records.iter().zip(rows) {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], rec.index.to_string());
        assert_eq!(&fields[2..6], rec.alpha.as_slice());
    }
    assert!(csv_out.starts_with("index,word,alpha_1,alpha_2,alpha_3,alpha_4,f_1"));
}

#[test]
fn orbit_edges_and_adjacency() {
    let edges = stdout(&pha(&[
        "orbit", "--m", "2", "--lambda", "1", "--depth", "1", "--format", "edges",
    ]));
    assert_eq!(edges.lines().next(), Some("from,generator,to"));
    assert!(edges.lines().any(|l| l == "0,pi,0"));
    let adj = stdout(&pha(&[
        "orbit",
        "--m",
        "2",
        "--lambda",
        "1",
        "--depth",
        "1",
        "--format",
        "adjacency",
    ]));
    assert_eq!(adj.lines().nth(1), Some("0,1,2,3,0"));
}

#[test]
fn relations_m3_no_violations() {
    let out = pha(&["relations", "--m", "3", "--trials", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["status"] == "held"));
}

#[test]
fn painleve_four_exact_solution() {
    let out = pha(&[
        "painleve", "--four", "--b0", "0", "--b1", "-2", "--g", "-2x",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["max_residual"].as_f64(), Some(0.0));
    assert_eq!(v["exact_zero"], true);
}

#[test]
fn painleve_four_csv() {
    let out = pha(&[
        "painleve", "--four", "--b1", "-2/9", "--g", "-2x/3", "--steps", "4", "--format", "csv",
    ]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("x,residual"));
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",0.0")));
}

#[test]
fn painleve_fit_reports_consistency() {
    let out = pha(&[
        "painleve", "--four", "--fit", "--lambda", "1", "--eps", "0,0,0", "--f", "-3x", "--f", "x",
        "--f", "3x",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["fit"]["consistent"], true);
    assert_eq!(v["fit"]["b1"], "-2");
}

#[test]
fn painleve_five_in_z() {
    let out = pha(&[
        "painleve", "--five", "--w", "z", "--x0", "2", "--x1", "4", "--steps", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["residual"][0].as_f64().unwrap() + 0.75).abs() < 1e-15);
}

#[test]
fn seed_round_trip() {
    let out = pha(&["seed", "--n", "4", "--lambda", "3/2", "--c0", "-1"]);
    let doc: ChainDocument = serde_json::from_str(&stdout(&out)).unwrap();
    let sol = doc.to_solution().unwrap();
    assert!(sol.is_solution());
    assert_eq!(sol.params().lambda(), &q(3, 2));
}

#[test]
fn residual_of_candidate() {
    let ok = pha(&[
        "residual",
        "--lambda",
        "2",
        "--eps",
        "0,-1/2",
        "--f",
        "x + 1/(4x)",
        "--f",
        "x - 1/(4x)",
    ]);
    let v: Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(v["is_solution"], true);
    let bad = pha(&[
        "residual", "--lambda", "2", "--eps", "0,-1/2", "--f", "x + 1/x", "--f", "x - 1/x",
    ]);
    let v: Value = serde_json::from_str(&stdout(&bad)).unwrap();
    assert_eq!(v["is_solution"], false);
}

#[test]
fn potential_of_linear_f1() {
    let out = pha(&["potential", "--f1", "-x", "--eps1", "1/2"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["v"], "1/2*x^2");
}

#[test]
fn integrate_csv_and_json_agree() {
    let args = [
        "integrate",
        "--lambda",
        "1",
        "--init",
        "0.34,0.33,0.33",
        "--x0",
        "1",
        "--x1",
        "2",
        "--steps",
        "50",
    ];
    let csv = stdout(&pha(&[&args[..], &["--format", "csv"]].concat()));
    let json: Value =
        serde_json::from_str(&stdout(&pha(&[&args[..], &["--format", "json"]].concat()))).unwrap();
    assert_eq!(csv.lines().next(), Some("x,f_1,f_2,f_3"));
    for (k, line) in csv.lines().skip(1).enumerate() {
        let vals: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(vals[0], json["x"][k].as_f64().unwrap());
        for i in 0..3 {
            assert_eq!(vals[i + 1], json["f"][i][k].as_f64().unwrap());
        }
    }
    assert!(json["conservation_defect"].as_f64().unwrap() < 1e-12);
}

#[test]
fn integrate_even_period_fails() {
    let out = pha(&[
        "integrate",
        "--lambda",
        "1",
        "--init",
        "0.5,0.5",
        "--x0",
        "1",
        "--x1",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["error"], "integration");
}

#[test]
fn susy_outputs() {
    let csv = stdout(&pha(&[
        "susy", "--seed", "0.5,0", "--steps", "4", "--states", "2",
    ]));
    assert_eq!(csv.lines().next(), Some("x,V1,phi_0,phi_1,phi_2"));
    let mid: Vec<f64> = csv
        .lines()
        .nth(3)
        .unwrap()
        .split(',')
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(&mid[..2], &[0.0, 1.0]);

    let out = pha(&[
        "susy", "--seed", "-1/2,0", "--steps", "20", "--format", "json", "--levels", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["nonsingularity"]["ok"], true);
    let p: Vec<BigRat> = v["ladder"]["p_coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| parse_rational(c.as_str().unwrap()).unwrap())
        .collect();
    assert_eq!(p.len(), 3);
    assert_eq!(p[2], q(3, 1));
    assert_eq!(v["spectra"][0]["levels"], serde_json::json!(["1/2", "3/2"]));
}

#[test]
fn susy_node_is_computation_failure() {
    let out = pha(&["susy", "--seed", "-0.5,2"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["error"], "susy");
    let b = v["detail"]["node_bracket"].as_array().unwrap();
    assert!((b[0].as_f64().unwrap() + 0.4769362762044699).abs() < 1e-9);
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["seed", "--n", "3", "--lambda", "1/x"][..],
        &["seed", "--n", "3", "--lambda", "0.5"],
        &[
            "orbit", "--m", "2", "--lambda", "1", "--depth", "1", "--bogus",
        ],
        &["painleve", "--four", "--g", "2x +"],
        &["susy", "--seed", "0.5"],
        &[],
    ] {
        let out = pha(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}
