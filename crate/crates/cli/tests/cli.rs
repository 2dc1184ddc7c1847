use std::process::{Command, Output};

use malle_cli::report::{Payload, Report};

fn malle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_malle")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Report {
    let out = malle(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report parses")
}

fn payload_json(args: &[&str]) -> serde_json::Value {
    serde_json::to_value(report(args).payload).unwrap()
}

#[test]
fn counterexample_verdicts() {
    let p = payload_json(&["counterexample", "--n", "2"]);
    assert_eq!(p["report"]["naive_b"], "108");
    assert_eq!(p["report"]["alpha"], "148/1");
    assert_eq!(p["report"]["is_counterexample"], true);
    assert_eq!(p["provenance"], "exact");
    let p = payload_json(&["counterexample", "--n", "1"]);
    assert_eq!(p["report"]["is_counterexample"], false);
    let p = payload_json(&["counterexample", "--n", "5", "--closed-form"]);
    assert_eq!(p["report"]["mode"], "closed_form");
}

#[test]
fn usage_and_cap_errors_exit_2() {
    assert_eq!(malle(&["counterexample", "--n", "0"]).status.code(), Some(2));
    assert_eq!(malle(&["counterexample", "--n", "4"]).status.code(), Some(2));
    assert_eq!(malle(&["count", "--n", "1"]).status.code(), Some(2));
    assert_eq!(malle(&["count", "--n", "1", "--x", "ninety"]).status.code(), Some(2));
    let out = malle(&["count", "--n", "1", "--x", "100000", "--mode", "tuples", "--tuple-cap", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
    assert_eq!(malle(&["count", "--n", "1", "--x", "10000", "--sieve-cap", "100"]).status.code(), Some(2));
    assert_eq!(malle(&["counterexample", "--n", "1", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(malle(&["euler", "--kind", "c0", "--n", "1", "--prime-bound", "50"]).status.code(), Some(2));
}

#[test]
fn counts() {
    let p = payload_json(&["count", "--n", "1", "--x", "90,3,2"]);
    let counts: Vec<&str> = p["rows"].as_array().unwrap().iter().map(|r| r["count"].as_str().unwrap()).collect();
    assert_eq!(counts, ["2322", "54", "0"]);
    let p = payload_json(&["count", "--n", "1", "--x", "3", "--mode", "epi"]);
    assert_eq!(p["rows"][0]["count"], "0");
    let epi = payload_json(&["count", "--n", "1", "--x", "300", "--mode", "epi"]);
    let hom = payload_json(&["count", "--n", "1", "--x", "300"]);
    let e: u64 = epi["rows"][0]["count"].as_str().unwrap().parse().unwrap();
    let h: u64 = hom["rows"][0]["count"].as_str().unwrap().parse().unwrap();
    assert!(0 < e && e < h);
}

#[test]
fn tuple_dump_matches_count() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tuples.txt");
    let p = payload_json(&["count", "--n", "1", "--x", "90", "--mode", "tuples", "--dump", path.to_str().unwrap()]);
    assert_eq!(p["rows"][0]["count"], "2322");
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2322);
    for line in &lines {
        for pair in line.split(' ') {
            let (i, v) = pair.split_once(':').unwrap();
            i.parse::<u64>().unwrap();
            v.parse::<u64>().unwrap();
        }
    }
    let again = dir.path().join("again.txt");
    report(&["count", "--n", "1", "--x", "90", "--mode", "tuples", "--dump", again.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&again).unwrap(), text);
}

#[test]
fn csv_sweep() {
    let out = malle(&["count", "--n", "1", "--x", "3,30,90", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,mode,x,count\n1,hom,3,54\n1,hom,30,486\n1,hom,90,2322\n");
}

#[test]
fn euler_and_predict() {
    let p = payload_json(&["euler", "--kind", "c0", "--n", "1", "--prime-bound", "100000"]);
    assert_eq!(p["product"]["provenance"], "truncated:100000");
    assert_eq!(p["product"]["truncation_bound"], 100000);
    let value: f64 = p["product"]["value"].as_str().unwrap().parse().unwrap();
    let tail: f64 = p["product"]["tail_estimate"].as_str().unwrap().parse().unwrap();
    assert!(value > 0.0 && tail > 0.0);

    let p = payload_json(&["predict", "--n", "1", "--x", "1000000", "--prime-bound", "100000"]);
    let v: f64 = p["rows"][0]["value"].as_str().unwrap().parse().unwrap();
    assert!(v.is_finite() && v > 0.0);
    assert!(p["c0"]["tail_estimate"].is_string());

    let out = malle(&["euler", "--kind", "mb", "--n", "1", "--family", "mixed", "--prime-bound", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    let p = payload_json(&["euler", "--kind", "mb", "--n", "1", "--family", "mixed", "--prime-bound", "1000", "--allow-even"]);
    assert_eq!(p["product"]["status"], "UNSUPPORTED_EVEN_ORDER");
    let p = payload_json(&["euler", "--kind", "tame", "--n", "1", "--family", "mixed", "--prime-bound", "1000"]);
    assert_eq!(p["product"]["status"], "OK");
    let one = payload_json(&["euler", "--kind", "mb", "--n", "1", "--prime-bound", "1000", "--identification", "1"]);
    let two = payload_json(&["euler", "--kind", "mb", "--n", "1", "--prime-bound", "1000", "--identification", "2"]);
    assert_eq!(one["product"]["value"], two["product"]["value"]);
}

#[test]
fn reports_round_trip_and_are_deterministic() {
    let args = ["count", "--n", "2", "--x", "100000"];
    let a = report(&[&args[..], &["--threads", "1"]].concat());
    let b = report(&[&args[..], &["--threads", "2"]].concat());
    assert_eq!(a.payload_json().unwrap(), b.payload_json().unwrap());
    let text = a.to_json().unwrap();
    let back: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(back, a);
    assert_eq!(back.schema, 1);

    let e1 = report(&["euler", "--kind", "c0", "--n", "2", "--prime-bound", "20000"]);
    let e2 = report(&["euler", "--kind", "c0", "--n", "2", "--prime-bound", "20000", "--threads", "1"]);
    assert_eq!(e1.payload_json().unwrap(), e2.payload_json().unwrap());
    let back: Report = serde_json::from_str(&e1.to_json().unwrap()).unwrap();
    assert_eq!(back, e1);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = malle(&["counterexample", "--n", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(matches!(r.payload, Payload::Counterexample(_)));
}

#[test]
fn group_from_descriptor() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g1.json");
    std::fs::write(
        &path,
        r#"{"center_orders": [3], "base_orders": [3, 9],
            "pairing": [{"left": [1, 0], "right": [0, 1], "target": 0, "modulus": 3}]}"#,
    )
    .unwrap();
    let p = payload_json(&["group", "--from", path.to_str().unwrap()]);
    assert_eq!(p["order"], 81);
    assert_eq!(p["naive_b"], 9);
    assert_eq!(p["abelianization"], serde_json::json!([3, 9]));
    let family = payload_json(&["group", "--family", "gn", "--n", "1"]);
    assert_eq!(family["descriptor"], p["descriptor"]);
    let p = payload_json(&["group", "--family", "mixed", "--n", "1"]);
    assert_eq!(p["order"], 24);
    std::fs::write(&path, r#"{"center_orders": [3], "bogus": 1}"#).unwrap();
    assert_eq!(malle(&["group", "--from", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn selftest_quick_passes() {
    let out = malle(&["selftest", "--level", "quick"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let r: Report = serde_json::from_slice(&out.stdout).unwrap();
    let Payload::Selftest(s) = r.payload else { panic!("wrong payload") };
    assert!(s.passed);
    assert!(s.checks.iter().any(|c| c.name == "S-set formulas" && c.passed));
    assert_eq!(s.cross_checks.len(), 1);
}

#[test]
fn selftest_full_runs_both_cross_checks() {
    let r = report(&["selftest", "--level", "full"]);
    let Payload::Selftest(s) = r.payload else { panic!("wrong payload") };
    assert!(s.passed);
    let ns: Vec<usize> = s.cross_checks.iter().map(|c| c.n).collect();
    assert_eq!(ns, [1, 2]);
    assert!(s.cross_checks.iter().all(|c| c.p_limit == 10_000 && c.violations.is_empty()));
}
