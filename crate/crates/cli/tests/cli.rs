use std::path::PathBuf;
use std::process::{Command, Output};

fn avjet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avjet"))
        .args(args)
        .current_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../.."))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn computations_print_values() {
    let o = avjet(&["jet", "--chart", "fixtures/c2.json", "--order", "2", "1/x"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(1/x) + (-1/x^2)*t + (1/x^3)*t^2");

    let o = avjet(&["delta", "--chart", "A1", "--order", "3", "x"]);
    assert_eq!(stdout(&o).trim(), "(-1)*t");

    let o = avjet(&["bracket", "vf", "--chart", "C1", "(x1)*D(x2)", "(x2)*D(x1)"]);
    assert_eq!(stdout(&o).trim(), "(x1)*D(x1) + (-x2)*D(x2)");

    let o = avjet(&["phi", "--chart", "A1", "--order", "2", "(x^2 + 2*x*t + t^2)*D(x)"]);
    assert_eq!(stdout(&o).trim(), "(x^2)*D(x) + (2*x)*X*D(X) + (1)*X^2*D(X)");

    let o = avjet(&["psi", "--chart", "A1", "--order", "3", "X*D(X)"]);
    assert_eq!(stdout(&o).trim(), "((1)*t)*D(x)");

    let o = avjet(&["dop-mul", "--chart", "A1", "D(x)", "x"]);
    assert_eq!(stdout(&o).trim(), "(1) + (x)*D(x)");

    let o = avjet(&["av-map", "--chart", "A1", "--order", "2", "vf: (x^2)*D(x)"]);
    assert_eq!(stdout(&o).trim(), "(2*x)*[X*D(X)] + (1)*[X^2*D(X)] + (x^2)*D(x)");
}

#[test]
fn json_output_and_checks() {
    let o = avjet(&["transition", "--atlas", "fixtures/p1.json", "--from", "U0", "--to", "U1", "--m", "2", "--order", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["formula"], "(-1/u^2)*X^2*D(X)");
    assert_eq!(v["pass"], true);

    let o = avjet(&["cocycle", "--atlas", "P1", "--triple", "U1,U0,U2", "--order", "3"]);
    assert_eq!(o.status.code(), Some(0));

    let o = avjet(&["localize", "--chart", "C3", "--order", "3", "--g", "y", "--eta", "D(x)", "--terms", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["defect_order"].as_u64().unwrap() >= 2);
}

#[test]
fn input_errors_exit_with_two() {
    let cases: &[&[&str]] = &[
        &["jet", "--chart", "C2", "--order", "2", "1/(x+1)"],
        &["jet", "--chart", "C2", "--order", "2", "x +"],
        &["jet", "--chart", "nowhere.json", "--order", "2", "x"],
        &["verify", "unknown-suite"],
        &["verify", "taylor", "--case", "no-such-case"],
        &["no-such-command"],
        &["validate"],
    ];
    for args in cases {
        let o = avjet(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn validate_reports_schema_errors() {
    let dir = std::env::temp_dir().join(format!("avjet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"name": "A", "params": ["x"]}"#).unwrap();
    let o = avjet(&["validate", "--chart", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("denominator"));
    let o = avjet(&["validate", "--chart", "fixtures/c3.json", "--atlas", "fixtures/p1.json"]);
    assert_eq!(stdout(&o).trim(), "valid: C3, atlas:P1");
}

#[test]
fn verify_writes_reproducible_reports_and_replays_cases() {
    let dir = std::env::temp_dir().join(format!("avjet-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    for out in [&a, &b] {
        let o = avjet(&["verify", "localization", "--seed", "7", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let ra = std::fs::read(&a).unwrap();
    assert_eq!(ra, std::fs::read(&b).unwrap());
    let report: serde_json::Value = serde_json::from_slice(&ra).unwrap();
    let id = report["checks"][3]["id"].as_str().unwrap().to_string();
    let o = avjet(&["verify", "localization", "--seed", "7", "--case", &id, "--format", "json"]);
    let one: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(one["checks"][0], report["checks"][3]);
}
