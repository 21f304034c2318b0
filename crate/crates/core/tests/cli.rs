use std::io::Write;
use std::process::{Command, Output};

use conemetric::classifier::Certificate;

fn conemetric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conemetric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_json(text: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    file.write_all(text.as_bytes()).unwrap();
    file
}

#[test]
fn certificate_json_round_trips_byte_for_byte() {
    for angles in [&["3/2", "5/4", "5/4"][..], &["2", "2", "3"], &["1/2", "1/2", "2"], &["7/3"], &[]] {
        let mut args = vec!["--format", "json", "check"];
        args.extend_from_slice(angles);
        let out = stdout(&conemetric(&args));
        let line = out.trim_end();
        let cert: Certificate = serde_json::from_str(line).unwrap();
        assert_eq!(serde_json::to_string(&cert).unwrap(), line);
    }
}

#[test]
fn one_axis_region_matches_concatenated_checks() {
    let region = stdout(&conemetric(&[
        "region", "--n", "3", "--fix", "2=5/4", "--fix", "3=5/4", "--vary", "1=1/4:3:1/4", "--format", "json",
    ]));
    let mut concatenated = String::new();
    let mut value = conemetric::RationalScalar::new(1, 4);
    let step = conemetric::RationalScalar::new(1, 4);
    while value <= conemetric::RationalScalar::from_integer(3) {
        let v = value.to_string();
        concatenated.push_str(&stdout(&conemetric(&["--format", "json", "check", &v, "5/4", "5/4"])));
        value = value + &step;
    }
    assert_eq!(region, concatenated);
    assert!(region.contains(r#""rule":"MainTheoremNonIntegral""#));
}

#[test]
fn region_csv_reports_the_equality_stratum() {
    let out = stdout(&conemetric(&[
        "region", "--n", "3", "--fix", "3=5/4", "--vary", "1=1:2:1/20", "--vary", "2=1:2:1/20",
    ]));
    assert!(out.lines().any(|l| l == "3/2,5/4,NotAdmissible,MainTheoremNonIntegral,3,1"));
    for line in out.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert!(["Admissible", "NotAdmissible", "Unknown"].contains(&fields[2]));
    }
}

#[test]
fn surface_from_file() {
    let good = write_json(
        r#"{"triangles": [{"id": "t1", "angles_pi": ["2/3","2/3","2/3"]},
                          {"id": "t2", "angles_pi": ["2/3","2/3","2/3"]}],
            "pairings": [{"a": ["t1", 0], "b": ["t2", 0], "reversed": false},
                         {"a": ["t1", 1], "b": ["t2", 1], "reversed": false},
                         {"a": ["t1", 2], "b": ["t2", 2], "reversed": false}]}"#,
    );
    let out = conemetric(&["--format", "json", "surface", good.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["audit_passed"], true);
    assert_eq!(report["report"]["chi"], 2);
    assert_eq!(report["counts"]["faces"], 2);
}

#[test]
fn bad_pairing_fails_the_audit() {
    let bad = write_json(
        r#"{"triangles": [{"id": "t1", "angles_pi": ["1/2","1/2","1/2"]},
                          {"id": "t2", "angles_pi": ["2/3","1/2","1/2"]}],
            "pairings": [{"a": ["t1", 0], "b": ["t2", 0], "reversed": false},
                         {"a": ["t1", 1], "b": ["t2", 1], "reversed": false},
                         {"a": ["t1", 2], "b": ["t2", 2], "reversed": false}]}"#,
    );
    let out = conemetric(&["surface", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("paired edges differ in length"), "{err}");

    let unpaired = write_json(
        r#"{"triangles": [{"id": "t1", "angles_pi": ["1/2","1/2","1/2"]}], "pairings": []}"#,
    );
    assert_eq!(conemetric(&["surface", unpaired.path().to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn malformed_inputs_are_usage_errors() {
    let garbage = write_json("{not json");
    assert_eq!(conemetric(&["surface", garbage.path().to_str().unwrap()]).status.code(), Some(64));
    assert_eq!(conemetric(&["surface", "/nonexistent/surface.json"]).status.code(), Some(64));
    assert_eq!(conemetric(&["check", "1/0"]).status.code(), Some(64));
    assert_eq!(conemetric(&["distance", "x"]).status.code(), Some(64));
}

#[test]
fn tolerance_flag_reaches_the_audits() {
    // A loose tolerance below the octant side mismatch accepts nothing new,
    // but the flag must parse globally on every command.
    let out = conemetric(&["surface", "--builtin", "octant-double", "--tolerance", "1e-6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("audit:   pass"));
}
