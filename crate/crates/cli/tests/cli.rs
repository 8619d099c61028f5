use std::process::{Command, Output};

use num_bigint::BigInt;
use serde_json::Value;

fn peakgf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_peakgf"))
        .args(args)
        .output()
        .expect("spawn peakgf")
}

fn stdout(args: &[&str]) -> String {
    let out = peakgf(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Table cells from each rendering, as strings.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    rdr.records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

fn json_rows(text: &str) -> Vec<Vec<String>> {
    let v: Value = serde_json::from_str(text).unwrap();
    v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_object()
                .unwrap()
                .values()
                .map(|c| match c {
                    Value::String(s) => s.clone(),
                    Value::Null => String::new(),
                    other => other.to_string(),
                })
                .collect()
        })
        .collect()
}

fn plain_rows(text: &str) -> Vec<Vec<String>> {
    let table = text.split("\n\n").nth(1).unwrap();
    table
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect()
}

#[test]
fn coeffs_examples() {
    let last = |args: &[&str]| {
        stdout(args)
            .lines()
            .last()
            .unwrap()
            .split_whitespace()
            .nth(1)
            .unwrap()
            .to_string()
    };
    assert_eq!(last(&["coeffs", "--order", "12"]), "-14701568");
    assert_eq!(
        last(&["coeffs", "--order", "42"]),
        "356077960394850110410690594606123271850033152"
    );
    let rows = csv_rows(&stdout(&[
        "coeffs", "--order", "5", "--t", "0", "--format", "csv",
    ]));
    let values: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(values, ["1", "1", "2", "4", "8", "16"]);
}

#[test]
fn rational_t_renders_as_fraction() {
    let rows = csv_rows(&stdout(&[
        "coeffs", "--order", "4", "--t", "-1/3", "--format", "csv",
    ]));
    // P_3(t) = 4 + 2t
    assert_eq!(rows[3][1], "10/3");
}

#[test]
fn formats_carry_identical_data() {
    for cmd in ["coeffs", "asymptotics", "signs", "residuals"] {
        let base = ["--order", "30", "--precision", "128"];
        let run = |fmt: &str| {
            let mut args = vec![cmd];
            args.extend_from_slice(&base);
            args.extend_from_slice(&["--format", fmt]);
            stdout(&args)
        };
        let plain = plain_rows(&run("plain"));
        let csv = csv_rows(&run("csv"));
        let json = json_rows(&run("json"));
        assert_eq!(csv, json, "{cmd}");
        assert_eq!(plain, csv, "{cmd}");
    }
}

#[test]
fn json_integers_round_trip_exactly() {
    let v: Value =
        serde_json::from_str(&stdout(&["coeffs", "--order", "60", "--format", "json"])).unwrap();
    for row in v["rows"].as_array().unwrap() {
        let s = row["value"].as_str().expect("integers are strings");
        let parsed: BigInt = s.parse().unwrap();
        assert_eq!(parsed.to_string(), s);
    }
    assert_eq!(v["meta"]["t"], Value::from("-1"));
    assert_eq!(v["meta"]["order"], Value::from(60));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["asymptotics", "--order", "40", "--pole-pairs", "2"][..],
        &["signs", "--order", "120", "--format", "json"][..],
        &["singularities", "--pole-pairs", "3", "--format", "csv"][..],
    ] {
        assert_eq!(peakgf(args).stdout, peakgf(args).stdout, "{args:?}");
    }
}

#[test]
fn asymptotic_summary_fields() {
    let v: Value = serde_json::from_str(&stdout(&[
        "asymptotics",
        "--order",
        "100",
        "--format",
        "json",
    ]))
    .unwrap();
    let field = |k: &str| v["summary"][k].as_str().unwrap().to_string();
    assert!(field("rho").starts_with("1.2736"));
    assert!(field("theta_over_pi_thirds").starts_with("1.0117"));
    let r100: f64 = v["rows"][100]["residual"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!(r100.abs() <= 1e-30, "r_100 = {r100}");
}

#[test]
fn signs_summary() {
    let s = stdout(&["signs", "--order", "60"]);
    assert!(s.contains("first_break: 42\n"));
    let s = stdout(&["signs", "--order", "41"]);
    assert!(s.contains("first_break: none\n"));
    let s = stdout(&["signs", "--order", "300"]);
    assert!(s.contains("cos_exceptions: 0\n"), "{}", &s[..400]);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["coeffs", "--t", "1"][..],
        &["coeffs", "--t", "3/2"][..],
        &["coeffs", "--t", "1/0"][..],
        &["coeffs", "--order", "-3"][..],
        &["asymptotics", "--pole-pairs", "0"][..],
        &["signs", "--order", "0"][..],
        &["verify", "--level", "medium"][..],
        &["coeffs", "--format", "xml"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(peakgf(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_quick_passes_and_fault_is_named() {
    assert_eq!(
        peakgf(&["verify", "--level", "quick"]).status.code(),
        Some(0)
    );
    let out = peakgf(&[
        "verify",
        "--level",
        "quick",
        "--inject-fault",
        "peak-recurrence",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("failed: enumeration-equivalence\n"), "{text}");
    let out = peakgf(&["peaks", "--order", "6", "--inject-fault", "peak-recurrence"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn peaks_table() {
    let rows = csv_rows(&stdout(&["peaks", "--order", "12", "--format", "csv"]));
    assert_eq!(rows[4][1], "16 88 16");
    assert_eq!(rows[11][2], "479001600");
    assert_eq!(rows[11][3], "-14701568");
    assert_eq!(rows[9][4], "true");
    assert_eq!(rows[10][4], "false");
}

#[test]
fn singularities_report_unit_residues() {
    let rows = csv_rows(&stdout(&[
        "singularities",
        "--pole-pairs",
        "2",
        "--format",
        "csv",
    ]));
    assert_eq!(rows.len(), 4);
    assert_eq!(
        rows.iter().map(|r| r[0].as_str()).collect::<Vec<_>>(),
        ["-2", "-1", "0", "1"]
    );
    for r in &rows {
        assert!(r[6].starts_with("1.0000000000"), "{}", r[6]);
        let defect: f64 = r[5].parse().unwrap();
        assert!(defect < 1e-30);
    }
}
