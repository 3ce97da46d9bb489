use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracwell"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Parses the single-record CSV printed by `integrate` into (header, value) pairs.
fn integrate_record(out: &Output) -> Vec<(String, String)> {
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let record = reader.records().next().unwrap().unwrap();
    header.into_iter().zip(record.iter().map(String::from)).collect()
}

fn field(record: &[(String, String)], name: &str) -> String {
    record.iter().find(|(k, _)| k == name).unwrap().1.clone()
}

#[test]
fn version_reports_tool_and_schema() {
    let out = run(&["--version"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out).trim(),
        format!("fracwell {} (schema 1)", env!("CARGO_PKG_VERSION"))
    );
}

#[test]
fn help_is_success_and_bad_usage_is_64() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["scan", "--help"])), 0);
    assert_eq!(code(&run(&[])), 64);
    assert_eq!(code(&run(&["frobnicate"])), 64);
    assert_eq!(code(&run(&["integrate", "--alpha", "abc", "--x-tilde", "0"])), 64);
}

#[test]
fn symbol_check_default_passes() {
    let out = run(&["symbol-check"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("status=pass"));
}

#[test]
fn symbol_check_alpha_two_is_exact() {
    let out = run(&[
        "symbol-check",
        "--alpha-min",
        "2",
        "--alpha-max",
        "2",
        "--samples",
        "500",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("max_relative_residual=0.0"), "{}", stdout(&out));
}

#[test]
fn symbol_check_rejects_out_of_range_alpha() {
    assert_eq!(
        code(&run(&["symbol-check", "--alpha-min", "0.5", "--alpha-max", "0.9"])),
        64
    );
    assert_eq!(
        code(&run(&["symbol-check", "--alpha-min", "1.8", "--alpha-max", "1.2"])),
        64
    );
}

#[test]
fn symbol_check_per_sample_rows() {
    let out = run(&["symbol-check", "--samples", "5", "--seed", "9", "--per-sample"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "q,alpha,relative_residual");
    assert_eq!(lines.len(), 7);
    assert_eq!(
        text,
        stdout(&run(&["symbol-check", "--samples", "5", "--seed", "9", "--per-sample"]))
    );
}

#[test]
fn integrate_contour_alpha_two_centre() {
    let out = run(&[
        "integrate",
        "--alpha",
        "2",
        "--x-tilde",
        "0",
        "--n",
        "1",
        "--method",
        "contour",
    ]);
    assert_eq!(code(&out), 0);
    let record = integrate_record(&out);
    let value: f64 = field(&record, "value_re").parse().unwrap();
    assert!((value - 1.0).abs() < 1e-10);
    assert_eq!(field(&record, "converged"), "true");
}

#[test]
fn integrate_direct_methods_agree() {
    let value = |method: &str| -> f64 {
        let out = run(&["integrate", "--alpha", "1.5", "--x-tilde", "0.5", "--method", method]);
        assert_eq!(code(&out), 0);
        field(&integrate_record(&out), "value_re").parse().unwrap()
    };
    assert!((value("direct-tail") - value("direct-abel")).abs() < 1e-6);
}

#[test]
fn integrate_negative_position_and_json() {
    let out = run(&[
        "integrate",
        "--alpha",
        "1.75",
        "--x-tilde",
        "-0.5",
        "--n",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["x_tilde"], -0.5);
    assert_eq!(v["n"], 2);
    assert!(v["value_re"].as_f64().unwrap().is_finite());
}

#[test]
fn integrate_boundary_is_shifted() {
    let out = run(&["integrate", "--alpha", "1.5", "--x-tilde", "1", "--method", "contour"]);
    let record = integrate_record(&out);
    assert_eq!(field(&record, "x_tilde"), "0.9999");
    assert!(field(&record, "annotations").contains("boundary-shift"));
}

#[test]
fn integrate_non_convergence_is_3() {
    let out = run(&[
        "integrate",
        "--alpha",
        "1.5",
        "--x-tilde",
        "0.5",
        "--method",
        "direct-abel",
        "--max-evaluations",
        "100",
    ]);
    assert_eq!(code(&out), 3);
    assert_eq!(field(&integrate_record(&out), "converged"), "false");
}

#[test]
fn integrate_rejects_bad_physics() {
    assert_eq!(code(&run(&["integrate", "--alpha", "2.5", "--x-tilde", "0"])), 64);
    assert_eq!(
        code(&run(&["integrate", "--alpha", "1.5", "--x-tilde", "0", "--n", "0"])),
        64
    );
    assert_eq!(
        code(&run(&["integrate", "--alpha", "1.5", "--x-tilde", "0", "--a", "-1"])),
        64
    );
}

#[test]
fn scan_default_grid_matches_golden_header() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("scan.csv");
    let out = run(&[
        "scan",
        fixture("default.conf").to_str().unwrap(),
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let golden =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/header.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), golden.trim_end());
    assert_eq!(text.lines().count(), 1 + 4 * 11 * 3);
}

#[test]
fn scan_contour_only_leaves_direct_columns_empty() {
    let out = run(&["scan", fixture("contour_only.conf").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2 * 3 * 2);
    for row in &rows {
        for (name, value) in header.iter().zip(row.iter()) {
            if name.contains("direct") {
                assert!(value.is_empty(), "{name}={value}");
            }
        }
    }
}

#[test]
fn scan_rerun_is_byte_identical() {
    let config = fixture("contour_only.conf");
    let a = run(&["scan", config.to_str().unwrap(), "--workers", "1"]);
    let b = run(&["scan", config.to_str().unwrap(), "--workers", "4"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn scan_json_mirrors_csv_columns() {
    let out = run(&[
        "scan",
        fixture("contour_only.conf").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let golden =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/header.csv")).unwrap();
    let columns: Vec<&str> = v["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    assert_eq!(columns.join(","), golden.trim_end());
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
    assert_eq!(v["provenance"]["schema_version"], "1");
    assert_eq!(v["provenance"]["config_hash"].as_str().unwrap().len(), 64);
    assert!(v["summary"]["failed_cells"].as_u64() == Some(0));
}

#[test]
fn scan_failed_cells_exit_4() {
    let out = run(&["scan", fixture("starved.conf").to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    assert!(stdout(&out).contains("direct-abel=false"));
}

#[test]
fn scan_unreadable_and_invalid_config() {
    assert_eq!(code(&run(&["scan", "/definitely/not/here.conf"])), 66);
    let out = run(&["scan", fixture("bad_key.conf").to_str().unwrap()]);
    assert_eq!(code(&out), 64);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn scan_output_write_failure_is_reported() {
    let out = run(&[
        "scan",
        fixture("contour_only.conf").to_str().unwrap(),
        "--output",
        "/definitely/not/here/out.csv",
    ]);
    assert_eq!(code(&out), 74);
}

#[test]
fn spectral_check_cases() {
    let out = run(&["spectral-check", "--grid", "1024", "--alpha", "2", "--mode", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("status=pass"));
    assert!(stdout(&out).contains("interior_max="));
    assert_eq!(code(&run(&["spectral-check", "--grid", "8"])), 0);
    assert_eq!(code(&run(&["spectral-check", "--grid", "1000"])), 64);
    assert_eq!(code(&run(&["spectral-check", "--grid", "1024", "--period", "4"])), 64);
}

#[test]
fn exit_codes_are_disjoint() {
    let observed = [
        code(&run(&["symbol-check"])),
        code(&run(&[
            "integrate",
            "--alpha",
            "1.5",
            "--x-tilde",
            "0.5",
            "--method",
            "direct-abel",
            "--max-evaluations",
            "100",
        ])),
        code(&run(&["scan", fixture("starved.conf").to_str().unwrap()])),
        code(&run(&["spectral-check", "--grid", "1000"])),
        code(&run(&["scan", "/definitely/not/here.conf"])),
    ];
    assert_eq!(observed, [0, 3, 4, 64, 66]);
}
