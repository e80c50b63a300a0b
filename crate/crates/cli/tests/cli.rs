use std::process::{Command, Output};

fn ternjump(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ternjump"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn analyze_verifies_357() {
    let out = ternjump(&["analyze", "3", "5", "7", "--verify", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["components"]["J"], 13);
    assert_eq!(v["oracle"]["J_up"], 13);
    assert_eq!(v["oracle"]["theta"], 33);
    assert_eq!(v["oracle"]["height"], 2);
    assert_eq!(v["checks"]["table_agree"], true);
    assert_eq!(v["checks"]["flat"], true);
}

#[test]
fn analyze_reports_components() {
    let out = ternjump(&["analyze", "3", "11", "23", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &json(&out)["components"];
    assert_eq!(
        (c["R"].as_i64(), c["S"].as_i64(), c["T"].as_i64()),
        (Some(6), Some(0), Some(6))
    );
    assert_eq!((c["main"].as_i64(), c["J"].as_i64()), (Some(39), Some(51)));
}

#[test]
fn analyze_text_without_oracle() {
    let out = ternjump(&["analyze", "3", "5", "7", "--no-oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("J=13"));
    assert!(text.contains("oracle       not run"));
}

#[test]
fn usage_errors_exit_2() {
    let out = ternjump(&["analyze", "3", "5", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not pairwise coprime"));
    for args in [
        &["analyze", "3", "5", "9", "--primes-only"][..],
        &["analyze", "3", "5", "35", "--primes-only"],
        &["classify", "3", "5", "7", "105"],
        &["classify", "3", "5", "7", "-1"],
        &["family", "germain", "--qmax", "11", "--eps", "1.5"],
        &["family", "six-m", "--m-from", "2", "--m-to", "4"],
        &["scan", "--pmax", "7", "--jobs", "0"],
        &["scan"],
        &["bogus"],
    ] {
        assert_eq!(ternjump(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn classify_examples() {
    let out = ternjump(&["classify", "3", "5", "7", "7", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["cell"], serde_json::json!([3, 2, 0]));
    assert_eq!(v["row"], "023");
    for key in ["v_oracle", "v_table", "v_octuple"] {
        assert_eq!(v[key], -1, "{key}");
    }
    let v = json(&ternjump(&["classify", "3", "5", "7", "0", "--json"]));
    assert_eq!(
        (v["row"].as_str(), v["v_table"].as_i64()),
        (Some("011"), Some(1))
    );
    let v = json(&ternjump(&["classify", "3", "5", "7", "104", "--json"]));
    assert_eq!(v["v_oracle"], 0);
    assert_eq!(v["v_table"], 0);
}

#[test]
fn table_matches_fixture() {
    let fixture = include_str!("fixtures/table1.csv");
    let out = ternjump(&["table"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), fixture);
    assert_eq!(fixture.lines().count(), 34);
    let corrected = stdout(&ternjump(&["table", "--corrected"]));
    let changed: Vec<_> = fixture
        .lines()
        .zip(corrected.lines())
        .filter(|(a, b)| a != b)
        .map(|(a, _)| &a[..3])
        .collect();
    assert_eq!(changed, ["001", "023", "024"]);
}

#[test]
fn coefficient_exports() {
    let text = stdout(&ternjump(&["coeffs", "3", "5", "7"]));
    assert!(text.starts_with("k,a(k)\n0,1\n"));
    assert!(text.contains("\n7,-2\n"));
    let jumps = stdout(&ternjump(&["coeffs", "3", "5", "7", "--jumps"]));
    assert_eq!(
        jumps
            .lines()
            .filter(|l| l.ends_with(",1") && !l.ends_with("-1"))
            .count(),
        13
    );
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("ternjump-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let out = ternjump(&["table", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        include_str!("fixtures/table1.csv")
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn scan_primes_to_13() {
    let out = ternjump(&["scan", "--pmax", "13", "--primes-only", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 11);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",pass")));
    assert!(String::from_utf8_lossy(&out.stderr).contains("10 passed, 0 failed"));
}

#[test]
fn scan_is_byte_identical_across_jobs() {
    for format in ["csv", "json", "text"] {
        let one = ternjump(&["scan", "--pmax", "13", "--jobs", "1", "--format", format]);
        let eight = ternjump(&["scan", "--pmax", "13", "--jobs", "8", "--format", format]);
        assert_eq!(one.status.code(), Some(0));
        assert!(
            one.stdout == eight.stdout,
            "{format} output depends on --jobs"
        );
    }
}

#[test]
fn sampled_scan_reports_seed() {
    let args = [
        "scan",
        "--pmax",
        "11",
        "--sample-k",
        "10",
        "--seed",
        "42",
        "--format",
        "json",
    ];
    let out = ternjump(&args);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["config"]["seed"], 42);
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed 42"));
    assert_eq!(out.stdout, ternjump(&args).stdout);
}

#[test]
fn six_m_family_passes() {
    let out = ternjump(&[
        "family", "six-m", "--m-from", "3", "--m-to", "20", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 18);
    for row in rows {
        assert_eq!(row["bound_pass"], true);
        assert_eq!(row["J_oracle"], row["J_formula"]);
    }
}

#[test]
fn germain_family_flags_small_t() {
    let out = ternjump(&[
        "family", "germain", "--qmax", "11", "--eps", "0.6", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("germain,,3,5,11,165,2,3/5,true"));
    assert!(text.contains("germain,,3,11,23,759,4,3/5,false,51,51"));
    let out = ternjump(&[
        "family", "germain", "--qmax", "11", "--eps", "2/5", "--format", "csv",
    ]);
    assert!(!stdout(&out).contains(",3,11,23,"));
}

#[test]
fn memory_bound_is_configurable() {
    let out = Command::new(env!("CARGO_BIN_EXE_ternjump"))
        .args(["analyze", "3", "5", "7"])
        .env("TERNJUMP_MAX_N", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds the oracle bound 100"));
    let out = Command::new(env!("CARGO_BIN_EXE_ternjump"))
        .args(["analyze", "3", "5", "7", "--no-oracle"])
        .env("TERNJUMP_MAX_N", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
