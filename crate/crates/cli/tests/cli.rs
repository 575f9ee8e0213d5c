use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn oqec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oqec")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", &format!("{name}.txt")].iter().collect();
    fs::read_to_string(path).unwrap()
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("params_shor9", &["params", "--code", "shor9"]),
    ("distance_bacon", &["distance", "--code", "bacon-shor-9"]),
    ("syndrome_shor9", &["syndrome", "--code", "shor9", "--error", "XIIIIIIII"]),
    ("decode_bacon", &["decode", "--code", "bacon-shor-9", "--error", "IXXIIIIII"]),
    ("gauge_fix_bacon", &["gauge-fix", "--code", "bacon-shor-9"]),
    ("find_gauge_five", &["find-gauge", "--code", "five-qubit", "--distance-min", "3"]),
    ("find_gauge_steane", &["find-gauge", "--code", "steane7", "--distance-min", "3"]),
    ("table_shor9", &["decode", "--code", "shor9", "--t", "1", "--dump-table"]),
    ("catalog", &["catalog"]),
    ("simulate_bacon", &["simulate", "--code", "bacon-shor-9", "--p", "0.02", "--shots", "20000", "--seed", "7"]),
    ("sweep_4112", &["sweep", "--n", "4", "--k", "1", "--r", "1", "--distance-min", "2"]),
    ("verify_bacon", &["verify", "--code", "bacon-shor-9"]),
];

#[test]
fn outputs_match_golden_files() {
    for (name, args) in GOLDEN {
        let out = oqec(args);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout(&out), golden(name), "{name}");
    }
}

/// Re-renders a JSON report in the plain layout.
fn flatten(v: &Value) -> String {
    let scalar = |v: &Value| match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".to_string(),
        other => other.to_string(),
    };
    let mut out = String::new();
    let mut text = String::new();
    for (k, v) in v.as_object().unwrap() {
        match v {
            Value::Array(items) => {
                for (i, item) in items.iter().enumerate() {
                    out.push_str(&format!("{k}[{i}]: {}\n", scalar(item)));
                }
            }
            Value::String(s) if k == "text" => text = s.clone(),
            other => out.push_str(&format!("{k}: {}\n", scalar(other))),
        }
    }
    out + &text
}

#[test]
fn json_carries_the_same_information() {
    for (name, args) in GOLDEN {
        let mut with_json = args.to_vec();
        with_json.push("--json");
        let out = oqec(&with_json);
        assert!(out.status.success(), "{name}");
        let text = stdout(&out);
        assert_eq!(text.lines().count(), 1, "{name}: one object per run");
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(flatten(&v), golden(name), "{name}");
    }
}

#[test]
fn catalog_code_round_trips_through_files() {
    let dir = tempdir("roundtrip");
    for name in ["shor9", "bacon-shor-9", "five-qubit", "steane7"] {
        let text = stdout(&oqec(&["catalog", "--code", name]));
        let path = dir.join(format!("{name}.code"));
        fs::write(&path, &text).unwrap();
        let p = path.to_str().unwrap();
        assert_eq!(stdout(&oqec(&["params", "--code", p])), stdout(&oqec(&["params", "--code", name])));
        assert_eq!(stdout(&oqec(&["distance", "--code", p])), stdout(&oqec(&["distance", "--code", name])));
    }
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("oqec-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn catalog_names_win_over_files() {
    let dir = tempdir("names");
    fs::write(dir.join("shor9"), stdout(&oqec(&["catalog", "--code", "five-qubit"]))).unwrap();
    let run = |code: &str| {
        Command::new(env!("CARGO_BIN_EXE_oqec"))
            .current_dir(&dir)
            .args(["params", "--code", code])
            .output()
            .unwrap()
    };
    assert!(stdout(&run("shor9")).starts_with("n: 9\n"));
    assert!(stdout(&run("./shor9")).starts_with("n: 5\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(oqec(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(oqec(&["params", "--code", "shor9", "--bogus"]).status.code(), Some(1));
    assert_eq!(oqec(&["params"]).status.code(), Some(1));
    assert_eq!(oqec(&["params", "--code", "no/such/file"]).status.code(), Some(1));
    assert_eq!(oqec(&["syndrome", "--code", "shor9", "--error", "XX"]).status.code(), Some(1));
    assert_eq!(oqec(&["--help"]).status.code(), Some(0));
    let out = oqec(&["find-gauge", "--code", "shor9", "--distance-min", "3", "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("exhausted: false"));
    let out = oqec(&["sweep", "--n", "5", "--k", "1", "--r", "1", "--distance-min", "3", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(oqec(&["find-gauge", "--code", "bacon-shor-9"]).status.code(), Some(1));
}

#[test]
fn simulate_requires_a_seed() {
    let out = oqec(&["simulate", "--code", "shor9", "--p", "0.01", "--shots", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
    assert!(out.stdout.is_empty());
}

#[test]
fn invalid_file_reports_line_and_column() {
    let dir = tempdir("invalid");
    let path = dir.join("bad.code");
    fs::write(&path, "n: 9\n[stabilizer]\nXXXXXXIIW\n").unwrap();
    let out = oqec(&["params", "--code", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3, column 9"));

    fs::write(&path, "n: 2\n[stabilizer]\nXI\nZI\n").unwrap();
    let out = oqec(&["params", "--code", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3, 4"));
}

#[test]
fn verify_fails_on_a_broken_gauge_operator() {
    let dir = tempdir("verify");
    let text = stdout(&oqec(&["catalog", "--code", "bacon-shor-9"])).replacen("IIXIIIIIX", "IIXIIIIII", 1);
    let path = dir.join("broken.code");
    fs::write(&path, text).unwrap();
    // The file itself is rejected before any matrix is built.
    let out = oqec(&["verify", "--code", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gauge_x[0] anticommutes"));
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        &["simulate", "--code", "shor9", "--p", "0.05", "--shots", "30000", "--seed", "3", "--workers", "1"][..],
        &["find-gauge", "--code", "shor9", "--distance-min", "3", "--workers", "1"][..],
    ] {
        assert_eq!(oqec(args).stdout, oqec(args).stdout);
    }
    let one = oqec(&["simulate", "--code", "shor9", "--p", "0.05", "--shots", "30000", "--seed", "3", "--workers", "1"]);
    let three = oqec(&["simulate", "--code", "shor9", "--p", "0.05", "--shots", "30000", "--seed", "3", "--workers", "3"]);
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn shipped_code_files_load() {
    let codes = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../codes");
    let out = oqec(&["params", "--code", codes.join("bacon-shor-9.code").to_str().unwrap()]);
    assert_eq!(stdout(&out), "n: 9\nk: 1\nr: 4\n");
}
