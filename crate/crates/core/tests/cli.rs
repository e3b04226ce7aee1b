use std::fs;
use std::process::Command;

use hinted_search::cli::{run, EXIT_HORIZON, EXIT_INPUT, EXIT_OK};

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("hinted-search").chain(args.iter().copied()), &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn number_after(text: &str, key: &str) -> f64 {
    let start = text.find(key).unwrap_or_else(|| panic!("{key} missing in {text:?}")) + key.len();
    let tail = &text[start..];
    let end = tail.find(|c: char| c.is_whitespace()).unwrap_or(tail.len());
    tail[..end].parse().unwrap()
}

#[test]
fn eval_geometric_doubling() {
    let o = cli(&["eval", "--geometric", "b=2", "n=64"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(o.stdout, "cr=9.000000 (converged)\nmeasured=9.000000\n");
}

#[test]
fn eval_direction_family() {
    let o = cli(&["eval", "--family", "direction", "--r-params", "b=2,delta=1"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stdout.starts_with("consistency=9.000000 robustness=9.000000"), "{}", o.stdout);
}

#[test]
fn eval_json_output() {
    let o = cli(&["eval", "--family", "kbit", "--r-params", "r=9,k=1", "--format", "json"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    let c = v["consistency"].as_f64().unwrap();
    assert!((c - (1.0 + 4.0 * 2f64.sqrt())).abs() < 1e-6);
    assert_eq!(v["method"], "measured");
}

#[test]
fn malformed_inputs_exit_two_and_name_the_field() {
    let o = cli(&["eval", "--strategy", r#"{"segments":[{"length":-1,"branch":0}]}"#]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("length"), "{}", o.stderr);

    let o = cli(&["eval", "--strategy", r#"{"segments":[{"length":1}]}"#]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("branch"), "{}", o.stderr);

    let o = cli(&["eval", "--family", "direction", "--r-params", "b=2,delta=1.5"]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("delta"), "{}", o.stderr);

    let o = cli(&["eval", "--family", "direction", "--r-params", "b=2,gamma=1"]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("gamma"), "{}", o.stderr);

    let o = cli(&["eval", "--geometric", "n=4"]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("`b`"), "{}", o.stderr);

    let o = cli(&["eval", "--family", "position", "--r-params", "r=8"]);
    assert_eq!(o.code, EXIT_INPUT);

    let o = cli(&["eval"]);
    assert_eq!(o.code, EXIT_INPUT);
}

#[test]
fn frontier_position_rows() {
    let o = cli(&["frontier", "--class", "position", "--r", "9:25:1"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "hint_class,k,r,c_upper,c_lower,b_star,delta_star");
    assert_eq!(lines.len(), 18);
    assert_eq!(lines[1], "position,,9,3,3,2,");
}

#[test]
fn frontier_kbit_and_bad_ranges() {
    let o = cli(&["frontier", "--class", "kbit", "--k", "3", "--r", "9:9:1"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let row: Vec<&str> = o.stdout.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "kbit");
    assert_eq!(row[1], "3");
    let c: f64 = row[3].parse().unwrap();
    assert!((c - (1.0 + 2f64.powf(2.125))).abs() < 1e-8);

    for bad in ["8:10:1", "10:9:1", "9:10:0", "abc"] {
        let o = cli(&["frontier", "--class", "position", "--r", bad]);
        assert_eq!(o.code, EXIT_INPUT, "{bad}");
        assert!(o.stderr.contains("`r`"), "{}", o.stderr);
    }
}

#[test]
fn frontier_to_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = cli(&["frontier", "--class", "direction", "--r", "9:20:0.5", "--output", p.to_str().unwrap()]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
        assert!(o.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn verify_suites() {
    let o = cli(&["verify", "oracle", "--seed", "7", "--count", "200"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stdout.starts_with("oracle: holds"), "{}", o.stdout);
    assert_eq!(o.stdout, cli(&["verify", "oracle", "--seed", "7", "--count", "200"]).stdout);

    let o = cli(&["verify", "all"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(o.stdout.lines().count(), 3);
    assert!(o.stdout.contains("lemma: holds"));
    assert!(o.stdout.contains("corollary: holds"));
}

#[test]
fn partition_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("p.json");
    let csv = dir.path().join("p.csv");
    let o = cli(&[
        "partition",
        "--r",
        "9",
        "--k",
        "1",
        "--max",
        "16",
        "--json",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(o.stdout, fs::read_to_string(&json).unwrap());
    let csv = fs::read_to_string(&csv).unwrap();
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("branch,lo,hi,label"));
    let first: Vec<&str> = rows.next().unwrap().split(',').collect();
    assert_eq!(first[0], "0");
    assert_eq!(first[1].parse::<f64>().unwrap(), 1.0);
    assert!((first[2].parse::<f64>().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(first[3], "1");

    let o = cli(&["partition", "--r", "9", "--k", "1", "--max", "1", "--format", "csv"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(o.stdout.lines().count(), 3);
}

#[test]
fn horizon_errors_exit_three() {
    let o = cli(&["partition", "--r", "9", "--k", "1", "--max", "1e30", "--horizon", "10"]);
    assert_eq!(o.code, EXIT_HORIZON, "{}", o.stderr);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, "horizon = 8\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let args = ["--config", cfg, "partition", "--r", "9", "--k", "1", "--max", "1e6"];
    assert_eq!(cli(&args).code, EXIT_HORIZON);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--horizon", "64"]);
    assert_eq!(cli(&with_flag).code, EXIT_OK);

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "horizn = 8\n").unwrap();
    let o = cli(&["--config", bad.to_str().unwrap(), "verify", "lemma"]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("horizn"), "{}", o.stderr);
}

#[test]
fn emitted_member_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let member = dir.path().join("member.json");
    let family = cli(&[
        "eval",
        "--family",
        "direction",
        "--r-params",
        "b=2,delta=0.5",
        "--emit-strategy",
        member.to_str().unwrap(),
    ]);
    assert_eq!(family.code, EXIT_OK, "{}", family.stderr);
    let file = cli(&["eval", "--file", member.to_str().unwrap()]);
    assert_eq!(file.code, EXIT_OK, "{}", file.stderr);
    let robustness = number_after(&family.stdout, "robustness=");
    assert!((number_after(&file.stdout, "cr=") - robustness).abs() < 1e-6);
    assert!((number_after(&file.stdout, "measured=") - robustness).abs() < 1e-6);

    let descriptor = dir.path().join("family.json");
    fs::write(&descriptor, r#"{"family":"direction","b":2.0,"delta":0.5}"#).unwrap();
    let o = cli(&["eval", "--descriptor", descriptor.to_str().unwrap()]);
    assert_eq!(o.stdout, family.stdout);
}

#[test]
fn help_and_binary_exit_codes() {
    let o = cli(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    for sub in ["eval", "frontier", "verify", "partition"] {
        assert!(o.stdout.contains(sub), "{sub}");
    }
    let status = Command::new(env!("CARGO_BIN_EXE_hinted-search"))
        .args(["frontier", "--class", "position", "--r", "5"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_INPUT));
    let ok = Command::new(env!("CARGO_BIN_EXE_hinted-search"))
        .args(["eval", "--geometric", "b=2", "n=64"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8(ok.stdout).unwrap().starts_with("cr=9.000000"));
}
