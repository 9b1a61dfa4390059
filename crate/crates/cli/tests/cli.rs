use std::process::{Command, Output};

use serde_json::Value;

fn hypercert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypercert"))
        .args(args)
        .env_remove("HYPERCERT_TOL")
        .env_remove("HYPERCERT_MAX_TERMS")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    hypercert(args).status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&hypercert(&all))).expect("valid JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn eval_examples() {
    let v = json(&[
        "eval", "--u", "1", "--v", "1", "--w", "2", "--z", "0.5", "0",
    ]);
    let re = num(&v["value"][0]);
    assert!((re - 2.0 * 2f64.ln()).abs() < 1e-12, "{re}");

    let v = json(&["eval", "--u", "1", "--v", "1", "--w", "2", "--z", "0", "0"]);
    assert_eq!(num(&v["value"][0]), 1.0);

    let out = hypercert(&[
        "eval", "--u", "1", "--v", "1", "--w", "0", "--z", "0.1", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole"));
}

#[test]
fn eval_functional_kind() {
    let v = json(&[
        "eval",
        "--u",
        "1",
        "--v",
        "1",
        "--w",
        "2",
        "--z",
        "0",
        "0",
        "--kind",
        "exp-starlike",
    ]);
    assert!((num(&v["value"][0]) - 1.0).abs() < 1e-15);
}

#[test]
fn certify_exit_codes() {
    assert_eq!(
        code(&["certify", "h1", "--u", "0.1", "--v", "0.1", "--w", "5"]),
        0
    );
    assert_eq!(
        code(&["certify", "h2", "--u", "0.1", "--v", "0.1", "--w", "10"]),
        1
    );
    assert_eq!(
        code(&[
            "certify",
            "janowski-convex",
            "--u",
            "0",
            "--v",
            "0",
            "--w",
            "1",
            "--C",
            "0.5",
            "--D",
            "0"
        ]),
        1
    );
    assert_eq!(
        code(&[
            "certify",
            "janowski-convex",
            "--u",
            "0",
            "--v",
            "0",
            "--w",
            "1"
        ]),
        64
    );
    assert_eq!(
        code(&["certify", "h1", "--u", "0.1", "--v", "0.1", "--w", "-2"]),
        2
    );
}

#[test]
fn certify_h2_reports_failing_clause() {
    let v = json(&["certify", "h2", "--u", "0.1", "--v", "0.1", "--w", "10"]);
    let failing: Vec<&str> = v["sub_results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["holds"] == false)
        .map(|s| s["id"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["h2.v"]);
}

#[test]
fn verify_exit_codes() {
    let small = ["--radii", "8", "--angles", "64"];
    let run = |extra: &[&str]| {
        let mut a = extra.to_vec();
        a.extend(small);
        code(&a)
    };
    assert_eq!(
        run(&[
            "verify", "function", "--u", "0.1", "--v", "0.1", "--w", "5", "--target", "exp-disk"
        ]),
        0
    );
    assert_eq!(
        run(&["verify", "function", "--u", "2", "--v", "2", "--w", "2.5", "--target", "exp-disk"]),
        1
    );
    // documented outcome for the H2-certified point near (-3, 1, 10)
    assert_eq!(
        run(&[
            "verify",
            "exp-convex",
            "--u",
            "-3",
            "--v",
            "1",
            "--w",
            "10",
            "--target",
            "exp-disk"
        ]),
        0
    );
    assert_eq!(
        run(&[
            "verify",
            "janowski-convex",
            "--u",
            "0",
            "--v",
            "0",
            "--w",
            "1"
        ]),
        64
    );
}

#[test]
fn verify_counterexample_block_has_reproduction_flags() {
    // H1 holds at (0.8, -0.5, 1) yet F(0.99) leaves the target disk
    let args = [
        "verify", "function", "--u", "0.8", "--v", "-0.5", "--w", "1", "--radii", "4", "--angles",
        "8",
    ];
    assert_eq!(
        code(&["certify", "h1", "--u", "0.8", "--v", "-0.5", "--w", "1"]),
        0
    );
    let out = hypercert(&args);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let block = &text[text.find("COUNTEREXAMPLE:").expect("block present")..];
    let cmd = block
        .lines()
        .find_map(|l| l.strip_prefix("reproduce: hypercert "))
        .expect("reproduction line");
    let replay: Vec<&str> = cmd.split_whitespace().collect();
    let again = hypercert(&replay);
    assert_eq!(again.status.code(), Some(1));
    assert_eq!(stdout(&again), text);
}

#[test]
fn crosscheck_is_deterministic() {
    let a = hypercert(&["crosscheck", "--seed", "42", "--samples", "10"]);
    let b = hypercert(&["crosscheck", "--seed", "42", "--samples", "10"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text
        .lines()
        .any(|l| l.starts_with("closed_forms") && l.contains("samples=10")));
    assert!(matches!(a.status.code(), Some(0 | 1)));
}

#[test]
fn scan_exit_codes() {
    let feasible = [
        "scan",
        "h2",
        "--range",
        "u=-4:0:41",
        "--range",
        "v=0:2:21",
        "--range",
        "w=5:15:21",
    ];
    assert_eq!(code(&feasible), 0);
    let empty = [
        "scan",
        "h2",
        "--range",
        "u=0.01:2:20",
        "--range",
        "v=0.01:2:20",
        "--range",
        "w=1:50:50",
    ];
    assert_eq!(code(&empty), 1);
    assert_eq!(
        code(&["scan", "h2", "--range", "u=-4:0", "--range", "v=0:2:3", "--range", "w=5:15:3"]),
        64
    );
    assert_eq!(
        code(&["scan", "h2", "--range", "q=0:1:3", "--range", "v=0:2:3", "--range", "w=5:15:3"]),
        64
    );
    assert_eq!(
        code(&["scan", "h2", "--range", "v=0:2:3", "--range", "w=5:15:3"]),
        64
    );
}

#[test]
fn scan_writes_csv_plot_data_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let plot = dir.path().join("rows.dat");
    let out = hypercert(&[
        "scan",
        "janowski-convex",
        "--range",
        "u=-1:1:3",
        "--range",
        "v=0",
        "--range",
        "w=2:4:2",
        "--pair",
        "0.5,0",
        "--pair",
        "1,0",
        "--output",
        csv.to_str().unwrap(),
        "--plot-data",
        plot.to_str().unwrap(),
    ]);
    assert!(matches!(out.status.code(), Some(0 | 1)));
    let rows = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = rows.lines().collect();
    assert!(lines[0].starts_with("u,v,w,C,D,"));
    assert_eq!(lines.len(), 1 + 3 * 2 * 2);
    assert!(std::fs::read_to_string(&plot).unwrap().starts_with("# "));
    assert!(stdout(&out).contains("feasible:"));
}

#[test]
fn formats_carry_the_same_numbers() {
    let args = ["certify", "h1", "--u", "0.1", "--v", "0.1", "--w", "5"];
    let text = stdout(&hypercert(&args));
    let csv = stdout(&hypercert(&[&args[..], &["--format", "csv"]].concat()));
    let v = json(&args);
    let margin = num(&v["sub_results"][0]["margin"]);
    let shown = format!("{margin:.16e}");
    assert!(text.contains(&shown));
    assert!(csv.contains(&format!("sub_results.0.margin,{shown}")));
}

#[test]
fn tolerance_flags_and_environment() {
    let eval = [
        "eval", "--u", "1", "--v", "1", "--w", "2", "--z", "0.5", "0",
    ];
    assert_eq!(code(&[&eval[..], &["--tol", "1e-3"]].concat()), 64);
    assert_eq!(code(&[&eval[..], &["--tol", "1e-8"]].concat()), 0);
    assert_eq!(code(&[&eval[..], &["--r-max", "1.5"]].concat()), 64);
    let out = Command::new(env!("CARGO_BIN_EXE_hypercert"))
        .args(eval)
        .env("HYPERCERT_TOL", "0.5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
    let out = Command::new(env!("CARGO_BIN_EXE_hypercert"))
        .args(eval)
        .env("HYPERCERT_MAX_TERMS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(code(&[]), 64);
    assert_eq!(code(&["frobnicate"]), 64);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
}

#[test]
fn output_flag_writes_main_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.txt");
    let out = hypercert(&[
        "certify",
        "h1",
        "--u",
        "0.1",
        "--v",
        "0.1",
        "--w",
        "5",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .starts_with("condition_set: H1"));
}
