use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghwlab"))
        .args(args)
        .env_remove("GHWLAB_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn code_command_reports_parameters() {
    let o = run(&[
        "code", "--class", "2", "-q", "2", "-m", "3", "-s", "1", "-k", "2", "-l", "1", "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(
        (v["n"].as_u64(), v["dim"].as_u64(), v["d"].as_u64()),
        (Some(12), Some(5), Some(4))
    );

    let o = run(&["code", "--class", "3", "-m", "2"]);
    assert!(stdout(&o).contains("[4, 4, 1]"));
    let o = run(&[
        "code", "--class", "1", "-q", "2", "-m", "4", "-k", "2", "-h", "0",
    ]);
    assert!(stdout(&o).contains("[12, 4, "));
}

#[test]
fn parameter_errors_exit_3() {
    let o = run(&[
        "code", "--class", "2", "-q", "2", "-m", "3", "-s", "1", "-k", "4", "-l", "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("k-l <= m-s"));
    assert_eq!(
        run(&["code", "--class", "1", "-q", "4", "-m", "2", "-k", "1", "-h", "0"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["code", "--class", "4", "-m", "2"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["ghw", "--class", "3", "-m", "2", "--methods", "magic"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["code", "--class", "3", "-m", "2", "--threads", "0"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn budget_refusal_exits_4_and_keeps_formula() {
    let o = run(&["ghw", "--class", "3", "-m", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(4));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("estimate") && err.contains("200787"));
    let out = stdout(&o);
    assert!(out.starts_with("r,d_support,d_dual,d_formula,witness,agree"));
    assert!(out.contains("1,,,28,,true"));

    let o = run(&["code", "--class", "3", "-m", "3", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn table_uses_weight_notation() {
    let o = run(&["verify", "--class", "3", "-m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("{wt_1=6, wt_2=10, wt_3=12, wt_4=14, wt_5=15, wt_6=16}"));
}

#[test]
fn deterministic_json_is_stable_and_out_writes_file() {
    let args = [
        "verify",
        "--class",
        "2",
        "-q",
        "3",
        "-m",
        "2",
        "-s",
        "1",
        "-k",
        "2",
        "-l",
        "1",
        "--format",
        "json",
        "--deterministic",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("timings"));
    assert!(!stdout(&a).contains("generated_at"));

    let path = std::env::temp_dir().join(format!("ghwlab-out-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let mut with_out = args.to_vec();
    with_out.extend(["--out", p]);
    assert_eq!(run(&with_out).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    let _ = std::fs::remove_file(&path);
}

#[test]
fn explicit_thetas_and_defset() {
    let o = run(&[
        "verify", "--class", "1", "-q", "3", "-m", "3", "-k", "1", "-h", "2", "--thetas", "001,002",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("{wt_1=12, wt_2=16, wt_3=18}"));
    let o = run(&["defset", "--class", "3", "-m", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["elements"].as_array().unwrap().len(), 4);
    let bad = run(&[
        "code", "--class", "1", "-q", "3", "-m", "3", "-k", "1", "-h", "2", "--thetas", "100,200",
    ]);
    assert_eq!(bad.status.code(), Some(3));
}
