use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conifold-mirror"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn check_report_schema() {
    let out = cli(&[
        "check-disk",
        "--p",
        "1",
        "--r",
        "2",
        "--s",
        "1",
        "--q-order",
        "2",
        "--x-order",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["check"], "disk");
    assert_eq!(v["status"], "pass");
    assert!(v["first_mismatch"].is_null());
    assert_eq!(v["params"]["r"], 2);
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn exit_codes() {
    assert_eq!(
        cli(&["check-disk", "--p", "2", "--r", "1", "--s", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cli(&["check-graphsum", "0", "3", "--r", "2", "--s", "1", "--q-value", "9"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(cli(&["check-graphsum", "0", "1"]).status.code(), Some(2));
    assert_eq!(cli(&["check-graphsum", "0", "3", "--q", "x/y"]).status.code(), Some(2));
    assert_eq!(
        cli(&["check-annulus-q0", "--p", "2", "--r", "1", "--s", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(cli(&["dump", "rlimit", "--format", "tsv"]).status.code(), Some(2));
    assert_eq!(cli(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        cli(&["check-rmatrix", "--p", "3", "--r", "1", "--s", "2", "--z-order", "2"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn series_dump_formats() {
    let out = cli(&[
        "dump",
        "F01",
        "--p",
        "3",
        "--r",
        "1",
        "--s",
        "2",
        "--q-order",
        "1",
        "--x-order",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("exp_q1\texp_q2\texp_q3\texp_X\tnum\tden"));
    // X^1 first shows up with q2
    assert!(lines.any(|l| l == "0\t1\t0\t1\t1\t1"), "{text}");

    let out = cli(&[
        "dump",
        "v",
        "--p",
        "1",
        "--r",
        "1",
        "--s",
        "1",
        "--q-order",
        "1",
        "--x-order",
        "2",
        "--format",
        "json",
    ]);
    let v = json(&out);
    assert_eq!(v["vars"], serde_json::json!(["q1", "eta"]));
    assert!(!v["terms"].as_array().unwrap().is_empty());
}

#[test]
fn structured_dumps_and_out_files() {
    let v = json(&cli(&[
        "dump",
        "rlimit",
        "--p",
        "2",
        "--r",
        "3",
        "--s",
        "1",
        "--z-order",
        "2",
    ]));
    assert_eq!(v["p"], 2);
    assert_eq!(v["entries"][0][0][0], "1");
    assert_eq!(v["entries"][0][1][0], "0");

    let v = json(&cli(&["dump", "omega", "0", "3"]));
    assert_eq!(v["g"], 0);
    assert_eq!(v["n"], 3);
    assert_eq!(cli(&["dump", "omega"]).status.code(), Some(2));

    let dir = std::env::temp_dir().join(format!("cm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let base = dir.join("map");
    let out = cli(&[
        "dump",
        "tau",
        "--p",
        "3",
        "--r",
        "1",
        "--s",
        "2",
        "--q-order",
        "2",
        "--out",
        base.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    for a in [2, 3] {
        let t = std::fs::read_to_string(dir.join(format!("map_tau{a}"))).unwrap();
        assert!(t.starts_with("exp_q1\texp_q2\texp_q3\tnum\tden"));
    }
    std::fs::remove_dir_all(&dir).unwrap();
}
