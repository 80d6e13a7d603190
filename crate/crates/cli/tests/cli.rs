use std::process::{Command, Output};

fn ginedge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ginedge"))
        .args(args)
        .env_remove("GINEDGE_QUAD_POINTS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn zero_retention_is_certain() {
    let out = ginedge(&["cdf", "--gamma", "0", "--t-min", "-1", "--t-max", "0", "--t-step", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("gamma,t,cdf"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    for row in rows {
        assert!(row.starts_with("0,") && row.ends_with(",1"), "{row}");
    }
}

#[test]
fn csv_uses_lf_and_header() {
    let out = ginedge(&["cdf", "--t-min", "-2", "--t-max", "0", "--t-step", "0.5"]);
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    assert_eq!(text.lines().next(), Some("gamma,t,cdf"));
    let t0: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert_eq!(t0[1], "0");
    let p: f64 = t0[2].parse().unwrap();
    assert!((p - 0.5 * (1.0 + std::f64::consts::FRAC_1_SQRT_2)).abs() < 0.2);
}

#[test]
fn full_retention_table_within_tolerance() {
    let out = ginedge(&["table1", "--gamma", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("gamma,statistic,computed,reference,deviation,tolerance,within"));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert!(row.ends_with(",true"), "{row}");
    }
}

#[test]
fn moments_columns() {
    let out = ginedge(&["moments", "--gamma", "1"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("gamma,mean,variance,skewness,kurtosis,excess_kurtosis"));
    let fields: Vec<f64> = lines.next().unwrap().split(',').map(|f| f.parse().unwrap()).collect();
    assert!((fields[1] + 1.30319).abs() < 1e-4);
    assert!((fields[4] - 3.0 - fields[5]).abs() < 1e-9);
}

#[test]
fn checks_pass_and_tight_tolerance_fails() {
    let out = ginedge(&["check"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let mut count = 0;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["passed"], true, "{line}");
        count += 1;
    }
    assert!(count > 100);

    let out = ginedge(&["check", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invalid_flags_are_named() {
    for (args, flag) in [
        (vec!["cdf", "--gamma", "1.5"], "--gamma"),
        (vec!["cdf", "--t-min", "2", "--t-max", "1"], "--t-min"),
        (vec!["cdf", "--t-step", "0"], "--t-step"),
        (vec!["mth", "-m", "9"], "-m"),
        (vec!["mc", "--matrix-size", "1"], "--matrix-size"),
        (vec!["cdf", "--quad-points", "2"], "--quad-points"),
        (vec!["check", "--grid", "wide"], "--grid"),
    ] {
        let out = ginedge(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(stderr(&out).contains(flag), "{args:?}: {}", stderr(&out));
    }
    let out = ginedge(&["cdf", "--gamma", "abc"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--gamma"));
}

#[test]
fn quad_points_from_environment() {
    let run = |value: &str| {
        Command::new(env!("CARGO_BIN_EXE_ginedge"))
            .args(["cdf", "--t-min", "-1", "--t-max", "0", "--t-step", "0.5"])
            .env("GINEDGE_QUAD_POINTS", value)
            .output()
            .unwrap()
    };
    let bad = run("1");
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("GINEDGE_QUAD_POINTS"));
    let coarse = run("4");
    assert_eq!(coarse.status.code(), Some(0));
    let fine = ginedge(&["cdf", "--t-min", "-1", "--t-max", "0", "--t-step", "0.5"]);
    assert_ne!(stdout(&coarse), stdout(&fine));
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["cdf", "--gamma", "0.5,1", "--t-min", "-3", "--t-max", "1", "--t-step", "0.25"];
    assert_eq!(ginedge(&args).stdout, ginedge(&args).stdout);
    let mc = |threads: &str| {
        ginedge(&["mc", "--seed", "7", "--matrix-size", "16", "--samples", "40", "--gamma", "0.7", "--threads", threads])
    };
    let one = mc("1");
    assert_eq!(one.status.code(), Some(0), "{}", stderr(&one));
    assert_eq!(one.stdout, mc("2").stdout);
    assert_eq!(one.stdout, mc("1").stdout);
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["run"]["seed"], 7);
    assert_eq!(v["run"]["num_samples"], 40);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gen.csv");
    let out = ginedge(&["gen", "--t", "0", "--lambda", "0,1", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,generating_function");
    assert_eq!(lines[1], "0,1");
}

#[test]
fn tails_blocks() {
    let out = ginedge(&["tails", "--gamma", "1", "--t-min", "-1", "--t-max", "0", "--t-step", "0.5", "--series-terms", "200"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let blocks: Vec<&str> = text.split("\n\n").collect();
    assert_eq!(blocks.len(), 2);
    assert!(blocks[0].starts_with("gamma,t,exact,right_tail,left_tail\n"));
    assert!(blocks[1].starts_with("gamma,c1,c0_integral,c0_series\n"));
}
