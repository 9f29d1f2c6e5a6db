use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn expsum(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expsum"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .output()
        .expect("spawn expsum")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data lines of a CSV report, header comments stripped.
fn body(o: &Output) -> Vec<String> {
    stdout(o).lines().filter(|l| !l.starts_with('#')).map(str::to_string).collect()
}

fn field(header: &str, row: &str, name: &str) -> String {
    let i = header.split(',').position(|c| c == name).unwrap();
    row.split(',').nth(i).unwrap().to_string()
}

#[test]
fn tau_builds_then_hits_cache() {
    let dir = tempfile::tempdir().unwrap();
    let o = expsum(dir.path(), &["tau", "--n-max", "100"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let b = body(&o);
    assert_eq!(field(&b[0], &b[1], "tau_n_max"), "37534859200");
    assert_eq!(field(&b[0], &b[1], "status"), "built");

    let o = expsum(dir.path(), &["tau", "--n-max", "100"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("cache hit"));
    assert!(!stderr(&o).contains("computing"));
    let b = body(&o);
    assert_eq!(field(&b[0], &b[1], "status"), "cache-hit");
}

#[test]
fn corrupt_cache_needs_force() {
    let dir = tempfile::tempdir().unwrap();
    assert!(expsum(dir.path(), &["tau", "--n-max", "50"]).status.success());
    let path = dir.path().join("tau_v1_50.txt");
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, text.replacen("-24", "-25", 1)).unwrap();

    let o = expsum(dir.path(), &["tau", "--n-max", "50"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("--force"));

    let o = expsum(dir.path(), &["tau", "--n-max", "50", "--force"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let b = body(&o);
    assert_eq!(field(&b[0], &b[1], "status"), "rebuilt");
    assert!(expsum(dir.path(), &["tau", "--n-max", "50"]).status.success());
}

#[test]
fn missing_cache_is_reported_with_hint() {
    let dir = tempfile::tempdir().unwrap();
    let o = expsum(dir.path(), &["expsum", "--n", "1e4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("expsum tau --n-max 20000"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn expsum_rows() {
    let dir = tempfile::tempdir().unwrap();
    assert!(expsum(dir.path(), &["tau", "--n-max", "2e4"]).status.success());

    let o = expsum(dir.path(), &["expsum", "--n", "1e4", "--prime-only"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let b = body(&o);
    let v: f64 = field(&b[0], &b[1], "abs_value").parse().unwrap();
    let r: f64 = field(&b[0], &b[1], "bound_ratio").parse().unwrap();
    assert!(v.is_finite() && r.is_finite() && r > 0.0);

    let o = expsum(dir.path(), &["expsum", "--n", "1e4", "--n-prime", "1e4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let b = body(&o);
    assert_eq!(field(&b[0], &b[1], "abs_value").parse::<f64>().unwrap(), 0.0);
    assert_eq!(field(&b[0], &b[1], "n_terms"), "0");
}

#[test]
fn farey_method_matches_direct_and_writes_arcs() {
    let dir = tempfile::tempdir().unwrap();
    assert!(expsum(dir.path(), &["tau", "--n-max", "2e4"]).status.success());
    let arcs = dir.path().join("arcs.csv");
    let direct = expsum(dir.path(), &["expsum", "--n", "5000", "--q", "60"]);
    let farey = expsum(
        dir.path(),
        &["expsum", "--n", "5000", "--q", "60", "--arcs", arcs.to_str().unwrap()],
    );
    assert!(farey.status.success(), "{}", stderr(&farey));
    let (d, f) = (body(&direct), body(&farey));
    for col in ["value_re", "value_im"] {
        let a: f64 = field(&d[0], &d[1], col).parse().unwrap();
        let b: f64 = field(&f[0], &f[1], col).parse().unwrap();
        assert!((a - b).abs() < 1e-8 * (1.0 + a.abs()), "{col}: {a} vs {b}");
    }
    let text = fs::read_to_string(&arcs).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines[0], "q,l,x0,m1,m2,subsum_re,subsum_im,residual_norms");
    assert!(lines.len() > 2);
}

#[test]
fn farey_intervals_cover_range() {
    let dir = tempfile::tempdir().unwrap();
    let o = expsum(dir.path(), &["farey", "--n", "1e4", "--q", "100"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let b = body(&o);
    let total: u64 = b[1..].iter().map(|r| field(&b[0], r, "integers").parse::<u64>().unwrap()).sum();
    assert_eq!(total, 10_000);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(expsum(dir.path(), &["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(expsum(dir.path(), &["expsum", "--n", "1.5"]).status.code(), Some(2));
    // N' beyond 2N.
    let o = expsum(dir.path(), &["farey", "--n", "100", "--n-prime", "500"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn verify_ps_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = expsum(dir.path(), &["--format", "json", "verify", "ps", "--c", "1.05", "--n", "1e3"]);
    // Exit status tracks the whole suite, including the lambda^2 ratio trend.
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let all_pass = v["rows"].as_array().unwrap().iter().all(|r| r["pass"] == true);
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 1 }));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "verify");
    let rows = v["rows"].as_array().unwrap();
    let counting = rows.iter().find(|r| r["check"].as_str().unwrap().starts_with("ps-counting")).unwrap();
    assert_eq!(counting["pass"], true);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a.csv");
    let out2 = dir.path().join("b.csv");
    for out in [&out1, &out2] {
        let o = expsum(
            dir.path(),
            &["--out", out.to_str().unwrap(), "verify", "farey", "--seed", "3"],
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let (a, b) = (fs::read(&out1).unwrap(), fs::read(&out2).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().starts_with("# expsum-cli "));
}

#[test]
fn ps_grid_rows() {
    let dir = tempfile::tempdir().unwrap();
    assert!(expsum(dir.path(), &["tau", "--n-max", "2e4"]).status.success());
    let o = expsum(dir.path(), &["ps", "--c", "1.05", "--n", "1e3,1e4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let b = body(&o);
    assert_eq!(b[0], "N,c,ps_count,sum_lambda_sq,main_term,ratio,diff_over_N");
    assert_eq!(b.len(), 3);
    let r: f64 = field(&b[0], &b[2], "ratio").parse().unwrap();
    assert!((0.7..1.3).contains(&r));
    // c outside (1, 12/11) without --diagnostic.
    assert_eq!(expsum(dir.path(), &["ps", "--c", "1.2", "--n", "100"]).status.code(), Some(2));
    assert!(expsum(dir.path(), &["ps", "--c", "1.2", "--n", "100", "--diagnostic"]).status.success());
}
