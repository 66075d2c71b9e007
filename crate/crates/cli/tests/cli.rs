use std::io::Write;
use std::process::{Command, Output};

use liekv_cli::report::RunReport;
use serde_json::Value;

fn liekv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liekv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = liekv(&full);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}{}",
            stdout(&o),
            String::from_utf8_lossy(&o.stderr)
        )
    });
    (o.status.code().unwrap(), v)
}

fn term_displays(check: &Value) -> Vec<String> {
    check["terms"]
        .as_array()
        .map(|ts| {
            ts.iter()
                .map(|t| t["display"].as_str().unwrap().to_string())
                .collect()
        })
        .unwrap_or_default()
}

#[test]
fn bch_degree_two() {
    let o = liekv(&["bch", "--max-degree", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<_> = stdout(&o).lines().map(str::to_owned).collect();
    for want in ["X", "Y", "1/2·[X,Y]"] {
        assert!(lines.iter().any(|l| l == want), "missing {want}");
    }
}

#[test]
fn bch_both_methods_agree() {
    let (code, v) = json(&["bch", "--max-degree", "4", "--method", "both"]);
    assert_eq!(code, 0);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    assert_eq!(checks[1]["pass"], true);
    assert!(term_displays(&checks[1]).is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(liekv(&["bch", "--max-degree", "0"]).status.code(), Some(2));
    assert_eq!(liekv(&["kv", "--check", "eq9"]).status.code(), Some(2));
    assert_eq!(
        liekv(&["numeric", "--algebra", "e8", "--check", "jq"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        liekv(&[
            "numeric",
            "--algebra",
            "sl2",
            "--algebra-file",
            "x",
            "--check",
            "jq"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        liekv(&[
            "duflo",
            "--algebra-file",
            "/nonexistent",
            "--check",
            "star-assoc"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn kv_f0_low_degree() {
    let (code, v) = json(&["kv", "--check", "f0", "--max-degree", "2"]);
    assert_eq!(code, 0);
    let f = term_displays(&v["checks"][0]);
    assert_eq!(f, ["1/4·Y", "1/24·[X,Y]"]);
    assert_eq!(v["checks"][0]["terms"][0]["coeff"], "1/4");
    assert_eq!(v["checks"][0]["terms"][0]["key"], "Y");
}

#[test]
fn kv_eq7_through_six() {
    let (code, v) = json(&["kv", "--check", "eq7", "--max-degree", "6"]);
    assert_eq!(code, 0);
    let c = &v["checks"][0];
    assert_eq!(c["pass"], true);
    assert_eq!(c["degrees"].as_array().unwrap().len(), 6);
    assert!(c["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .all(|d| d["zero"] == true));
}

#[test]
fn kv_eq8_through_four() {
    let (code, v) = json(&["kv", "--check", "eq8", "--max-degree", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"][0]["pass"], true);
    assert_eq!(v["checks"][0]["conjectural"], false);
}

#[test]
fn kv_eq8_high_degree_is_flagged_not_failed() {
    let (code, v) = json(&["kv", "--check", "eq8", "--max-degree", "8"]);
    assert_eq!(code, 0);
    let c = &v["checks"][0];
    assert_eq!(c["pass"], true);
    assert_eq!(c["conjectural"], true);
    let degrees = c["degrees"].as_array().unwrap();
    assert!(degrees[..7].iter().all(|d| d["zero"] == true));
    assert_eq!(degrees[7]["zero"], false);
}

#[test]
fn heisenberg_density_is_one() {
    let (code, v) = json(&["numeric", "--algebra", "heisenberg", "--check", "density"]);
    assert_eq!(code, 0);
    let n = &v["checks"][0]["numeric"];
    assert_eq!(n["samples"].as_array().unwrap().len(), 20);
    for s in n["samples"].as_array().unwrap() {
        assert!((s["lhs"][0].as_f64().unwrap() - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn abelian_eq10_exact_zeros() {
    let (code, v) = json(&["numeric", "--algebra", "abelian", "--check", "eq10"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"][0]["numeric"]["max_abs_error"], 0.0);
}

#[test]
fn sl2_eq11_seed_seven() {
    let (code, v) = json(&[
        "numeric",
        "--algebra",
        "sl2",
        "--check",
        "eq11",
        "--samples",
        "20",
        "--seed",
        "7",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["seed"], 7);
    assert!(v["checks"][0]["numeric"]["max_rel_error"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn impossible_tolerance_exits_one() {
    let o = liekv(&[
        "numeric",
        "--algebra",
        "sl2",
        "--check",
        "eq11",
        "--samples",
        "3",
        "--tol",
        "1e-300",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn duflo_examples() {
    let (code, v) = json(&["duflo", "--algebra", "sl2", "--check", "multiplicativity"]);
    assert_eq!(code, 0);
    // Casimir and its square give three pairs.
    assert_eq!(v["checks"].as_array().unwrap().len(), 3);
    let notes = v["checks"][0]["notes"].as_array().unwrap();
    let control = notes
        .iter()
        .find(|n| n.as_str().unwrap().starts_with("control"))
        .unwrap();
    assert!(!control.as_str().unwrap().ends_with("= 0"));

    let (code, v) = json(&["duflo", "--algebra", "heisenberg", "--check", "star-assoc"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);

    let o = liekv(&[
        "duflo",
        "--algebra",
        "abelian",
        "--check",
        "multiplicativity",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn json_is_deterministic_and_round_trips() {
    let args = [
        "--format",
        "json",
        "numeric",
        "--algebra",
        "so3",
        "--check",
        "eq10",
        "--samples",
        "4",
        "--seed",
        "11",
    ];
    let a = liekv(&args);
    let b = liekv(&args);
    assert_eq!(a.stdout, b.stdout);
    let report: RunReport = serde_json::from_slice(&a.stdout).unwrap();
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(again.as_bytes(), &a.stdout[..]);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["command"][0], "--format");
    assert!(v["versions"]["liekv"].is_string());
}

#[test]
fn algebra_file_matches_bundled() {
    let dir = std::env::temp_dir().join(format!("liekv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mysl2.txt");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(
        f,
        "# sl2 in the basis h, e, f\n3\n1 2 2 2\n1 3 3 -2\n2 3 1 1"
    )
    .unwrap();
    drop(f);
    let p = path.to_str().unwrap();
    let (code, from_file) = json(&[
        "numeric",
        "--algebra-file",
        p,
        "--check",
        "jq",
        "--samples",
        "3",
    ]);
    assert_eq!(code, 0);
    let (_, bundled) = json(&[
        "numeric",
        "--algebra",
        "sl2",
        "--check",
        "jq",
        "--samples",
        "3",
    ]);
    assert_eq!(
        from_file["checks"][0]["numeric"]["samples"],
        bundled["checks"][0]["numeric"]["samples"]
    );

    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "3\n1 2 3 1\n1 3 1 1\n").unwrap();
    let o = liekv(&[
        "numeric",
        "--algebra-file",
        bad.to_str().unwrap(),
        "--check",
        "jq",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn thread_variable_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_liekv"))
        .args(["bch", "--max-degree", "2"])
        .env("LIEKV_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_liekv"))
        .args(["bch", "--max-degree", "2"])
        .env("LIEKV_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
