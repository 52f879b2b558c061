//! End-to-end checks of the binary: flag grammar, output shapes, exit
//! codes, and agreement between the table and compute paths.

use std::process::Command;

use num_rational::BigRational;
use num_traits::Signed;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qeuler"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

/// Lines of the form `label = value`, as (label, value) pairs.
fn value_lines(stdout: &str) -> Vec<(String, String)> {
    stdout
        .lines()
        .filter(|l| !l.starts_with('#'))
        .filter_map(|l| {
            l.split_once(" = ")
                .map(|(a, b)| (a.to_string(), b.to_string()))
        })
        .collect()
}

#[test]
fn compute_euler_range() {
    let (code, stdout, _) = run(&[
        "compute", "euler", "--n", "0..4", "--x", "0", "--chi", "principal:1", "--h", "1", "--r",
        "1", "--q", "1/2", "--mode", "exact",
    ]);
    assert_eq!(code, 0);
    let values = value_lines(&stdout);
    assert_eq!(values.len(), 5);
    assert_eq!(values[0], ("euler(n=0)".to_string(), "1".to_string()));
}

#[test]
fn compute_power_sum_value() {
    let (code, stdout, _) = run(&[
        "compute", "power-sum", "--n", "2", "--i", "1", "--w", "3", "--chi", "principal:1",
        "--h", "1", "--r", "1", "--q", "1/2",
    ]);
    assert_eq!(code, 0);
    let values = value_lines(&stdout);
    assert_eq!(values, vec![("power-sum(n=2)".to_string(), "-5/32".to_string())]);
}

#[test]
fn rejects_degenerate_q() {
    let (code, _, stderr) = run(&[
        "compute", "euler", "--n", "0", "--x", "0", "--chi", "principal:1", "--h", "1", "--r",
        "1", "--q", "1",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--q"), "stderr names the flag: {}", stderr);
}

#[test]
fn rejects_malformed_character() {
    let (code, _, stderr) = run(&[
        "compute", "euler", "--n", "0", "--x", "0", "--chi", "cubic:7", "--h", "1", "--r", "1",
        "--q", "1/2",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--chi"), "stderr names the flag: {}", stderr);

    let (code, _, stderr) = run(&["verify", "--chi", "3:0,1"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("chi"), "stderr names the flag: {}", stderr);
}

#[test]
fn missing_required_flag_is_usage_error() {
    let (code, _, stderr) = run(&["compute", "euler", "--n", "0", "--x", "0"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--q"), "stderr names the missing flag: {}", stderr);
}

#[test]
fn default_verify_passes() {
    let (code, stdout, _) = run(&["verify"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("all passed"), "got: {}", stdout);
    // Per-identity counts precede the summary.
    assert!(stdout.contains("umbral:"));
    assert!(stdout.contains("reflection:"));
}

#[test]
fn mutations_fail_verification() {
    for mutation in ["lhs", "weight", "character"] {
        let (code, stdout, _) = run(&["verify", "--mutate", mutation, "--chi", "quadratic:3"]);
        assert_eq!(code, 1, "mutation {} must fail the run", mutation);
        assert!(stdout.contains("failed"), "got: {}", stdout);
    }
}

#[test]
fn unknown_mutation_is_usage_error() {
    let (code, _, stderr) = run(&["verify", "--mutate", "transpose"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("transpose"));
}

#[test]
fn verify_json_schema() {
    let (code, stdout, _) = run(&[
        "verify", "--json", "--identities", "umbral,addition", "--q", "1/2", "--chi",
        "quadratic:3", "--h", "1", "--r", "1", "--n", "0..2", "--x", "0..1", "--y", "1",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("valid JSON");
    assert_eq!(doc["command"], "verify");
    assert!(doc["parameters"].is_object());
    let reports = doc["reports"].as_array().expect("reports array");
    // umbral: 3 n x 2 x; addition: 3 n x 2 x x 1 y.
    assert_eq!(reports.len(), 12);
    for rep in reports {
        assert!(rep["identity_id"].is_string());
        assert!(rep["params"].is_object());
        assert!(rep["lhs"].is_string());
        assert!(rep["rhs"].is_string());
        assert_eq!(rep["passed"], true);
        // Exact scalars round-trip through parsing.
        let lhs: BigRational = rep["lhs"].as_str().unwrap().parse().expect("rational");
        let rhs: BigRational = rep["rhs"].as_str().unwrap().parse().expect("rational");
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn verify_accepts_config_file() {
    let dir = std::env::temp_dir();
    let path = dir.join("qeuler_grid_ok.toml");
    std::fs::write(
        &path,
        r#"
identities = ["power-sum-symmetry", "reflection"]
q = ["1/3", "2/3"]
chi = ["principal:1", "quadratic:5"]
h = "-1..1"
r = [1, 2]
n = "0..3"
m = [0, 1]
x = [0, 1]
y = [0, "1/1"]
w = [[1, 3], [5, 3]]
"#,
    )
    .unwrap();
    let (code, stdout, _) = run(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0, "got: {}", stdout);
    assert!(stdout.contains("all passed"));

    // Inline flags override config fields.
    let (code, stdout, _) = run(&[
        "verify", "--config", path.to_str().unwrap(), "--identities", "umbral",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("umbral:"));
    assert!(!stdout.contains("reflection:"));
}

#[test]
fn bad_config_is_a_config_error() {
    let dir = std::env::temp_dir();
    let path = dir.join("qeuler_grid_bad.toml");
    std::fs::write(&path, "identities = [\"umbral\"\n").unwrap();
    let (code, _, stderr) = run(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("config"), "got: {}", stderr);

    let unknown = dir.join("qeuler_grid_unknown_key.toml");
    std::fs::write(&unknown, "degree = [1, 2]\n").unwrap();
    let (code, _, _) = run(&["verify", "--config", unknown.to_str().unwrap()]);
    assert_eq!(code, 2);

    let (code, _, _) = run(&["verify", "--config", dir.join("no_such.toml").to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn table_csv_shape() {
    let (code, stdout, _) = run(&[
        "table", "euler", "--q", "1/2", "--chi", "principal:1", "--h", "1", "--r", "1", "--n",
        "0..2", "--x", "0..1", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "n,x,value");
    assert_eq!(lines.len(), 7, "header plus 6 rows: {}", stdout);
    assert_eq!(lines[1], "0,0,1");
    // Deterministic n-major, x-minor order.
    let firsts: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(firsts, ["0", "0", "1", "1", "2", "2"]);
}

#[test]
fn table_json_matches_compute() {
    let (code, stdout, _) = run(&[
        "table", "euler", "--q", "2/3", "--chi", "quadratic:3", "--h", "2", "--r", "2", "--n",
        "0..3", "--x", "1", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("valid JSON");
    assert_eq!(doc["command"], "table");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);

    let (code, compute_out, _) = run(&[
        "compute", "euler", "--q", "2/3", "--chi", "quadratic:3", "--h", "2", "--r", "2", "--n",
        "0..3", "--x", "1",
    ]);
    assert_eq!(code, 0);
    let computed = value_lines(&compute_out);
    for (row, (_, value)) in rows.iter().zip(&computed) {
        assert_eq!(row["value"].as_str().unwrap(), value);
        assert_eq!(row["x"], "1");
    }
}

#[test]
fn power_sum_table_sweeps_i() {
    let (code, stdout, _) = run(&[
        "table", "power-sum", "--q", "1/2", "--chi", "principal:1", "--h", "1", "--r", "1",
        "--n", "2", "--x", "0..2", "--w", "3",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "n,x,value");
    assert_eq!(lines.len(), 4);
    // The pinned hand value S_{2,1}(3) sits in the i = 1 row.
    assert_eq!(lines[2], "2,1,-5/32");
}

#[test]
fn classical_table_is_the_near_one_limit() {
    let args_tail = [
        "--chi", "quadratic:3", "--r", "1", "--n", "0..4", "--x", "0..2", "--format", "csv",
    ];
    let (code, classical, _) = run(&[&["table", "classical"], &args_tail[..]].concat());
    assert_eq!(code, 0);
    let (code, near_one, _) = run(&[
        &["table", "euler", "--q", "99999999/100000000", "--h", "1"],
        &args_tail[..],
    ]
    .concat());
    assert_eq!(code, 0);

    let budget = BigRational::new(1.into(), 100_000.into());
    let cells = |s: &str| -> Vec<(String, String, BigRational)> {
        s.lines()
            .skip(1)
            .map(|l| {
                let mut parts = l.splitn(3, ',');
                let n = parts.next().unwrap().to_string();
                let x = parts.next().unwrap().to_string();
                let v: BigRational = parts.next().unwrap().parse().unwrap();
                (n, x, v)
            })
            .collect()
    };
    let a = cells(&classical);
    let b = cells(&near_one);
    assert_eq!(a.len(), 15);
    assert_eq!(a.len(), b.len());
    for ((n1, x1, v1), (n2, x2, v2)) in a.iter().zip(&b) {
        assert_eq!((n1, x1), (n2, x2));
        assert!(
            (v1 - v2).abs() <= budget,
            "cell (n={}, x={}) differs by more than 1e-5",
            n1,
            x1
        );
    }
}

#[test]
fn exact_output_is_byte_identical() {
    let args = [
        "verify", "--json", "--identities", "distribution-symmetry", "--q", "1/3", "--chi",
        "quadratic:5", "--h", "2", "--r", "2", "--n", "0..3", "--x", "0..1", "--w", "1:3,3:1",
    ];
    let (code1, out1, _) = run(&args);
    let (code2, out2, _) = run(&args);
    assert_eq!(code1, 0);
    assert_eq!(code2, 0);
    assert_eq!(out1, out2);
}

#[test]
fn numeric_q_literal_selects_numeric_mode() {
    let (code, stdout, _) = run(&[
        "compute", "euler", "--n", "1", "--x", "0", "--chi", "principal:1", "--h", "1", "--r",
        "1", "--q", "0.5@128",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("mode=numeric"));
    assert!(stdout.contains("precision=128"));
    let values = value_lines(&stdout);
    // Same point as the exact run (-2/5), now rendered as a decimal;
    // binary rounding may land a hair under.
    assert!(
        values[0].1.starts_with("-4.0") || values[0].1.starts_with("-3.9999"),
        "got {}",
        values[0].1
    );
    assert!(values[0].1.ends_with("e-1"), "got {}", values[0].1);
}

#[test]
fn l_series_reports_tail_bound() {
    let (code, stdout, _) = run(&[
        "compute", "l", "--q", "0.3", "--chi", "principal:1", "--h", "3", "--r", "1", "--s",
        "5/2", "--x", "1",
    ]);
    assert_eq!(code, 0);
    let values = value_lines(&stdout);
    assert_eq!(values.len(), 2);
    assert!(values[0].0.starts_with("l(s=5/2"));
    assert!(values[0].1.starts_with("1.2821897903672247"), "got {}", values[0].1);
    assert_eq!(values[1].0, "tail_bound");

    // A truncation too coarse for the tail budget is refused.
    let (code, _, stderr) = run(&[
        "compute", "l", "--q", "0.3", "--chi", "principal:1", "--h", "1", "--r", "1", "--s",
        "2", "--x", "1", "--limit", "4",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("tail"), "got: {}", stderr);

    // Divergent parameters are a domain error, not a wrong number.
    let (code, _, stderr) = run(&[
        "compute", "l", "--q", "0.3", "--chi", "principal:1", "--h", "0", "--r", "1", "--s",
        "2", "--x", "1",
    ]);
    assert_eq!(code, 2);
    assert!(!stderr.is_empty());
}

#[test]
fn complex_s_and_complex_character_parse() {
    let (code, stdout, _) = run(&[
        "compute", "l", "--q", "0.25", "--chi", "5:0,1,0+1i,0-1i,-1", "--h", "2", "--r", "1",
        "--s", "2+1i", "--x", "1",
    ]);
    assert_eq!(code, 0, "got: {}", stdout);
    let values = value_lines(&stdout);
    assert!(values[0].1.contains('i'), "complex value expected: {}", values[0].1);
}

#[test]
fn numeric_verify_grid() {
    let (code, stdout, _) = run(&[
        "verify", "--identities", "series-symmetry", "--q", "0.25", "--chi", "principal:1",
        "--h", "3", "--r", "1", "--x", "1", "--w", "1:3", "--s", "2,3+1i", "--tolerance",
        "1e-10", "--tail", "1e-20",
    ]);
    assert_eq!(code, 0, "got: {}", stdout);
    assert!(stdout.contains("series-symmetry: 2/2 passed"));
    assert!(stdout.contains("all passed"));
}
