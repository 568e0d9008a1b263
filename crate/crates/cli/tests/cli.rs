use std::process::{Command, Output};

fn blockheat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockheat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SMALL_STUDY: &[&str] = &[
    "converge",
    "--scheme",
    "second-block",
    "--bc",
    "dirichlet",
    "--n",
    "8,16,32",
    "--t-end",
    "0.05",
];

#[test]
fn converge_csv_schema_and_rows() {
    let o = blockheat(SMALL_STUDY);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["scheme", "bc", "c", "N", "s", "error", "observed_order"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 12);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(&r[0], "second-block");
        assert_eq!(&r[1], "dirichlet");
        let n: usize = r[3].parse().unwrap();
        assert_eq!(n, [8, 16, 32][i % 3]);
        let s: f64 = r[4].parse().unwrap();
        assert!((s - 0.5 / n as f64).abs() < 1e-15);
        let e: f64 = r[5].parse().unwrap();
        assert!(e.is_finite() && e > 0.0);
        if i % 3 == 0 {
            assert!(r[6].is_empty());
        } else {
            let p: f64 = r[6].parse().unwrap();
            assert!(p > 1.5 && p < 3.5, "row {i}: order {p}");
        }
    }
    let c0: f64 = rows[0][2].parse().unwrap();
    assert_eq!(c0, -0.25);
    let summary = String::from_utf8_lossy(&o.stderr);
    assert_eq!(summary.lines().filter(|l| l.contains("order")).count(), 4);
}

#[test]
fn converge_is_deterministic() {
    let a = blockheat(SMALL_STUDY);
    let b = blockheat(SMALL_STUDY);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn converge_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("study.json");
    let mut args = SMALL_STUDY.to_vec();
    let p = path.to_str().unwrap();
    args.extend(["--c", "-1/4,0", "--format", "json", "--out", p]);
    let o = blockheat(&args);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert_eq!(v["fits"].as_array().unwrap().len(), 2);
    assert_eq!(v["metadata"]["problem"], "exp-cos-ibvp");
    assert_eq!(v["metadata"]["t_end"], 0.05);
    assert!(v["rows"][0]["observed_order"].is_null());
    assert!(v["rows"][1]["observed_order"].is_f64());
    assert_eq!(v["rows"][0]["N"], 8);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn solve_at_time_zero_reproduces_the_projection() {
    let o = blockheat(&[
        "solve", "--scheme", "fourth-block", "--bc", "neumann", "--c", "4/13", "--n", "8", "--t-end", "0",
    ]);
    assert!(o.status.success());
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["x", "numerical", "exact", "error"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 16);
    for r in rows {
        assert_eq!(r[1], r[2]);
        assert_eq!(r[3].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn solve_json_snapshot() {
    let o = blockheat(&[
        "solve", "--scheme", "second-block", "--bc", "periodic", "--n", "16", "--t-end", "0.01", "--format", "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["x"].as_array().unwrap().len(), 34);
    assert_eq!(v["c"], -0.25);
    let err = v["error"].as_f64().unwrap();
    assert!(err > 0.0 && err < 1e-3);
}

#[test]
fn solve_polynomial_steady_state() {
    let o = blockheat(&[
        "solve", "--scheme", "second-block", "--bc", "dirichlet", "--problem", "poly:1,2,-3", "--n", "8",
        "--t-end", "0.1", "--format", "json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["error"].as_f64().unwrap() < 1e-12);
}

#[test]
fn usage_errors_exit_2() {
    let missing = blockheat(&["converge", "--bc", "periodic"]);
    assert_eq!(missing.status.code(), Some(2));
    let bad_c = blockheat(&["solve", "--scheme", "second-block", "--bc", "periodic", "--c", "1/0"]);
    assert_eq!(bad_c.status.code(), Some(2));
    let odd_n = blockheat(&["solve", "--scheme", "second-block", "--bc", "periodic", "--n", "7"]);
    assert_eq!(odd_n.status.code(), Some(2));
    let problem = blockheat(&["solve", "--scheme", "second-block", "--bc", "periodic", "--problem", "nope"]);
    assert_eq!(problem.status.code(), Some(2));
    let big_kappa = blockheat(&[
        "solve", "--scheme", "second-block", "--bc", "periodic", "--kappa", "5", "--t-end", "0.01",
    ]);
    assert_eq!(big_kappa.status.code(), Some(2));
}

#[test]
fn blow_up_exits_3() {
    let o = blockheat(&["solve", "--scheme", "second-block", "--bc", "periodic", "--c", "0.6", "--n", "64"]);
    assert_eq!(o.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("c = 0.6"), "{msg}");
    assert!(msg.contains("von Neumann"), "{msg}");
}

#[test]
fn analyze_stable_default() {
    let o = blockheat(&["analyze"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "stable");
    assert!(v["advisories"].as_array().unwrap().is_empty());
    assert!(v["norm_psi"].as_f64().unwrap() <= v["norm_psi_bound"].as_f64().unwrap());
    assert!(v["norm_psi_inverse"].as_f64().unwrap() <= v["norm_psi_inverse_bound"].as_f64().unwrap());
    assert!(v["min_determinant"].as_f64().unwrap() > 0.98);
    assert_eq!(v["records"].as_array().unwrap().len(), 17);
    let r = &v["records"][0];
    assert_eq!(r["alpha1"].as_array().unwrap().len(), 2);
}

#[test]
fn analyze_unstable_c() {
    let o = blockheat(&["analyze", "--c", "0.6"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "c ≥ 1/2: von Neumann condition violated");
    assert_eq!(v["advisories"].as_array().unwrap().len(), 2);
}

#[test]
fn analyze_table_csv() {
    let o = blockheat(&["analyze", "--table", "--n", "6", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("omega,bc,value\n"));
    assert!(text.contains("0,dirichlet,-87.541") && text.contains("6,neumann,-43.770"));
    assert!(text.contains("6,dirichlet,-29.180"));
    assert_eq!(text.lines().count(), 25);
}
