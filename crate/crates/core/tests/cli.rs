//! End-to-end runs of the `gmib` binary.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const HEADER: &str = "beta,scheme,rate,value,params,stderr,flag";

fn gmib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmib"))
        .args(args)
        .env_remove("GMIB_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

struct Row {
    beta: String,
    scheme: String,
    rate: f64,
    value: f64,
    flag: String,
}

fn rows(csv: &str) -> Vec<Row> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(HEADER));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 7, "{l}");
            Row {
                beta: f[0].into(),
                scheme: f[1].into(),
                rate: f[2].parse().unwrap(),
                value: f[3].parse().unwrap(),
                flag: f[6].into(),
            }
        })
        .collect()
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn unified_dominates_every_scheme_row_wise() {
    let csv = stdout(&gmib(&[
        "curve",
        "--beta",
        "1",
        "--schemes",
        "all",
        "--r-grid",
        "0:3:0.25",
        "--units",
        "bits",
    ]));
    let mut by_rate: BTreeMap<String, Vec<Row>> = BTreeMap::new();
    for r in rows(&csv) {
        by_rate.entry(format!("{:.6}", r.rate)).or_default().push(r);
    }
    assert_eq!(by_rate.len(), 13);
    for (rate, group) in by_rate {
        let unified = group.iter().find(|r| r.scheme == "unified").expect("unified row").value;
        for r in &group {
            assert!(unified >= r.value - 1e-9, "{} beats unified at {rate} bits", r.scheme);
        }
    }
}

#[test]
fn every_row_respects_the_relevance_bound() {
    for (units, cap) in [("bits", 1.0), ("nats", LN_2)] {
        let csv = stdout(&gmib(&[
            "curve",
            "--schemes",
            "all",
            "--r-grid",
            "0:4:0.2",
            "--units",
            units,
        ]));
        for r in rows(&csv) {
            assert!(
                r.value >= 0.0 && r.value <= r.rate.min(cap) + 1e-9,
                "{} {} at {}",
                r.beta,
                r.scheme,
                r.rate
            );
        }
    }
}

#[test]
fn soft_classification_error() {
    let csv = stdout(&gmib(&[
        "classify",
        "--beta",
        "1.4142",
        "--schemes",
        "soft",
        "--r",
        "1.3869bits",
    ]));
    let r = rows(&csv);
    assert_eq!(r.len(), 1);
    assert!((r[0].value - 0.0944).abs() < 2e-3, "{}", r[0].value);
}

#[test]
fn monte_carlo_rows_are_flagged_and_agree() {
    let csv = stdout(&gmib(&[
        "classify",
        "--beta",
        "1",
        "--schemes",
        "two-level",
        "--r",
        "1bits",
        "--mc",
        "20000",
    ]));
    let r = rows(&csv);
    let closed = r.iter().find(|r| r.flag.is_empty()).unwrap();
    let mc = r.iter().find(|r| r.flag == "mc").unwrap();
    assert!((closed.value - 0.158655254).abs() < 1e-8);
    let se = (closed.value * (1.0 - closed.value) / 20000.0).sqrt();
    assert!((mc.value - closed.value).abs() < 4.0 * se);
}

#[test]
fn vector_relevance_at_three_bits() {
    let csv = stdout(&gmib(&[
        "vector",
        "--betas",
        "0.9,1,1.1",
        "--total-rate",
        "3bits",
        "--units",
        "bits",
    ]));
    let r = rows(&csv);
    assert_eq!(r.len(), 1);
    assert!((r[0].rate - 3.0).abs() < 1e-9);
    assert!((r[0].value - 0.7151).abs() < 0.02, "{}", r[0].value);
}

#[test]
fn vector_chain_rule_row() {
    let csv = stdout(&gmib(&[
        "vector",
        "--betas",
        "1,1",
        "--total-rate",
        "2bits",
        "--chain-rule",
        "4000",
    ]));
    assert!(rows(&csv).iter().any(|r| r.flag == "holds"), "{csv}");
}

#[test]
fn rate_literals_and_precedence_warning() {
    let a = stdout(&gmib(&[
        "curve",
        "--beta",
        "1",
        "--schemes",
        "unified",
        "--r",
        "0.6931471805599453nats",
    ]));
    let b = stdout(&gmib(&["curve", "--beta", "1", "--schemes", "unified", "--r", "1bits"]));
    assert_eq!(a, b);
    let out = gmib(&[
        "curve",
        "--beta",
        "1",
        "--schemes",
        "unified",
        "--units",
        "nats",
        "--r",
        "1bits",
    ]);
    assert_eq!(stdout(&out), a);
    assert!(stderr(&out).contains("suffix wins"), "{}", stderr(&out));
}

#[test]
fn output_is_byte_identical_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "classify",
        "--beta",
        "0.6,1",
        "--r-grid",
        "0.2:1.2:0.2",
        "--units",
        "nats",
        "--mc",
        "5000",
        "--seed",
        "9",
    ];
    let mut outputs = Vec::new();
    for (k, workers) in ["1", "3", "1"].iter().enumerate() {
        let out = dir.path().join(format!("run{k}.csv"));
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--workers", workers, "--out", path_str(&out)]);
        assert!(gmib(&full).status.success());
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    assert!(!outputs[0].contains(&b'\r'));

    let env_run = Command::new(env!("CARGO_BIN_EXE_gmib"))
        .args(args)
        .env("GMIB_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(stdout(&env_run).as_bytes(), outputs[0].as_slice());
}

#[test]
fn sidecar_echoes_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let res = gmib(&[
        "curve",
        "--beta",
        "1",
        "--r-grid",
        "0:1:0.5",
        "--units",
        "nats",
        "--out",
        path_str(&out),
    ]);
    assert!(res.status.success());
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    assert_eq!(side["version"], env!("CARGO_PKG_VERSION"));
    assert!(side["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert!(side["config"].is_object());
    assert_eq!(
        side["rows"].as_u64().unwrap() as usize,
        rows(&std::fs::read_to_string(&out).unwrap()).len()
    );
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"beta": "2", "r_grid": "0:1:0.5", "units": "nats", "schemes": "unified"}"#,
    )
    .unwrap();
    let from_file = rows(&stdout(&gmib(&["curve", "--config", path_str(&cfg)])));
    assert_eq!(from_file.len(), 3);
    assert!(from_file.iter().all(|r| r.beta == "2"));
    let overridden = rows(&stdout(&gmib(&["curve", "--config", path_str(&cfg), "--beta", "1"])));
    assert!(overridden.iter().all(|r| r.beta == "1"));

    std::fs::write(&cfg, r#"{"no_such_key": 1}"#).unwrap();
    assert_eq!(gmib(&["curve", "--config", path_str(&cfg)]).status.code(), Some(1));
}

#[test]
fn configuration_errors_exit_one_and_list_every_field() {
    let out = gmib(&["curve", "--beta=-1", "--grid-points", "0", "--r", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let msg = stderr(&out);
    assert_eq!(msg.trim_end().lines().count(), 1, "{msg}");
    for field in ["--beta", "--r", "--grid-points"] {
        assert!(msg.contains(field), "{field} missing from {msg}");
    }
    assert_eq!(gmib(&["curve", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(
        gmib(&["curve", "--schemes", "bogus", "--r", "1bits"]).status.code(),
        Some(1)
    );
    let bad_env = Command::new(env!("CARGO_BIN_EXE_gmib"))
        .args(["curve", "--r", "1bits"])
        .env("GMIB_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(1));
}

#[test]
fn io_errors_exit_two() {
    let out = gmib(&["curve", "--r", "1bits", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    let out = gmib(&["mnist", "--csv", "/nonexistent/data.csv", "--classes", "0,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn singular_class_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("flat.csv");
    let mut text = String::from("label,a,b,c,d\n");
    for i in 0..60 {
        text.push_str("0,1,2,3,4\n");
        let v: Vec<String> = (0..4)
            .map(|j| format!("{}", ((i * 7 + j * 13) % 17) as f64 / 5.0))
            .collect();
        text.push_str(&format!("1,{}\n", v.join(",")));
    }
    std::fs::write(&csv, text).unwrap();
    let out = gmib(&[
        "mnist",
        "--csv",
        path_str(&csv),
        "--classes",
        "0,1",
        "--r-grid",
        "1bits",
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert_eq!(stderr(&out).trim_end().lines().count(), 1);
}

#[test]
fn mnist_on_the_digit_fixture() {
    let images = fixture("digits-images.idx3-ubyte");
    let labels = fixture("digits-labels.idx1-ubyte");
    let csv = stdout(&gmib(&[
        "mnist",
        "--images",
        path_str(&images),
        "--labels",
        path_str(&labels),
        "--r-grid",
        "1:2:1",
        "--units",
        "bits",
        "--replicates",
        "2",
        "--dropout-step",
        "2",
    ]));
    let r = rows(&csv);
    for method in ["unified", "info-dropout"] {
        let n = r.iter().filter(|r| r.scheme == method).count();
        assert!(n >= 1, "no {method} rows in {csv}");
    }
    assert!(r.iter().all(|r| (0.0..=1.0).contains(&r.value)));
}

#[test]
fn baselines_two_clusters() {
    let csv = stdout(&gmib(&[
        "baselines",
        "--beta",
        "1",
        "--schemes",
        "agg-ib,seq-ib,det-ib",
        "--m",
        "2",
        "--units",
        "bits",
    ]));
    let r = rows(&csv);
    for (method, relevance) in [("agg-ib", 0.3685), ("seq-ib", 0.3519), ("det-ib", 0.3685)] {
        let best = r
            .iter()
            .filter(|r| r.scheme == method)
            .map(|r| r.value)
            .fold(0.0, f64::max);
        assert!((best - relevance).abs() < 0.03, "{method}: {best}");
    }
    for row in &r {
        assert!(row.value <= row.rate.min(1.0) + 1e-9);
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert!(gmib(&["--help"]).status.success());
    assert!(stdout(&gmib(&["--version"])).starts_with("gmib "));
}
