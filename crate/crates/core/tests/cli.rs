use std::process::Command;

use eislab::cli::{rows_from_csv, TableRow};
use serde_json::Value;

fn eislab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eislab"))
        .args(args)
        .env_remove("EISLAB_MAX_LEVEL")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn cusp_order_queries() {
    let (code, out, _) = eislab(&["cusp-order", "--level", "17", "--m", "17"]);
    assert_eq!(code, 0);
    assert!(out.contains("order=4 h=2"), "{out}");
    let (code, out, _) = eislab(&["cusp-order", "--level", "30", "--m", "2", "--oracle"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("order=8 h=1") && out.contains("agreed=true"),
        "{out}"
    );
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = eislab(&["cusp-order", "--level", "12", "--m", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("not square-free"));
    assert_eq!(eislab(&["cusp-order", "--level", "30", "--m", "7"]).0, 2);
    assert_eq!(eislab(&["cusp-order", "--level", "30", "--m", "1"]).0, 2);
    assert_eq!(eislab(&["bogus"]).0, 2);
    assert_eq!(eislab(&["verify", "--suite", "nope"]).0, 2);
    assert_eq!(eislab(&["hecke-index", "--level", "71"]).0, 2);
}

#[test]
fn table_rows() {
    let (code, out, _) = eislab(&["table", "--max-level", "20", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("N,M,order,h\n"));
    for row in ["11,11,5,1", "17,17,4,2", "19,19,3,1"] {
        assert!(out.lines().any(|l| l == row), "missing {row}");
    }
    let (_, out, _) = eislab(&["table", "--max-level", "7", "--format", "csv"]);
    assert_eq!(out, "N,M,order,h\n7,7,1,1\n");
    // prime levels 1 mod 8 carry h = 2
    let rows =
        rows_from_csv(&eislab(&["table", "--max-level", "200", "--format", "csv"]).1).unwrap();
    for r in rows
        .iter()
        .filter(|r| r.n == r.m && eislab::exactnum::is_prime(r.n))
    {
        assert_eq!(r.h == 2, r.n % 8 == 1, "N={}", r.n);
    }
}

#[test]
fn csv_and_json_agree() {
    for extra in [&[][..], &["--oracle"][..]] {
        let mut args = vec!["table", "--max-level", "60"];
        args.extend_from_slice(extra);
        let csv = eislab(&[&args[..], &["--format", "csv"]].concat()).1;
        let json = eislab(&[&args[..], &["--format", "json"]].concat()).1;
        let doc: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(doc["meta"]["command"], "table");
        let from_json: Vec<TableRow> = serde_json::from_value(doc["data"].clone()).unwrap();
        assert_eq!(rows_from_csv(&csv).unwrap(), from_json);
    }
    let csv = eislab(&["hecke-index", "--level", "30", "--format", "csv"]).1;
    assert!(csv.starts_with("N,M,order,h,oracle_order,index,verdict\n"));
    let rows = rows_from_csv(&csv).unwrap();
    assert_eq!(rows.len(), 7);
}

#[test]
fn output_is_deterministic() {
    let a = eislab(&[
        "verify",
        "--suite",
        "index-vs-order",
        "--max-level",
        "30",
        "--format",
        "json",
    ]);
    let b = eislab(&[
        "verify",
        "--suite",
        "index-vs-order",
        "--max-level",
        "30",
        "--format",
        "json",
    ]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn hecke_index_and_suites() {
    let (code, out, _) = eislab(&["hecke-index", "--level", "11", "--m", "11"]);
    assert_eq!(code, 0);
    assert!(out.contains("M=11 t=5"), "{out}");
    let (code, out, _) = eislab(&["verify", "--suite", "main-theorem", "--max-level", "40"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("main-theorem: pass"));
    let (code, _, _) = eislab(&["verify", "--suite", "lattice-oracle", "--max-level", "210"]);
    assert_eq!(code, 0);
}

#[test]
fn eis_json_shape() {
    let (code, out, _) = eislab(&[
        "eis", "--level", "11", "--m", "11", "--prec", "5", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["data"]["precision"], 5);
    assert_eq!(doc["data"]["coeffs"][0].to_string(), "-10");
    assert_eq!(doc["data"]["coeffs"][1].to_string(), "-24");
}

#[test]
fn cap_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_eislab"))
        .args(["hecke-index", "--level", "71", "--m", "71"])
        .env("EISLAB_MAX_LEVEL", "80")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("t=35"));
}
