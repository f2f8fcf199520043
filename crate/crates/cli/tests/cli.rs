use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn gradalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gradalg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Files {
    dir: TempDir,
    eg: PathBuf,
    ge: PathBuf,
    ee: PathBuf,
    fine: PathBuf,
    twisted: PathBuf,
}

fn files() -> Files {
    let dir = TempDir::new().unwrap();
    let eg = write(
        &dir,
        "eg.json",
        r#"{"group": "C2", "H": [0], "tuple": [0, 1]}"#,
    );
    let ge = write(
        &dir,
        "ge.json",
        r#"{"group": "C2", "H": [0], "tuple": [1, 0]}"#,
    );
    let ee = write(
        &dir,
        "ee.json",
        r#"{"group": "C2", "H": [0], "tuple": [0, 0]}"#,
    );
    let fine = write(
        &dir,
        "fine.json",
        r#"{"group": "C2xC2", "H": [0, 1, 2, 3], "tuple": [0]}"#,
    );
    let twisted = write(
        &dir,
        "twisted.json",
        r#"{"group": "C2xC2", "H": [0, 1, 2, 3], "tuple": [0],
            "cocycle": {"n": 2, "exps": [[0,0,0,0],[0,0,1,1],[0,0,0,0],[0,0,1,1]]}}"#,
    );
    Files {
        dir,
        eg,
        ge,
        ee,
        fine,
        twisted,
    }
}

#[test]
fn dims_table() {
    let f = files();
    let o = gradalg(&["dims", "-p", s(&f.eg)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("e  2") && out.contains("g  2") && out.contains("total  4"));
}

#[test]
fn equivalence_certificate_round_trip() {
    let f = files();
    let cert = f.dir.path().join("eq.json");
    let o = gradalg(&["equiv", "-a", s(&f.eg), "-b", s(&f.ge), "-o", s(&cert)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("EQUIVALENT"));
    let o = gradalg(&["verify", "-c", s(&cert)]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("VALID"));

    // corrupt the permutation
    let text = fs::read_to_string(&cert).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["sequence"]["moves"][0]["perm"] = serde_json::json!([0, 1]);
    fs::write(&cert, v.to_string()).unwrap();
    let o = gradalg(&["verify", "-c", s(&cert)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("INVALID"));
}

#[test]
fn not_equivalent_reports_differences() {
    let f = files();
    let o = gradalg(&["equiv", "-a", s(&f.eg), "-b", s(&f.ee)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("NOT EQUIVALENT"));
    assert!(out.contains("dimensions differ: [2, 2] vs [4, 0]"));
}

#[test]
fn separation_certificate_round_trip() {
    let f = files();
    let cert = f.dir.path().join("sep.json");
    let report = f.dir.path().join("report.json");
    let o = gradalg(&[
        "separate",
        "-a",
        s(&f.twisted),
        "-b",
        s(&f.fine),
        "-o",
        s(&cert),
        "--json",
        s(&report),
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("identity of A"));
    assert!(out.contains("x_{0,b} x_{1,a} + x_{1,a} x_{0,b}"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["separated"], serde_json::json!(true));
    let o = gradalg(&["verify", "-c", s(&cert)]);
    assert!(o.status.success(), "{}", stdout(&o));

    let o = gradalg(&["separate", "-a", s(&f.eg), "-b", s(&f.ge)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn identity_check_and_budget() {
    let f = files();
    let poly = f.dir.path().join("bin.json");
    let o = gradalg(&[
        "gen",
        "binomial",
        "-p",
        s(&f.twisted),
        "-d",
        "b,a",
        "--pi",
        "1,0",
        "-o",
        s(&poly),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("lambda = -1"));
    let o = gradalg(&["identity-check", "-p", s(&f.twisted), "-f", s(&poly)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("IDENTITY"));
    let o = gradalg(&["identity-check", "-p", s(&f.fine), "-f", s(&poly)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("NONIDENTITY"));

    let m2 = write(
        &f.dir,
        "m2.json",
        r#"{"group": "C1", "H": [0], "tuple": [0, 0]}"#,
    );
    let regev = f.dir.path().join("regev.json");
    assert!(
        gradalg(&["gen", "regev", "-g", "C1", "-r", "2", "-o", s(&regev)])
            .status
            .success()
    );
    let o = gradalg(&[
        "identity-check",
        "-p",
        s(&m2),
        "-f",
        s(&regev),
        "--budget",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("INCONCLUSIVE"));
}

#[test]
fn input_errors() {
    let f = files();
    let bad = write(
        &f.dir,
        "bad.json",
        "{\"group\": \"C2\",\n \"H\": [0, 1],\n \"tuple\": [0,, 1]}",
    );
    let o = gradalg(&["dims", "-p", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.json:3:"), "{err}");

    let not_sub = write(
        &f.dir,
        "ns.json",
        r#"{"group": "S3", "H": [0, 1, 2], "tuple": [0]}"#,
    );
    let o = gradalg(&["validate", "-p", s(&not_sub)]);
    assert_eq!(o.status.code(), Some(1));

    let o = gradalg(&["validate", "-p", s(&f.twisted)]);
    assert!(o.status.success());
}

#[test]
fn probes_and_blocks() {
    let f = files();
    let o = gradalg(&["gen", "probe", "-p", s(&f.eg), "-n", "e"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("nonzero at:"));
    let o = gradalg(&["gen", "global-probe", "-p", s(&f.twisted), "--with-regev"]);
    assert!(o.status.success());
    let o = gradalg(&["blocks", "-p", s(&f.eg), "-n", "e"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches("block ").count(), 2);
    let o = gradalg(&["invariants", "-p", s(&f.twisted)]);
    assert!(o.status.success());
}

#[test]
fn catalog_matrix() {
    let o = gradalg(&["--catalog"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("PASS"));
    assert!(out.lines().skip(1).all(|l| !l.contains('!')));
}
