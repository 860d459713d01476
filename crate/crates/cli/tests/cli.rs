use std::path::Path;
use std::process::{Command, Output};

use num_bigint::BigInt;
use serde_json::Value;

fn run_with(cache: Option<&Path>, args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_psiehrhart"));
    cmd.env_remove("PSIEHRHART_CACHE");
    match cache {
        Some(p) => cmd.arg("--cache").arg(p),
        None => cmd.arg("--no-cache"),
    };
    cmd.args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn plain(args: &[&str]) -> String {
    let o = run_with(None, args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o).trim_end().to_string()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    serde_json::from_str(&plain(&full)).unwrap()
}

#[test]
fn documented_examples() {
    assert_eq!(plain(&["psi", "--g", "1", "--d", "1"]), "1/24");
    assert_eq!(
        plain(&["lpoly", "--d", "2"]),
        "36*g^2 - 36*g + 15 ; fstar=(15,72,72) ; m=0 ; C=15 ; lead=36"
    );
    assert_eq!(
        plain(&["count", "--fixture", "P1", "--g", "2"]),
        "9 (= L_(1)(2))"
    );
}

#[test]
fn one_point_values_through_the_cli() {
    let mut expected = BigInt::from(1);
    for g in 1..=20u32 {
        expected *= 24 * g;
        let d = (3 * g - 2).to_string();
        assert_eq!(
            plain(&["psi", "--g", &g.to_string(), "--d", &d]),
            format!("1/{expected}"),
            "g={g}"
        );
    }
}

#[test]
fn plain_and_json_agree() {
    assert_eq!(json(&["psi", "--g", "2", "--d", "2,3"])["value"], "29/5760");
    assert_eq!(plain(&["psi", "--g", "2", "--d", "3,2"]), "29/5760");

    let j = json(&["lpoly", "--d", "1,1"]);
    assert_eq!(
        plain(&["lpoly", "--d", "1,1"]),
        format!(
            "{} ; fstar=(18,90,72) ; m={} ; C={} ; lead=36",
            j["poly"].as_str().unwrap(),
            j["m"],
            j["C"]
        )
    );
    assert_eq!(
        j["coefficients"],
        serde_json::json!(["0/1", "-18/1", "36/1"])
    );
    assert_eq!(j["fstar"], serde_json::json!([18, 90, 72]));

    let j = json(&["fstar", "--d", "2,2"]);
    let p = plain(&["fstar", "--d", "2,2"]);
    let entries: Vec<String> = j["fstar"]
        .as_array()
        .unwrap()
        .iter()
        .map(Value::to_string)
        .collect();
    assert!(
        p.starts_with(&format!("fstar=({})", entries.join(","))),
        "{p}"
    );
    assert!(p.contains(&format!("verdict={}", j["verdict"].as_str().unwrap())));

    let j = json(&["count", "--fixture", "P2t", "--g", "2"]);
    assert_eq!(j["count"], 29);
    assert_eq!(j["matches"], true);
    assert_eq!(
        plain(&["count", "--fixture", "P2t", "--g", "2"]),
        "29 (x3 = 87 = L_(2)(2))"
    );
}

#[test]
fn geometry_commands() {
    assert_eq!(
        plain(&["interpolate", "--fixture", "P11"]),
        "36*g^2 - 18*g ; fstar=(18,90,72) ; x1 = L_(1,1)(g)"
    );
    assert_eq!(
        plain(&["verify", "--fixture", "P11t", "--gmax", "4"]),
        "fstar=(1,5,4) ; verified g=1..4 ; x18 = fstar of L_(1,1)(g) = (18,90,72)"
    );
    assert_eq!(
        plain(&["fixture", "--fixture", "P1t"]),
        "1 -\n1 <= 1\n-1 <= 1\n1 == -1\n1 == 1"
    );
    assert_eq!(
        plain(&["kappa", "--g", "1", "--kappa", "1", "--d", "1,0"]),
        "1/12"
    );
}

#[test]
fn scan_reports_and_succeeds() {
    let out = plain(&["scan", "--max-total", "3", "--max-parts", "2"]);
    assert!(out.ends_with("scan: 11 records, 0 violations"), "{out}");
    assert!(out.contains("d=(1,1) ; L=36*g^2 - 18*g ; m=0 ; fstar=(18,90,72) ; gcd=18"));
    let j = json(&["scan", "--max-total", "3", "--max-parts", "2"]);
    assert_eq!(j["records"].as_array().unwrap().len(), 11);
    assert_eq!(j["violation"], Value::Null);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["psi", "--g", "1", "--d", "a"][..],
        &["psi", "--d", "1"],
        &["count", "--fixture", "P9", "--g", "1"],
        &["count", "--fixture", "P1", "--g", "0"],
        &["kappa", "--g", "1", "--kappa", "0", "--d", "0"],
        &["frobnicate"],
    ] {
        let o = run_with(None, args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn corrupted_cache_is_an_inconsistency() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("memo.txt");
    std::fs::write(&path, "PSIEHRHART-CACHE v1\nLPOLY d=1 m=0 c=-3;7\n").unwrap();
    let o = run_with(
        Some(&path),
        &["scan", "--max-total", "1", "--max-parts", "1"],
    );
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("d=(1)"), "{err}");
}

#[test]
fn unreadable_cache_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("memo.txt");
    std::fs::write(&path, "PSIEHRHART-CACHE v0\n").unwrap();
    let o = run_with(Some(&path), &["psi", "--g", "1", "--d", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("incompatible"));
}

#[test]
fn warm_cache_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("memo.txt");
    let args = ["scan", "--max-total", "5", "--max-parts", "3"];
    let uncached = run_with(None, &args);
    let cold = run_with(Some(&path), &args);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("PSIEHRHART-CACHE v1\n"));
    assert!(text.contains("LPOLY d=2 m=0 c=15;-36;36\n"));
    let warm = run_with(Some(&path), &args);
    assert!(cold.status.success() && warm.status.success());
    assert_eq!(cold.stdout, uncached.stdout);
    assert_eq!(warm.stdout, cold.stdout);
    // nothing new to store, so the file is untouched
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn env_var_selects_cache() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("env").join("memo.txt");
    let o = Command::new(env!("CARGO_BIN_EXE_psiehrhart"))
        .env("PSIEHRHART_CACHE", &path)
        .args(["psi", "--g", "2", "--d", "4"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .contains("PSI g=2 d=4 v=1/1152\n"));
}

#[test]
fn concurrent_writers_merge() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("memo.txt");
    let children: Vec<_> = (1..=6)
        .map(|k| {
            Command::new(env!("CARGO_BIN_EXE_psiehrhart"))
                .arg("--cache")
                .arg(&path)
                .args(["lpoly", "--d", &k.to_string()])
                .stdout(std::process::Stdio::null())
                .spawn()
                .unwrap()
        })
        .collect();
    for mut c in children {
        assert!(c.wait().unwrap().success());
    }
    let text = std::fs::read_to_string(&path).unwrap();
    for k in 1..=6 {
        assert!(
            text.contains(&format!("LPOLY d={k} ")),
            "missing d={k}:\n{text}"
        );
    }
}
