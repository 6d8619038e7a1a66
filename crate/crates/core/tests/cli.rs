use std::path::PathBuf;
use std::process::{Command, Output};

fn nilpow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilpow"))
        .args(args)
        .env_remove("NILPOW_CACHE")
        .output()
        .expect("binary runs")
}

fn suite(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("suites")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(nilpow(&["--help"]).status.code(), Some(0));
    assert_eq!(nilpow(&["--version"]).status.code(), Some(0));
    assert_eq!(nilpow(&["certify"]).status.code(), Some(1));
    assert_eq!(nilpow(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn characteristic_two_is_rejected() {
    let o = nilpow(&["dims", "--nil", "2,2", "--max-degree", "4", "--field", "fp:2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("characteristic 2"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn dead_generator_warns_and_is_excluded() {
    let o = nilpow(&["dims", "--generators", "3", "--nil", "2,1,2", "--max-degree", "4", "--levels", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("nil exponent 1"), "{}", stderr(&o));
    let reference = nilpow(&["dims", "--nil", "2,2", "--max-degree", "4", "--levels", "0"]);
    assert_eq!(stdout(&o), stdout(&reference));
}

#[test]
fn certify_exit_codes() {
    let o = nilpow(&["certify", "--spec", &suite("m2_nil22.toml"), "--i", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let cert: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(cert["verdict"], "VERIFIED");
    assert_eq!(cert["n"], 11);
    assert_eq!(cert["bound"], 20);
    assert_eq!(cert["generators"][0]["terms"][0]["word"], "xy");

    for d in ["3", "12", "20"] {
        let o = nilpow(&["certify", "--nil", "2,2", "--max-degree", d, "--i", "1"]);
        assert_eq!(o.status.code(), Some(2), "D = {d}");
        let cert: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(cert["verdict"], "INCONCLUSIVE");
    }
    let o = nilpow(&["certify", "--nil", "2,2", "--max-degree", "6", "--i", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn runs_are_byte_identical() {
    let runs = [
        vec!["certify", "--nil", "2,2", "--max-degree", "24", "--i", "1", "--seed", "5"],
        vec!["check", "all", "--nil", "2,3", "--max-degree", "8", "--trials", "20", "--ideals", "3", "--seed", "9"],
        vec!["check", "identities", "--nil", "2,2", "--field", "q", "--max-degree", "6", "--trials", "10"],
        vec!["dims", "--nil", "3,3", "--max-degree", "9", "--levels", "3", "--format", "json"],
        vec!["nilpotency", "--nil", "2,2,2", "--max-degree", "8", "--k", "2"],
    ];
    for args in runs {
        let a = nilpow(&args);
        let b = nilpow(&args);
        assert!(a.status.code() == Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn timings_only_on_request() {
    let base = ["certify", "--nil", "2,2", "--max-degree", "22", "--i", "1"];
    let plain: serde_json::Value = serde_json::from_slice(&nilpow(&base).stdout).unwrap();
    assert_eq!(plain["timings_ms"], serde_json::json!({}));
    let mut args = base.to_vec();
    args.push("--timings");
    let timed: serde_json::Value = serde_json::from_slice(&nilpow(&args).stdout).unwrap();
    assert!(!timed["timings_ms"].as_object().unwrap().is_empty());
}

#[test]
fn output_file_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = dir.path().join("cert.json");
    let args = [
        "certify",
        "--nil",
        "2,2",
        "--max-degree",
        "24",
        "--i",
        "1",
        "--cache",
        cache.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    let first = nilpow(&args);
    assert_eq!(first.status.code(), Some(0));
    assert!(first.stdout.is_empty());
    let written = std::fs::read(&out).unwrap();
    let entries = std::fs::read_dir(&cache)
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json"))
        .count();
    assert!(entries >= 2);

    let second = Command::new(env!("CARGO_BIN_EXE_nilpow"))
        .args(&args[..7])
        .arg("-v")
        .env("NILPOW_CACHE", &cache)
        .output()
        .unwrap();
    assert_eq!(second.status.code(), Some(0));
    assert!(stderr(&second).contains("cache hit"));
    assert_eq!(second.stdout, written);
}

#[test]
fn check_reports() {
    let o = nilpow(&["check", "all", "--spec", &suite("m1_nil4.toml"), "--trials", "30", "--ideals", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["passed"], true);
    let props: Vec<&str> = doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["property"].as_str().unwrap())
        .collect();
    assert!(props.iter().any(|p| p.starts_with("lemma1")));
    assert!(props.iter().any(|p| p.starts_with("f_3")));
}

#[test]
fn dims_csv_for_suite_file() {
    let o = nilpow(&["dims", "--spec", &suite("m2_nil33.toml"), "--max-degree", "6", "--levels", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("degree,dim_A,dim_A1"));
    assert_eq!(lines.next(), Some("1,2,0"));
    assert_eq!(lines.count(), 5);
}
