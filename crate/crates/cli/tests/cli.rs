use std::path::Path;
use std::process::{Command, Output};

fn anticyclo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anticyclo")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn two_primes_in_n_minus_is_rejected() {
    let o = anticyclo(&["verify", "--nminus", "15"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("odd number of prime factors"));
}

#[test]
fn small_prime_is_rejected() {
    let o = anticyclo(&["verify", "--p", "2", "--weight", "4"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("must exceed k - 2"));
}

#[test]
fn split_prime_in_n_minus_is_rejected() {
    // 5 splits in Q(i)
    assert_eq!(code(&anticyclo(&["classset", "--nminus", "5"])), 2);
}

#[test]
fn missing_local_sign_is_rejected() {
    let o = anticyclo(&["eigenform", "--nplus", "5", "--p", "13"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "p = 3\nprecision = 9\n").unwrap();
    assert_eq!(code(&anticyclo(&["verify", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn default_desk_config_verifies() {
    let o = anticyclo(&["verify"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep["pass"], true);
    let suites: Vec<&str> = rep["suites"].as_array().unwrap().iter().map(|s| s["suite"].as_str().unwrap()).collect();
    assert_eq!(suites, ["mass", "hecke", "tower", "congruence", "fe", "mu", "interp"]);
    assert_eq!(rep["a_p"], "-1");
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "dk = 4\np = 3\nn_minus = 11\nk = 2\nn_max = 2\neigen = [[2, -2]]\n").unwrap();
    let a = anticyclo(&["theta", "--config", cfg.to_str().unwrap()]);
    let b = anticyclo(&["theta", "--nmax", "2"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn class_set_of_desk_algebra() {
    let o = anticyclo(&["classset", "--nminus", "11", "--level", "1"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["class_number"], 2);
    assert_eq!(v["mass"], "5/6");
    assert_eq!(v["mass"], v["mass_formula"]);
    assert_eq!(v["classes"][0]["basis"].as_array().unwrap().len(), 4);
}

#[test]
fn tower_structure() {
    let o = anticyclo(&["tower", "--dk", "4", "--p", "3", "--n", "3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let orders: Vec<u64> = v["levels"].as_array().unwrap().iter().map(|l| l["order"].as_u64().unwrap()).collect();
    assert_eq!(orders, [1, 2, 6, 18]);
}

#[test]
fn trivial_character_value() {
    let o = anticyclo(&["lvalue", "--dk", "4", "--p", "3", "--n", "1", "--char-index", "0", "--tol", "1e-6"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.370308724691).abs() < 1e-9);
}

#[test]
fn lvalue_outside_level_11_is_a_config_error() {
    let o = anticyclo(&["lvalue", "--nminus", "7", "--p", "5", "--weight", "4", "--eigen", "2:-1,3:-2", "--n", "1"]);
    assert_eq!(code(&o), 2);
}

const FILES: [&str; 7] =
    ["classes.json", "eigenform.json", "tower.json", "theta_n1_m0.json", "theta_n2_m0.json", "report.json", "brandt/T_2.json"];

#[test]
fn pipeline_is_deterministic_and_resumable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let run = |d: &Path, n: &str| {
        let o = anticyclo(&["pipeline", "--nmax", n, "--out-dir", d.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        o
    };
    run(&a, "2");
    let first: Vec<Vec<u8>> = FILES.iter().map(|f| read(&a.join(f))).collect();
    run(&a, "2");
    run(&b, "2");
    for (i, f) in FILES.iter().enumerate() {
        assert!(read(&a.join(f)) == first[i], "rerun changed {f}");
        assert!(read(&b.join(f)) == first[i], "fresh run in another directory differs on {f}");
    }
    // extending the depth keeps the lower levels
    let before = std::fs::metadata(a.join("theta_n1_m0.json")).unwrap().modified().unwrap();
    run(&a, "3");
    assert_eq!(std::fs::metadata(a.join("theta_n1_m0.json")).unwrap().modified().unwrap(), before);
    assert!(a.join("theta_n3_m0.json").exists());
    assert!(read(&a.join("tower.json")) != first[2]);
}

#[test]
fn corrupted_cache_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap().to_string();
    assert_eq!(code(&anticyclo(&["pipeline", "--nmax", "2", "--out-dir", &d])), 0);
    let f = dir.path().join("theta_n2_m0.json");
    let good = read(&f);
    let text = String::from_utf8(good.clone()).unwrap();
    // flip one digit of the first coefficient
    let i = text.find("\"value\": \"").unwrap() + 10;
    let mut bytes = text.into_bytes();
    bytes[i] = if bytes[i] == b'1' { b'2' } else { b'1' };
    std::fs::write(&f, &bytes).unwrap();
    let o = anticyclo(&["pipeline", "--nmax", "2", "--out-dir", &d]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("hash mismatch"));
    assert_eq!(read(&f), good);
}
