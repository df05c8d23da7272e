use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn heislab(out: &Path, args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_heislab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
        .status
        .code()
        .expect("exit code")
}

fn config(dir: &Path, body: &str) -> String {
    let p = dir.join("config.json");
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn manifest(out: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn verify_passes_and_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    assert_eq!(heislab(&out, &["verify", "--seed", "5"]), 0);
    let m = manifest(&out);
    assert_eq!(m["command"], "verify");
    assert_eq!(m["exit_code"], 0);
    assert_eq!(m["config_sha256"].as_str().unwrap().len(), 64);
    let suite: Value =
        serde_json::from_str(&fs::read_to_string(out.join("suite.json")).unwrap()).unwrap();
    assert_eq!(suite["seed"], 5);
    assert_eq!(suite["passed"], true);
}

#[test]
fn every_subcommand_runs_with_defaults() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, file) in [
        ("admissible", "admissibility.json"),
        ("convolve", "submult.json"),
        ("weyl-compose", "compose.csv"),
        ("invert", "theta.csv"),
        ("decay", "decay.csv"),
        ("grs", "grs.csv"),
        ("channel-sweep", "sweep.csv"),
    ] {
        let out = dir.path().join(cmd);
        assert_eq!(heislab(&out, &[cmd]), 0, "{cmd}");
        assert!(out.join(file).exists(), "{cmd} wrote no {file}");
        let m = manifest(&out);
        assert!(
            m["outputs"].as_array().unwrap().iter().any(|o| o == file),
            "{cmd}"
        );
    }
}

#[test]
fn singular_convolver_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        r#"{"command": "invert", "alpha": [0.0, 0.0], "f": {"source": "zero"}}"#,
    );
    let out = dir.path().join("run");
    assert_eq!(heislab(&out, &["invert", "--config", &cfg]), 3);
    assert_eq!(manifest(&out)["exit_code"], 3);
}

#[test]
fn divergent_neumann_series_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        r#"{"kind": "plain", "moduli": [16], "alpha": [1.0, 0.0], "f": {"source": "shift", "c": 3.0}, "neumann": {"tol": 1e-12, "max_iter": 500}}"#,
    );
    assert_eq!(
        heislab(&dir.path().join("run"), &["invert", "--config", &cfg]),
        1
    );
}

#[test]
fn bad_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = config(dir.path(), r#"{"moduli": [8], "bogus": 1}"#);
    assert_eq!(
        heislab(
            &dir.path().join("a"),
            &["weyl-compose", "--config", &unknown]
        ),
        2
    );
    let wrong = config(dir.path(), r#"{"command": "grs"}"#);
    assert_eq!(
        heislab(&dir.path().join("b"), &["decay", "--config", &wrong]),
        2
    );
    let missing = dir.path().join("nope.json");
    assert_eq!(
        heislab(
            &dir.path().join("c"),
            &["grs", "--config", missing.to_str().unwrap()]
        ),
        2
    );
    let zero = config(dir.path(), r#"{"moduli": [0]}"#);
    assert_eq!(
        heislab(&dir.path().join("d"), &["admissible", "--config", &zero]),
        2
    );
}

#[test]
fn seed_override_changes_config_hash() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (
        dir.path().join("a"),
        dir.path().join("b"),
        dir.path().join("c"),
    );
    assert_eq!(heislab(&a, &["weyl-compose", "--seed", "1"]), 0);
    assert_eq!(heislab(&b, &["weyl-compose", "--seed", "1"]), 0);
    assert_eq!(heislab(&c, &["weyl-compose", "--seed", "2"]), 0);
    assert_eq!(manifest(&a)["config_sha256"], manifest(&b)["config_sha256"]);
    assert_ne!(manifest(&a)["config_sha256"], manifest(&c)["config_sha256"]);
    assert_eq!(
        fs::read(a.join("compose.csv")).unwrap(),
        fs::read(b.join("compose.csv")).unwrap()
    );
}

#[test]
fn decay_fixture_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/fixtures/decay_regression.json"
    );
    let cfg = config(dir.path(), &format!(r#"{{"fixture": "{fixture}"}}"#));
    assert_eq!(
        heislab(&dir.path().join("ok"), &["decay", "--config", &cfg]),
        0
    );
    let mut bad: Value = serde_json::from_str(&fs::read_to_string(fixture).unwrap()).unwrap();
    bad["rows"][0]["g_norm"] = Value::from(1.0);
    let bad_path = dir.path().join("bad.json");
    fs::write(&bad_path, bad.to_string()).unwrap();
    let cfg = config(
        dir.path(),
        &format!(r#"{{"fixture": "{}"}}"#, bad_path.display()),
    );
    assert_eq!(
        heislab(&dir.path().join("bad"), &["decay", "--config", &cfg]),
        1
    );
}
