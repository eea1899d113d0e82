use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qiforge(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qiforge"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("QIFORGE_BUDGET")
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn ball_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = qiforge(dir.path(), &["ball", "BS(1,2)", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "ball.csv");
    assert_eq!(csv.lines().count(), 18);
    assert!(dir.path().join("config.json").exists());
}

#[test]
fn folner_profile_for_z2() {
    let dir = tempfile::tempdir().unwrap();
    let out = qiforge(dir.path(), &["folner", "Z^2", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = read(dir.path(), "folner.csv");
    let last = csv.lines().last().unwrap();
    assert!(last.starts_with("4,81,"), "{last}");
}

#[test]
fn rstar_for_inclusion_is_linear() {
    let dir = tempfile::tempdir().unwrap();
    let out = qiforge(dir.path(), &["rstar", "incl:2Z", "--scales", "10,20,40"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "rstar.csv");
    assert!(csv.contains("10,5,"), "{csv}");
    assert!(csv.contains("40,20,"), "{csv}");
    let json: serde_json::Value = serde_json::from_str(&read(dir.path(), "rstar.json")).unwrap();
    assert_eq!(json["verdict"], "linear");
}

#[test]
fn uf_test_detects_complement() {
    let dir = tempfile::tempdir().unwrap();
    let out = qiforge(dir.path(), &["uf-test", "complement:2Z", "--i-max", "60"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(read(dir.path(), "vanishing.csv").contains("# verdict: evidence-nonzero"));
}

#[test]
fn short_uf_run_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let out = qiforge(dir.path(), &["uf-test", "complement:2Z", "--i-max", "6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn qi_audit_reports_pass_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = qiforge(dir.path(), &["qi-audit", "floor:2:Z", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let audit: serde_json::Value = serde_json::from_str(&read(dir.path(), "audit.json")).unwrap();
    assert_eq!(audit["audit"]["pass"], true);
    assert!(read(dir.path(), "fibers.csv").lines().count() > 1);
}

#[test]
fn errors_exit_one_with_reason() {
    let dir = tempfile::tempdir().unwrap();
    let out = qiforge(dir.path(), &["ball", "Q", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error[parse]"), "{err}");

    let out = qiforge(dir.path(), &["ball", "F_2", "30", "--budget", "100"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[budget]"));

    let out = qiforge(dir.path(), &["reproduce", "no-such-thing"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"command": "ball", "group": "Z", "radius": 2, "colour": "red"}"#).unwrap();
    let out = qiforge(dir.path(), &["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));

    fs::write(&cfg, r#"{"command": "ball", "group": "Z", "radius": 2}"#).unwrap();
    let out = qiforge(dir.path(), &["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read(dir.path(), "ball.csv").lines().count(), 6);
}

#[test]
fn reproduce_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let snapshot = |dir: &Path| {
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap())
            .filter(|e| e.file_name() != "config.json")
            .map(|e| (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap()))
            .collect();
        files.sort();
        files
    };
    let first = qiforge(dir.path(), &["reproduce", "sec4-floor", "--threads", "3"]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let before = snapshot(dir.path());
    assert!(before.iter().any(|(name, _)| name == "summary.txt"));
    let second = qiforge(dir.path(), &["reproduce", "sec4-floor", "--threads", "1"]);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(snapshot(dir.path()), before);
    assert_eq!(first.stdout, second.stdout);
}
