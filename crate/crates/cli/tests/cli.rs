use std::path::PathBuf;
use std::process::{Command, Output};

fn lpdp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpdp"))
        .args(args)
        .output()
        .expect("spawn lpdp")
}

fn config(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn example_scenario_runs_every_phase() {
    let o = lpdp(&["run", "--config", &config("example.json")]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let log = stdout(&o);
    for prefix in [
        "issue: OK",
        "upload: accepted 16",
        "access: OK",
        "trace: OK",
        "update: OK",
    ] {
        assert!(log.contains(prefix), "missing {prefix:?} in\n{log}");
    }
}

#[test]
fn uncovered_policy_is_denied_with_success_status() {
    let o = lpdp(&["run", "--config", &config("denied.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("access: access denied"));
}

#[test]
fn malformed_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"n_wi": 2, "policy": "1"}"#).unwrap();
    assert_eq!(
        lpdp(&["run", "--config", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lpdp(&["run", "--config", "/nonexistent/cfg.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(lpdp(&["run"]).status.code(), Some(2));
    assert_eq!(lpdp(&["bench-batch", "--reps", "2"]).status.code(), Some(2));
    assert_eq!(
        lpdp(&["bench-warrant", "--n-wi", "2", "--n-u", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bench_batch_csv() {
    let o = lpdp(&["bench-batch", "--max-batch", "4", "--reps", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("phase,param_name,param_value,wall_time_ns,group_mults,bytes,reps")
    );
    let mults: Vec<(String, u64, u64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].to_string(),
                f[2].parse().unwrap(),
                f[4].parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(mults.len(), 6);
    for (phase, b, m) in mults {
        let expected = if phase == "batch_verify" {
            b + 1
        } else {
            2 * b
        };
        assert_eq!(m, expected, "{phase} at B={b}");
    }
}

#[test]
fn bench_warrant_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let o = lpdp(&[
        "bench-warrant",
        "--n-wi",
        "3",
        "--n-u",
        "1,3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(out).unwrap();
    let phases: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(phases, ["issue", "update", "update"]);
}

#[test]
fn selftest_passes() {
    let o = lpdp(&["selftest", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
