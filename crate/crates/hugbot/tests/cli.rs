//! End-to-end checks of the `hugbot` binary: exit codes, file outputs,
//! and the replay/diff round trip through real files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn hugbot(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hugbot"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const SCENARIO: &str = "\
name = cli-test
duration = 20
seed = 5
key_press_at = 0.5
user.approach = 0:0.5
user.squeeze = 0:0
user.release_gesture = passive
";

#[test]
fn run_writes_trace_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.scn", SCENARIO);

    let out = hugbot(
        &[
            "run",
            "s.scn",
            "--trace",
            "t.trace",
            "--summary",
            "s.summary",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let summary = std::fs::read_to_string(dir.path().join("s.summary")).unwrap();
    assert!(summary.contains("release_cause = Timer"));
    assert!(summary.contains("initiated_by = key"));

    let trace = std::fs::read_to_string(dir.path().join("t.trace")).unwrap();
    assert!(trace.starts_with("# hugbot trace v1\n"));
}

#[test]
fn seed_override_changes_the_trace() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.scn", SCENARIO);
    hugbot(&["run", "s.scn", "--trace", "a.trace"], dir.path());
    hugbot(
        &["run", "s.scn", "--trace", "b.trace", "--seed", "6"],
        dir.path(),
    );

    let diff = hugbot(&["diff", "a.trace", "b.trace"], dir.path());
    assert_eq!(diff.status.code(), Some(1));
    let text = String::from_utf8_lossy(&diff.stdout);
    assert!(text.contains("first divergence"), "{text}");
}

#[test]
fn replay_round_trips_and_diffs_clean() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.scn", SCENARIO);
    hugbot(&["run", "s.scn", "--trace", "a.trace"], dir.path());

    let replay = hugbot(&["replay", "a.trace"], dir.path());
    assert!(replay.status.success());
    let original = std::fs::read(dir.path().join("a.trace")).unwrap();
    assert_eq!(
        replay.stdout, original,
        "replay must re-emit the exact bytes"
    );

    write(
        dir.path(),
        "b.trace",
        &String::from_utf8(replay.stdout).unwrap(),
    );
    let diff = hugbot(&["diff", "a.trace", "b.trace"], dir.path());
    assert!(diff.status.success());
    assert!(String::from_utf8_lossy(&diff.stdout).contains("identical"));
}

#[test]
fn grid_emits_eight_condition_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.scn", SCENARIO);
    let out = hugbot(&["grid", "s.scn", "--out", "grid"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("condition"));
    for label in ["vsr", "vsR", "vSr", "vSR", "Vsr", "VsR", "VSr", "VSR"] {
        assert!(table.contains(label), "table missing {label}");
        assert!(dir.path().join(format!("grid/{label}.trace")).exists());
        assert!(dir.path().join(format!("grid/{label}.summary")).exists());
    }
}

#[test]
fn validate_reports_config_problems() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "good.cfg", "initiate_distance = 3.0\n");
    write(dir.path(), "bad.cfg", "contact_end_delta = 60000\n");
    write(dir.path(), "typo.cfg", "initiate_distanse = 3.0\n");

    assert!(hugbot(&["validate", "good.cfg"], dir.path())
        .status
        .success());

    let bad = hugbot(&["validate", "bad.cfg"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("hysteresis"));

    let typo = hugbot(&["validate", "typo.cfg"], dir.path());
    assert_eq!(typo.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&typo.stderr).contains("initiate_distanse"));
}

#[test]
fn scenario_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.scn", "duration = -1\n");
    let out = hugbot(&["run", "bad.scn"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    let missing = hugbot(&["run", "nope.scn"], dir.path());
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn corrupt_trace_fails_replay() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.trace", "# hugbot trace v1\ngarbage line\n");
    let out = hugbot(&["replay", "bad.trace"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
