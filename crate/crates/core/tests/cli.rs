//! The binary, run as a process.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use activity_sod::testkit::fixtures::{self, FIG1_SESSIONS_TEXT, FIG1_TEXT};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_activity-sod"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct Workspace {
    _dir: tempfile::TempDir,
    fig1: String,
    sessions: String,
}

fn workspace() -> Workspace {
    let dir = tempfile::tempdir().unwrap();
    let fig1 = write(dir.path(), "fig1.sod", FIG1_TEXT);
    let sessions = write(dir.path(), "sessions.sod", &fixtures::fig1_with(FIG1_SESSIONS_TEXT));
    Workspace {
        fig1: fig1.to_str().unwrap().to_string(),
        sessions: sessions.to_str().unwrap().to_string(),
        _dir: dir,
    }
}

#[test]
fn validate_accepts_the_example() {
    let ws = workspace();
    let o = run(&["validate", &ws.fig1]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("valid: 0 users, 9 roles, 9 permissions"));
}

#[test]
fn validate_rejects_an_unsatisfiable_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.sod", &format!("{FIG1_TEXT}sod 1 a2,a4\n"));
    let o = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bad.sod:"), "{err}");
    assert!(err.lines().any(|l| l.split(':').nth(1).is_some_and(|n| n.parse::<usize>().is_ok())), "{err}");
}

#[test]
fn validate_reports_syntax_errors_with_positions() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.sod", "role r1\nrole\nfrobnicate x\n");
    let o = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bad.sod:2:"), "{err}");
    assert!(err.contains("bad.sod:3:"), "{err}");
}

#[test]
fn missing_file_is_an_input_error() {
    let o = run(&["analyze", "/nonexistent/model.sod"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn analyze_finds_the_pair_with_the_fully_senior_role() {
    let ws = workspace();
    let o = run(&["analyze", &ws.fig1]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("illegal roles: 0"), "{text}");
    assert!(text.contains("conflicting role pairs: 1"), "{text}");
    assert!(text.contains("  r5 r9  constraint 1 activities a10,a2,a4"), "{text}");
}

#[test]
fn analyze_without_constraints_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let text: String = FIG1_TEXT.lines().filter(|l| !l.starts_with("sod")).map(|l| format!("{l}\n")).collect();
    let path = write(dir.path(), "free.sod", &text);
    let o = run(&["analyze", path.to_str().unwrap(), "--pairs", "both", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "kind,entity_a,entity_b,constraint,activities,domains\n");
}

#[test]
fn analyze_csv_and_out_file() {
    let ws = workspace();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let o = run(&[
        "analyze",
        &ws.fig1,
        "--domains",
        "--format",
        "csv",
        "--check-set",
        "roles:r2,r5,r8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    let csv = fs::read_to_string(out).unwrap();
    assert!(csv.lines().any(|l| l == r#"role_set,"r2,r5,r8",,1,"a10,a2,a4",d1"#), "{csv}");
}

#[test]
fn analyze_rejects_unknown_set_members() {
    let ws = workspace();
    let o = run(&["analyze", &ws.fig1, "--check-set", "roles:r2,zz"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("gen.sod");
    let g = run(&[
        "gen", "--seed", "5", "--users", "300", "--roles", "150", "--perms", "120", "--activities", "30",
        "--groupings", "150", "--domains", "4", "--constraints", "12", "--plant-conflicts", "4",
        "--out", model.to_str().unwrap(),
    ]);
    assert_eq!(g.status.code(), Some(0), "{}", stderr(&g));
    let model = model.to_str().unwrap();
    let one = run(&["analyze", model, "--pairs", "both", "--threads", "1"]);
    let four = run(&["analyze", model, "--pairs", "both", "--threads", "4"]);
    assert_eq!(one.status.code(), Some(1));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn check_session_exit_codes() {
    let ws = workspace();
    let s1 = run(&["check-session", &ws.sessions, "s1"]);
    assert_eq!(s1.status.code(), Some(0));
    assert_eq!(stdout(&s1), "session s1: clear\n");
    let s2 = run(&["check-session", &ws.sessions, "s2"]);
    assert_eq!(s2.status.code(), Some(1));
    assert!(stdout(&s2).starts_with("session s2: conflicting\n  constraint 1 groupings "));
    let missing = run(&["check-session", &ws.sessions, "s9"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn whatif_reports_the_new_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "u.sod", &fixtures::fig1_with("user u1\nua u1 r2\nua u1 r8"));
    let path = path.to_str().unwrap();
    let o = run(&["whatif", path, "--assign", "u1:r5"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("before: clear\nafter: conflicting\n"), "{text}");
    assert!(text.contains("introduced: 1\n"), "{text}");

    let o = run(&["whatif", path, "--assign", "u1:r3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("introduced: 0\n"));

    assert_eq!(run(&["whatif", path, "--assign", "u1:nope"]).status.code(), Some(2));
    assert_eq!(run(&["whatif", path, "--assign", "u1-r5"]).status.code(), Some(2));
    assert_eq!(run(&["whatif", path]).status.code(), Some(2));
}

#[test]
fn whatif_activation_requires_authorization() {
    let ws = workspace();
    let o = run(&["whatif", &ws.sessions, "--activate", "s1:r1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["whatif", &ws.sessions, "--activate", "s1:r5"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn gen_is_deterministic_and_loadable() {
    let args = [
        "gen", "--seed", "11", "--users", "40", "--roles", "20", "--perms", "30", "--activities", "12",
        "--groupings", "20", "--domains", "2", "--constraints", "4", "--sessions", "3", "--out", "-",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "g.sod", &stdout(&a));
    assert_eq!(run(&["validate", path.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn gen_rejects_inconsistent_parameters() {
    let o = run(&[
        "gen", "--seed", "1", "--users", "5", "--roles", "0", "--perms", "3", "--activities", "2",
        "--groupings", "2", "--domains", "1", "--constraints", "1", "--out", "-",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: "));
}

#[test]
fn help_exits_cleanly() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    for sub in ["validate", "analyze", "check-session", "whatif", "gen"] {
        assert!(stdout(&o).contains(sub));
    }
}
