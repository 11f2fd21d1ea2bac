use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn swipt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swipt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("swipt-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn sweep_writes_csv_to_stdout() {
    let out = swipt(&[
        "sweep", "--scheme", "maxmin,greedy", "--pairs", "3", "--sched", "1", "--rate", "2",
        "--snr-db", "10:20:5", "--trials", "2e3", "--seed", "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("scheme,M,m,R_bpcu,eta,snr_db"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(swipt(&["sweep", "--scheme", "nope"]).status.code(), Some(2));
    assert_eq!(swipt(&["sweep", "--pairs", "2", "--sched", "3", "--scheme", "greedy"]).status.code(), Some(2));
    assert_eq!(swipt(&["sweep", "--scheme", "maxmin", "--sched", "2"]).status.code(), Some(2));
    assert_eq!(swipt(&["figure", "9"]).status.code(), Some(2));
    assert_eq!(swipt(&["bogus"]).status.code(), Some(2));
}

#[test]
fn enumeration_budget_exits_3() {
    let out = swipt(&[
        "sweep", "--scheme", "exhaustive", "--pairs", "30", "--sched", "15", "--snr-db", "60",
        "--trials", "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn figure_writes_csv_and_script() {
    let dir = scratch("figure");
    let csv = dir.join("fig3.csv");
    let out = swipt(&[
        "figure", "3", "--snr-db", "20:30:5", "--trials", "1e3", "--out", csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 1 + 4 * 3);
    let script = fs::read_to_string(csv.with_extension("gp")).unwrap();
    assert!(script.contains("set logscale y"));
    assert!(script.contains("fig3.csv"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn slope_reports_a_number() {
    let out = swipt(&["slope", "--scheme", "maxmin", "--pairs", "3", "--rate", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1.9") || text.contains("2.0"), "{text}");
}

#[test]
fn too_narrow_fit_window_exits_1() {
    let out = swipt(&["slope", "--scheme", "maxmin", "--window", "1e-3:1.1e-3"]);
    assert_eq!(out.status.code(), Some(1));
}
