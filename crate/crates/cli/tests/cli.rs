//! End-to-end runs of the `bouc` binary on inputs that need no Co3 work.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bouc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bouc"))
        .args(args)
        .current_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../.."))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn selftest_passes() {
    let o = bouc(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 fail"));
}

#[test]
fn small_groups_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = bouc(&["small-groups", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    let entries = json["entries"].as_array().unwrap();
    assert!(entries.iter().any(|e| e["check_id"] == "small_groups.S4.golden" && e["status"] == "pass"));
}

#[test]
fn input_errors_exit_with_2() {
    assert_eq!(bouc(&["co3", "calibrate", "--gens", "/nonexistent/gens"]).status.code(), Some(2));
    assert_eq!(bouc(&["co3", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(bouc(&["co3", "calibrate", "--max-mem", "64"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let s4 = dir.path().join("s4.gens");
    std::fs::write(&s4, "perm 4\n(1,2)\n(1,2,3,4)\n").unwrap();
    let o = bouc(&["co3", "calibrate", "--gens", s4.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("276"));
}

#[test]
fn dump_and_collapse() {
    let dir = tempfile::tempdir().unwrap();
    let o = bouc(&["dump-complex", "small", "S4", "--collection", "bouc"]);
    assert_eq!(o.status.code(), Some(0));
    let dump = dir.path().join("s4.complex");
    std::fs::write(&dump, &o.stdout).unwrap();
    let greedy = bouc(&["collapse", dump.to_str().unwrap()]);
    assert_eq!(greedy.status.code(), Some(0));
    let cert = stdout(&greedy);
    assert!(cert.contains("hash"));

    // The certificate read back as a schedule gives the same end state.
    let schedule = dir.path().join("s4.schedule");
    let steps: String = cert.lines().filter(|l| !l.starts_with("hash")).map(|l| format!("{l}\n")).collect();
    std::fs::write(&schedule, steps).unwrap();
    let replay = bouc(&["collapse", dump.to_str().unwrap(), "--schedule", schedule.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(0));
    assert_eq!(stdout(&replay), cert);

    // A circle does not collapse.
    let circle = dir.path().join("circle.complex");
    std::fs::write(&circle, "complex 3\ntype 0 v\nvertex 0 0\nvertex 1 0\nvertex 2 0\nsimplex 0 1\nsimplex 1 2\nsimplex 0 2\n").unwrap();
    assert_eq!(bouc(&["collapse", circle.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn generator_conversion_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let images = dir.path().join("co3.images");
    let cycles = dir.path().join("co3.cycles");
    let o = bouc(&["convert-gens", "data/co3.gens", "--to", "images", "--output", images.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = bouc(&["convert-gens", images.to_str().unwrap(), "--to", "cycles", "--output", cycles.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let original = bouc_core::perm::parse_generators(&std::fs::read_to_string("../../data/co3.gens").unwrap()).unwrap();
    let back = bouc_core::perm::parse_generators(&std::fs::read_to_string(cycles).unwrap()).unwrap();
    assert_eq!(original, back);
}

#[test]
fn radical_enum_lists_classes() {
    let o = bouc(&["radical-enum", "GL32"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["order"], 168);
    assert_eq!(json["classes"].as_array().unwrap().len(), 6);
    assert_eq!(bouc(&["radical-enum", "NoSuchGroup"]).status.code(), Some(2));
}
