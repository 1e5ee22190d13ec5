use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/scenarios")
}

fn qcausal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcausal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_file(name: &str, extra: &[&str]) -> Output {
    let path = scenarios().join(name);
    let mut args = vec!["run", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    qcausal(&args)
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

const KINDS: &[&str] = &["bell", "chsh", "lhv", "epr", "eraser", "cone", "topology", "order"];

#[test]
fn passing_scenarios_exit_zero() {
    for kind in KINDS {
        let out = run_file(&format!("{kind}_pass.scn"), &[]);
        assert_eq!(out.status.code(), Some(0), "{kind}: {}", String::from_utf8_lossy(&out.stderr));
        let r = report(&out);
        assert_eq!(r["scenarioKind"], *kind);
        assert!(r["verdicts"].as_object().unwrap().values().all(|v| v == "pass"));
    }
}

#[test]
fn failing_scenarios_exit_two() {
    for kind in KINDS {
        let out = run_file(&format!("{kind}_fail.scn"), &[]);
        assert_eq!(out.status.code(), Some(2), "{kind}");
        let r = report(&out);
        assert!(r["verdicts"].as_object().unwrap().values().any(|v| v == "fail"), "{kind}");
    }
}

#[test]
fn other_shipped_scenarios_pass() {
    for name in ["ghz.scn", "order_custom.scn", "topology_file.scn"] {
        let out = run_file(name, &[]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("kind.scn", "kind = nope\n", "unknown scenario kind"),
        ("key.scn", "kind = bell\naxis = z\nbogus = 1\n", "unknown key"),
        ("missing.scn", "kind = epr\naxisA = z\n", "axisB"),
        ("value.scn", "kind = bell\naxis = sideways\n", "axis"),
    ];
    for (file, text, needle) in cases {
        let path = dir.path().join(file);
        std::fs::write(&path, text).unwrap();
        let out = qcausal(&["run", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{file}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{file}: {err}");
    }
    let out = qcausal(&["run", dir.path().join("absent.scn").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for name in ["epr_pass.scn", "cone_pass.scn", "order_pass.scn", "eraser_pass.scn", "topology_pass.scn"] {
        let ra = run_file(name, &["--out", a.path().to_str().unwrap(), "--seed", "7"]);
        let rb = run_file(name, &["--out", b.path().to_str().unwrap(), "--seed", "7"]);
        assert_eq!(ra.stdout, rb.stdout, "{name}");
    }
    let mut files: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    files.sort();
    assert!(!files.is_empty());
    for f in files {
        let x = std::fs::read(a.path().join(&f)).unwrap();
        let y = std::fs::read(b.path().join(&f)).unwrap();
        assert_eq!(x, y, "{f:?}");
    }
}

#[test]
fn artifacts_carry_expected_headers() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run_file("cone_pass.scn", &["--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let artifacts: Vec<String> = r["artifacts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let first_line = |suffix: &str| {
        let name = artifacts.iter().find(|a| a.ends_with(suffix)).expect(suffix);
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        text.lines().next().unwrap().to_string()
    };
    assert_eq!(first_line(".cone.csv"), "dt,extent");
    assert_eq!(first_line(".commutator.csv"), "dx,dt,D");
    assert!(artifacts.iter().any(|a| a.ends_with(".report.json")));

    let out = run_file("eraser_pass.scn", &["--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("eraser_pass.eraser.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("phi,probability"));
}

#[test]
fn seed_override_changes_sampled_metrics_only_through_the_seed() {
    let a = run_file("epr_pass.scn", &["--seed", "1"]);
    let b = run_file("epr_pass.scn", &["--seed", "1"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["inputsEcho"]["seed"], "1");
}

#[test]
fn eps_override_reaches_cone_scenarios() {
    let out = run_file("cone_pass.scn", &["--eps", "1e-2"]);
    let r = report(&out);
    assert_eq!(r["inputsEcho"]["eps"], "1e-2");
}

#[test]
fn regen_fixtures_marks_output_unverified() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("golden.json");
    let out = qcausal(&["regen-fixtures", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["status"], "UNVERIFIED");
    assert_eq!(v["orientations"]["admissible"], 3);
}

#[test]
fn check_reports_every_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let out = qcausal(&["check", "--out", dir.path().to_str().unwrap()]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = stdout
        .lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .collect();
    assert_eq!(lines.len(), 12, "{stdout}");
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("acceptance.json")).unwrap()).unwrap();
    let all = json["passed"].as_bool().unwrap();
    assert_eq!(out.status.code(), Some(if all { 0 } else { 2 }));
    assert_eq!(json["criteria"].as_array().unwrap().len(), 12);
}
