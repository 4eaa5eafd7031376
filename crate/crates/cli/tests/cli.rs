use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn rydsim(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rydsim"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("RYDSIM_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn csv_names(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    names
}

const SMALL_GAS: &str = r#"{
    "experiment": "fig4",
    "gas_preset": "desk",
    "trajectories": 8,
    "instances": 2,
    "t_end": 5.0,
    "samples": 26
}"#;

#[test]
fn repeated_runs_are_identical_across_thread_counts() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("gas.json");
    fs::write(&cfg, SMALL_GAS).unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let cfg = cfg.to_str().unwrap();
    let ra = rydsim(&["run", cfg, "--out", a.to_str().unwrap()], Some("1"));
    let rb = rydsim(&["run", cfg, "--out", b.to_str().unwrap()], Some("3"));
    assert!(
        ra.status.success(),
        "{}",
        String::from_utf8_lossy(&ra.stderr)
    );
    assert!(rb.status.success());
    let names = csv_names(&a);
    assert_eq!(names, vec!["geometry.csv", "off.csv", "on.csv"]);
    for name in &names {
        assert_eq!(read(&a, name), read(&b, name), "{name}");
    }
    assert_eq!(read(&a, "summary.json"), read(&b, "summary.json"));
}

#[test]
fn csv_files_carry_the_provenance_header() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("b");
    let r = rydsim(&["run", "appB", "--out", out.to_str().unwrap()], None);
    assert!(r.status.success());
    let summary: serde_json::Value = serde_json::from_str(&read(&out, "summary.json")).unwrap();
    let hash = summary["config_hash"].as_str().unwrap();
    let body = read(&out, "noise0_quantum.csv");
    let mut lines = body.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# rydsim "));
    assert!(header.contains(&format!("config={hash}")));
    assert!(header.contains("seed=20240601"));
    assert_eq!(lines.next(), Some("t,site_0,site_1,site_2,N_o"));
    assert_eq!(summary["conservation_ok"], serde_json::Value::Bool(true));
}

#[test]
fn replaying_a_summary_reproduces_the_run() {
    let tmp = TempDir::new().unwrap();
    let first = tmp.path().join("first");
    let second = tmp.path().join("second");
    let r = rydsim(&["run", "fig7-and", "--out", first.to_str().unwrap()], None);
    assert!(r.status.success());
    let summary = first.join("summary.json");
    let r = rydsim(
        &[
            "run",
            summary.to_str().unwrap(),
            "--out",
            second.to_str().unwrap(),
        ],
        None,
    );
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    for name in csv_names(&first) {
        assert_eq!(read(&first, &name), read(&second, &name), "{name}");
    }
    let a: serde_json::Value = serde_json::from_str(&read(&first, "summary.json")).unwrap();
    let b: serde_json::Value = serde_json::from_str(&read(&second, "summary.json")).unwrap();
    assert_eq!(a["config_hash"], b["config_hash"]);
}

#[test]
fn scan_writes_only_the_table() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("scan.json");
    fs::write(
        &cfg,
        r#"{"experiment": "fig3", "scan": {"start": 0.5, "stop": 1.5, "points": 3}}"#,
    )
    .unwrap();
    let out = tmp.path().join("s");
    let r = rydsim(
        &[
            "scan",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(csv_names(&out), vec!["scan.csv"]);
    let table = read(&out, "scan.csv");
    // Provenance line, header, three points.
    assert_eq!(table.lines().count(), 5);
}

#[test]
fn usage_errors_exit_with_two() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("x");
    let out = out.to_str().unwrap();
    let empty = tmp.path().join("empty.json");
    fs::write(&empty, r#"{"experiment": "fig3", "scan": []}"#).unwrap();
    let unknown = tmp.path().join("unknown.json");
    fs::write(&unknown, r#"{"experiment": "appB", "colour": 1}"#).unwrap();
    for args in [
        vec!["run", "fig9", "--out", out],
        vec!["run", empty.to_str().unwrap(), "--out", out],
        vec!["run", unknown.to_str().unwrap(), "--out", out],
        vec!["scan", "appB", "--out", out],
        vec!["run", "fig4", "--engine", "quantum", "--out", out],
    ] {
        let r = rydsim(&args, None);
        assert_eq!(
            r.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&r.stderr)
        );
    }
}

#[test]
fn validate_passes_and_flags_a_coarse_step() {
    let ok = rydsim(&["validate"], None);
    let text = String::from_utf8_lossy(&ok.stdout);
    assert!(ok.status.success(), "{text}");
    assert!(text.contains("EXPECTED-DIVERGENT"));
    assert!(!text.contains("FAIL "));

    let coarse = rydsim(&["validate", "--dt", "0.5"], None);
    assert_eq!(coarse.status.code(), Some(1));
    let text = String::from_utf8_lossy(&coarse.stdout);
    let rabi = text
        .lines()
        .find(|l| l.contains("rabi oscillation"))
        .unwrap();
    assert!(rabi.starts_with("FAIL"));
    assert!(rabi.contains("step 0.5 is too coarse"));
}
