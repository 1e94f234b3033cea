use std::fs;
use std::process::{Command, Output};

use hermcap::harness::parse_histogram_csv;
use hermcap::{CapFile, SurfaceModel};

fn hermcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermcap"))
        .args(args)
        .env_remove("HERMCAP_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn surface_info_prints_counts() {
    let out = hermcap(&["surface-info", "--q", "3"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        "points=280 gx=37 generators=112 per_point=4 ovoid=28"
    );
}

#[test]
fn unsupported_q_exits_with_usage_code() {
    assert_eq!(
        hermcap(&["surface-info", "--q", "6"]).status.code(),
        Some(2)
    );
    assert_eq!(hermcap(&["surface-info"]).status.code(), Some(2));
}

#[test]
fn verify_names_the_broken_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let m = SurfaceModel::for_q(2).unwrap();
    let path = dir.path().join("bad.json");
    let line = &m.generators()[0].points;
    CapFile::from_points(&m, line).write(&path).unwrap();

    let out = hermcap(&["verify", "--q", "2", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("capfile.is_cap"));

    let ok = hermcap(&["verify", "--q", "2", "--deep"]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("ok oracle.pair_relevance"));
}

#[test]
fn ovoid_thin_complete_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let ovoid = dir.path().join("ovoid.json");
    let kept = dir.path().join("kept.json");
    let removed = dir.path().join("removed.json");
    let done = dir.path().join("done.json");
    let p = |x: &std::path::Path| x.to_str().unwrap().to_string();

    assert!(hermcap(&["ovoid", "--q", "3", "--output", &p(&ovoid)])
        .status
        .success());
    let out = hermcap(&[
        "thin",
        "--q",
        "3",
        "--input",
        &p(&ovoid),
        "--seed",
        "4",
        "--output",
        &p(&kept),
        "--removed",
        &p(&removed),
    ]);
    assert!(out.status.success());
    assert_eq!(CapFile::read(&removed).unwrap().points.len(), 6);

    let out = hermcap(&[
        "complete",
        "--q",
        "3",
        "--strategy",
        "min-relevance",
        "--input",
        &p(&kept),
        "--output",
        &p(&done),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "size=28 is_ovoid=true");
    assert_eq!(fs::read(&done).unwrap(), fs::read(&ovoid).unwrap());
}

#[test]
fn spectrum_outputs_are_stable_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let mut logs = Vec::new();
    let mut hists = Vec::new();
    for jobs in ["1", "3"] {
        let log = dir.path().join(format!("log{jobs}.jsonl"));
        let out = hermcap(&[
            "spectrum",
            "--q",
            "3",
            "--strategy",
            "random",
            "--runs",
            "50",
            "--seed-size",
            "10",
            "--master",
            "9",
            "--jobs",
            jobs,
            "--log",
            log.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        hists.push(out.stdout);
        logs.push(fs::read(&log).unwrap());
    }
    assert_eq!(logs[0], logs[1]);
    assert_eq!(hists[0], hists[1]);
    let rows = parse_histogram_csv(&hists[0]).unwrap();
    assert_eq!(rows.iter().map(|r| r.count).sum::<u64>(), 50);
    assert!(!String::from_utf8_lossy(&logs[0]).contains("wall_time_ms"));
}

#[test]
fn spectrum_json_and_bad_format() {
    let out = hermcap(&[
        "spectrum",
        "--q",
        "2",
        "--strategy",
        "forward",
        "--runs",
        "5",
        "--empty",
        "--master",
        "1",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["total_runs"], 5);

    let bad = hermcap(&[
        "spectrum",
        "--q",
        "2",
        "--strategy",
        "random",
        "--runs",
        "5",
        "--empty",
        "--master",
        "1",
        "--format",
        "xml",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    let oversized = hermcap(&[
        "spectrum",
        "--q",
        "2",
        "--strategy",
        "random",
        "--runs",
        "5",
        "--seed-size",
        "10",
        "--master",
        "1",
    ]);
    assert_eq!(oversized.status.code(), Some(2));
}
