//! End-to-end tests of the `rkky` binary: exit codes, file formats,
//! idempotent reruns and thread-count independence.

use std::path::Path;
use std::process::Command;

fn rkky() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rkky"))
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

#[test]
fn spectrum_writes_harmonic_ladder() {
    let dir = tempfile::tempdir().unwrap();
    let status = rkky()
        .args(["spectrum", "--out"])
        .arg(dir.path())
        .args(["--set", "n_fermions=5", "--set", "points_per_wave=40"])
        .status()
        .unwrap();
    assert!(status.success());
    let text = read(&dir.path().join("energies.csv"));
    assert!(text.starts_with("# rkky v"));
    let energies: Vec<f64> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(energies.len() >= 5);
    for (n, &e) in energies.iter().take(5).enumerate() {
        assert!(
            (e - (n as f64 + 0.5)).abs() < 1e-3,
            "state {n}: {e}"
        );
    }
}

#[test]
fn missing_required_key_exits_2_with_json_naming_it() {
    let dir = tempfile::tempdir().unwrap();
    let output = rkky()
        .args(["spectrum", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    let parsed: serde_json::Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(parsed["error"]["kind"], "config");
    assert!(
        parsed["error"]["message"]
            .as_str()
            .unwrap()
            .contains("n_fermions"),
        "{stderr}"
    );
}

#[test]
fn config_file_with_cli_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n_fermions = 4\nvp_ratio = 3.0\n").unwrap();
    let out = dir.path().join("out");
    let status = rkky()
        .arg("spectrum")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(["--set", "vp_ratio=0.0"])
        .status()
        .unwrap();
    assert!(status.success());
    let text = read(&out.join("energies.csv"));
    // Override wins: pure harmonic spectrum.
    assert!(text.contains("# config: vp_ratio = 0.0"));
}

#[test]
fn kernel_outputs_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let status = rkky()
        .args(["kernel", "--out"])
        .arg(dir.path())
        .args(["--set", "n_fermions=12", "--set", "max_kfr=15"])
        .status()
        .unwrap();
    assert!(status.success());
    for name in ["kernel.csv", "maxima.csv", "yukawa.json", "transform.csv"] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    let yukawa: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("yukawa.json"))).unwrap();
    assert!(yukawa.get("ell").is_some(), "{yukawa}");
}

#[test]
fn empty_scan_window_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let output = rkky()
        .args(["scan-ratios", "--out"])
        .arg(dir.path())
        .args([
            "--set",
            "n_fermions=8",
            "--set",
            "vp_list=[0.0]",
            "--set",
            "kfd={min=2.0,max=1.0,count=0}",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn scan_rerun_is_byte_identical_and_resumable() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--set",
        "n_fermions=10",
        "--set",
        "vp_list=[0.0]",
        "--set",
        "kfd={min=1.5,max=3.0,count=4}",
    ];
    let run = |out: &Path| {
        let status = rkky()
            .args(["scan-ratios", "--out"])
            .arg(out)
            .args(args)
            .status()
            .unwrap();
        assert!(status.success());
    };
    run(dir.path());
    let first = read(&dir.path().join("ratio_scan.csv"));
    // Rerun over the complete file: no recomputation, identical bytes.
    run(dir.path());
    assert_eq!(first, read(&dir.path().join("ratio_scan.csv")));
    // Drop one data row and rerun: the missing cell is recomputed and the
    // file is restored byte-for-byte.
    let truncated: Vec<&str> = first.lines().collect();
    let without_last = truncated[..truncated.len() - 1].join("\n") + "\n";
    std::fs::write(dir.path().join("ratio_scan.csv"), without_last).unwrap();
    run(dir.path());
    assert_eq!(first, read(&dir.path().join("ratio_scan.csv")));
}

#[test]
fn outputs_identical_across_thread_counts() {
    let mk = |threads: &str| {
        let dir = tempfile::tempdir().unwrap();
        let status = rkky()
            .args(["scan-phase", "--out"])
            .arg(dir.path())
            .args(["--threads", threads])
            .args([
                "--set",
                "n_fermions=10",
                "--set",
                "vp_list=[0.0,50.0]",
                "--set",
                "kfd={min=1.5,max=2.5,count=3}",
                "--set",
                "length=8",
                "--set",
                "n_bosons=4",
            ])
            .status()
            .unwrap();
        assert!(status.success());
        read(&dir.path().join("phase_scan.csv"))
    };
    let single = mk("1");
    let multi = mk("4");
    assert_eq!(single, multi);
}

#[test]
fn chain_json_reports_observables() {
    let dir = tempfile::tempdir().unwrap();
    let status = rkky()
        .args(["chain", "--out"])
        .arg(dir.path())
        .args([
            "--set",
            "length=8",
            "--set",
            "n_bosons=4",
            "--set",
            "couplings=[1.0,0.5]",
            "--set",
            "v0=4.0",
            "--set",
            "boundary=open",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let chain: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("chain.json"))).unwrap();
    assert!(chain["energy"].as_f64().unwrap() < 0.0);
    assert!(chain["s_max"].as_f64().unwrap() >= 0.0);
    let density = read(&dir.path().join("density.csv"));
    let rows = density.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 8);
}
