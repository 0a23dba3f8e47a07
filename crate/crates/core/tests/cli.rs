use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use altns::io::load_snapshot;

const BIN: &str = env!("CARGO_BIN_EXE_altns");

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let out = dir.join("out");
    let text = format!("{body}\n[output]\ndir = {:?}\n", out.to_str().unwrap());
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path
}

fn altns(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env("RUST_LOG", "warn");
    if let Some(t) = threads {
        cmd.env("ALTNS_THREADS", t);
    }
    cmd.output().unwrap()
}

const PULSE_2D: &str = r#"
[grid]
n = [12, 12, 0]
[gas]
gamma = 1.4
mu0 = 0.01
mu1 = 0.001
[solver]
t_end = 10.0
max_steps = 15
[initial]
preset = "gaussian_density_pulse"
"#;

#[test]
fn uniform_rest_stays_bitwise_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[grid]
n = [4, 4, 4]
[gas]
gamma = 1.4
mu0 = 0.01
kappa_r = 0.001
[solver]
t_end = 0.5
[initial]
preset = "uniform_rest"
"#,
    );
    let out = altns(&["run", cfg.to_str().unwrap()], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let first = load_snapshot(&dir.path().join("out/snap_000000.bin")).unwrap();
    let mut snaps: Vec<_> = fs::read_dir(dir.path().join("out"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_str().unwrap().starts_with("snap_"))
        .collect();
    snaps.sort();
    let last = load_snapshot(snaps.last().unwrap()).unwrap();
    assert!(last.t >= 0.5 - 1e-12, "final time {}", last.t);
    assert_eq!(last.field, first.field);
}

#[test]
fn runs_are_deterministic_across_thread_counts() {
    let mut bytes = Vec::new();
    for threads in ["1", "4", "4"] {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write_config(dir.path(), PULSE_2D);
        let out = altns(&["run", cfg.to_str().unwrap()], Some(threads));
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        bytes.push(fs::read(dir.path().join("out/snap_000015.bin")).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    assert_eq!(bytes[1], bytes[2]);
}

#[test]
fn csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), PULSE_2D);
    let out = altns(&["run", cfg.to_str().unwrap()], None);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("after 15 steps"), "{stdout}");
    assert!(stdout.contains("entropy non-increasing"), "{stdout}");

    let csv = fs::read_to_string(dir.path().join("out/diagnostics.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "# altns diagnostics v1");
    assert!(lines[1].starts_with("t,dt,mass,mom_x"));
    assert_eq!(lines.len(), 2 + 16);
    let cols = lines[1].split(',').count();
    let mass: Vec<f64> = lines[2..]
        .iter()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), cols);
            f[2].parse().unwrap()
        })
        .collect();
    for m in &mass {
        assert!((m - mass[0]).abs() <= 1e-12 * mass[0]);
    }
    assert!(dir.path().join("out/norms.txt").exists());
}

#[test]
fn positivity_abort_keeps_last_good_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[grid]
n = [32, 0, 0]
[gas]
gamma = 1.4
mu0 = 0.0001
[solver]
t_end = 1.0
cfl = 20.0
max_rejects = 0
[initial]
preset = "gaussian_density_pulse"
amplitude = 100.0
"#,
    );
    let out = altns(&["run", cfg.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    let good = load_snapshot(&dir.path().join("out/last_good.bin")).unwrap();
    let first = load_snapshot(&dir.path().join("out/snap_000000.bin")).unwrap();
    assert_eq!(good, first);
}

#[test]
fn config_errors_exit_with_2_and_cite_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &PULSE_2D.replace("gamma = 1.4", "gamma = 0.9"));
    let out = altns(&["run", cfg.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5"), "{err}");

    let out = altns(&["run", cfg.to_str().unwrap()], Some("zero"));
    assert_eq!(out.status.code(), Some(2));
    let out = altns(&["run", dir.path().join("missing.toml").to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn converge_prints_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[grid]
n = [16, 0, 0]
[gas]
gamma = 1.4
mu0 = 0.01
mu1 = 0.001
kappa_r = 0.001
[solver]
t_end = 0.5
variant = "r_sharp"
[initial]
preset = "mms_wave"
[convergence]
mode = "mms"
grids = [16, 32, 64]
"#,
    );
    let out = altns(&["converge", cfg.to_str().unwrap()], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("r_sharp"), "{stdout}");
    for n in ["16", "32", "64"] {
        assert!(
            stdout.lines().any(|l| l.split_whitespace().next() == Some(n)),
            "{stdout}"
        );
    }

    let out = altns(&["converge", cfg.to_str().unwrap(), "--variant", "both"], None);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("r_star") && stdout.contains("r_sharp"), "{stdout}");
}

#[test]
fn quick_verify_passes() {
    let out = altns(&["verify", "--quick"], None);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}");
    assert!(stdout.contains("15 checks, 0 failed"), "{stdout}");
    assert!(!stdout.contains("[FAIL]"));
}
