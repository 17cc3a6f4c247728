use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn safegrasp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_safegrasp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, extra: &str) -> std::path::PathBuf {
    let out = dir.join("out");
    let path = dir.join("exp.conf");
    fs::write(
        &path,
        format!(
            "# small synthetic experiment\nscenario = synthetic-1d\nmethod = UBO\nruns = 2\n\
             init_points = 4\nbudget = 7\nmc_samples = 3\nhyper_samples = 3\n\
             acquisition_budget = 60\noutput_dir = {}\n{extra}",
            out.display()
        ),
    )
    .unwrap();
    path
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(safegrasp(&[]).status.code(), Some(1));
    assert_eq!(safegrasp(&["run"]).status.code(), Some(1));
    assert_eq!(safegrasp(&["bench", "--suite", "nope", "--out", "x"]).status.code(), Some(1));
    assert_eq!(safegrasp(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "colour = blue\n");
    let out = safegrasp(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key 'colour'"));
}

#[test]
fn missing_files_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("none.conf");
    assert_eq!(safegrasp(&["run", "--config", missing.to_str().unwrap()]).status.code(), Some(3));
    let empty = dir.path().to_str().unwrap();
    assert_eq!(safegrasp(&["report", "--in", empty, "--format", "md"]).status.code(), Some(3));
}

#[test]
fn run_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let out = safegrasp(&["run", "--config", cfg.to_str().unwrap(), "--seed", "5", "--workers", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trace = fs::read_to_string(dir.path().join("out/trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(
        lines.next(),
        Some("run_id,iter,x_1,f,f_prime,n_j,opt_x_1,opt_value,ymc_mean,ymc_std")
    );
    assert_eq!(lines.count(), 2 * 7);
    assert!(fs::read_to_string(dir.path().join("out/config.txt")).unwrap().contains("seed = 5"));

    let out_dir = dir.path().join("out");
    let report = safegrasp(&["report", "--in", out_dir.to_str().unwrap(), "--format", "md"]);
    assert!(report.status.success());
    let md = fs::read_to_string(out_dir.join("summary.md")).unwrap();
    assert_eq!(md.lines().count(), 3);
    assert!(md.contains("| synthetic-1d | UBO |"));
    let again = safegrasp(&["report", "--in", out_dir.to_str().unwrap(), "--format", "md"]);
    assert!(again.status.success());
    assert_eq!(fs::read_to_string(out_dir.join("summary.md")).unwrap(), md);
}

#[test]
fn corrupt_trace_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    assert!(safegrasp(&["run", "--config", cfg.to_str().unwrap()]).status.success());
    let trace = dir.path().join("out/trace.csv");
    fs::write(&trace, "run_id,iter\n0,1\n").unwrap();
    let out = safegrasp(&["report", "--in", dir.path().join("out").to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trace.csv"));
}
