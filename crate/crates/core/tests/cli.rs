//! Exit codes and artifacts of the `sepnet` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sepnet(dir: &Path, args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sepnet"));
    cmd.current_dir(dir).args(args).env("RUST_LOG", "warn");
    match threads {
        Some(t) => cmd.env("SEPNET_THREADS", t),
        None => cmd.env_remove("SEPNET_THREADS"),
    };
    cmd.output().expect("spawn sepnet")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn usage_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&sepnet(tmp.path(), &[], None)), 1);
    assert_eq!(code(&sepnet(tmp.path(), &["launch"], None)), 1);
    assert_eq!(code(&sepnet(tmp.path(), &["train", "--mode", "greedy"], None)), 1);
    assert_eq!(code(&sepnet(tmp.path(), &["eval", "--phi", "1"], None)), 1);
    assert_eq!(code(&sepnet(tmp.path(), &["train", "--config", "missing.cfg"], None)), 1);

    fs::write(tmp.path().join("typo.cfg"), "seed = 1\nsgima = 0.2\n").unwrap();
    let out = sepnet(tmp.path(), &["train", "--config", "typo.cfg"], None);
    assert_eq!(code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2") && stderr.contains("seo.sigma"), "{stderr}");

    fs::write(tmp.path().join("bad.cfg"), "seo.sigma = -1\n").unwrap();
    assert_eq!(code(&sepnet(tmp.path(), &["train", "--config", "bad.cfg"], None)), 1);
    assert_eq!(code(&sepnet(tmp.path(), &["train"], Some("zero"))), 1);
    assert_eq!(code(&sepnet(tmp.path(), &["train"], Some("0"))), 1);
}

#[test]
fn help_and_version_exit_zero() {
    let tmp = tempfile::tempdir().unwrap();
    for args in [&["--help"][..], &["--version"], &["train", "--help"]] {
        let out = sepnet(tmp.path(), args, None);
        assert_eq!(code(&out), 0, "{args:?}");
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn runtime_failures_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    // A run directory without a checkpoint.
    fs::create_dir(tmp.path().join("empty")).unwrap();
    fs::write(tmp.path().join("run.cfg"), "seed = 1\n").unwrap();
    // No snapshot to fall back on: a configuration problem.
    assert_eq!(code(&sepnet(tmp.path(), &["eval", "--out", "empty", "--phi", "1,0"], None)), 1);
    let out = sepnet(tmp.path(), &["eval", "--config", "run.cfg", "--out", "empty", "--phi", "1,0"], None);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
    fs::write(tmp.path().join("garbage.csv"), "not,a,front\n1,2\n").unwrap();
    assert_eq!(code(&sepnet(tmp.path(), &["plot", "garbage.csv"], None)), 2);
}

#[test]
fn train_eval_plot_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("run.cfg"), "seo.epochs = 6\nseo.population = 4\n").unwrap();
    let out = sepnet(tmp.path(), &["train", "--config", "run.cfg", "--seed", "4", "--out", "r", "--mode", "fixed"], Some("2"));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let run = tmp.path().join("r");
    for name in ["config.snapshot", "phi_trace.csv", "metrics.csv", "front_test.csv", "checkpoint.sepn", "summary.txt"] {
        assert!(run.join(name).is_file(), "{name}");
    }
    let snapshot = fs::read_to_string(run.join("config.snapshot")).unwrap();
    assert!(snapshot.contains("mode = fixed") && snapshot.contains("seed = 4") && snapshot.contains("seo.epochs = 6"), "{snapshot}");
    assert_eq!(fs::read_to_string(run.join("phi_trace.csv")).unwrap().lines().count(), 7);

    // Config and phi default to the run directory's snapshot and summary.
    let out = sepnet(tmp.path(), &["eval", "--out", "r"], None);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = sepnet(tmp.path(), &["eval", "--out", "r", "--phi", "1.5,3"], None);
    assert_eq!(code(&out), 0);
    assert!(run.join("front_eval_alpha1.5_lambda3.csv").is_file());

    let out = sepnet(tmp.path(), &["plot", "r/front_test.csv", "r/front_eval_alpha1.5_lambda3.csv", "--out", "fronts.svg"], None);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(fs::read_to_string(tmp.path().join("fronts.svg")).unwrap().contains("<svg"));
}
