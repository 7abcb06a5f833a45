use std::path::Path;
use std::process::{Command, Output};

use oran_meta::harness::ExperimentConfig;

fn oran(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oran-meta")).args(args).output().unwrap()
}

fn write_config(dir: &Path, edit: impl FnOnce(&mut ExperimentConfig)) -> String {
    let mut c = ExperimentConfig::toy();
    c.schedule.outer_iterations = 20;
    c.schedule.episodes_per_iteration = 1;
    c.baselines.donor_episodes = 3;
    c.agent.eval_episodes = 1;
    c.seeds = vec![2];
    c.out_dir = dir.join("out");
    edit(&mut c);
    let path = dir.join("exp.toml");
    std::fs::write(&path, c.to_toml_string().unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn run_then_summarize() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), |_| {});
    let out = oran(&["--config", &cfg, "run", "--mode", "all"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = oran(&["--config", &cfg, "summarize", "--window", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("vs best baseline"), "{text}");
    let out_dir = dir.path().join("out");
    assert!(out_dir.join("summary.txt").exists());
    assert!(out_dir.join("cdf_qmin_meta.csv").exists());

    let out = oran(&["--config", &cfg, "eval", "--episodes", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("task   3"));
}

#[test]
fn adapt_without_checkpoint_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), |_| {});
    let out = oran(&["--config", &cfg, "adapt"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("meta-train"));
}

#[test]
fn invalid_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), |c| c.cell.p_min_mw = -1.0);
    let out = oran(&["--config", &cfg, "run"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cell.p_min_mw"));
}
