use std::collections::BTreeSet;
use std::path::Path;

use oran_meta::harness::{run_experiment, summarize, ExperimentConfig, Method, MetricsLog, Mode};
use oran_meta::meta::MetaModel;

fn tiny(out: &Path) -> ExperimentConfig {
    let mut c = ExperimentConfig::toy();
    c.schedule.outer_iterations = 30;
    c.schedule.episodes_per_iteration = 1;
    c.baselines.donor_episodes = 5;
    c.agent.eval_episodes = 2;
    c.seeds = vec![3, 11];
    c.out_dir = out.to_path_buf();
    c
}

fn listing(dir: &Path) -> BTreeSet<String> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect()
}

#[test]
fn full_run_writes_all_artifacts_and_summarizes() {
    let dir = tempfile::tempdir().unwrap();
    let config = tiny(dir.path());
    let budget = config.schedule.adaptation_budget();
    let log = run_experiment(&config, Mode::All).unwrap();
    assert_eq!(log.records().len(), 4 * 2 * budget);

    let files = listing(dir.path());
    for m in Method::ALL {
        for seed in [3, 11] {
            assert!(files.contains(&format!("{m}_task3_seed{seed}.csv")), "{files:?}");
        }
    }
    for seed in [3, 11] {
        assert!(files.contains(&format!("adapt_trace_task3_seed{seed}.csv")));
        let meta = MetaModel::load(dir.path().join(format!("meta_model_seed{seed}.json"))).unwrap();
        // updates start once the task buffers hold two batches
        assert!(meta.iteration > 0 && meta.iteration < 30, "{}", meta.iteration);
    }
    assert!(files.contains("experiment.toml"));
    assert!(files.contains("timings.txt"));

    let back = MetricsLog::read_dir(dir.path()).unwrap();
    assert_eq!(back.records().len(), log.records().len());
    let summary = summarize(&back, 2).unwrap();
    assert_eq!(summary.methods.len(), 4);
    assert!(summary.warnings.is_empty(), "{:?}", summary.warnings);
    assert!(summary.gain.is_some());
    assert_eq!(summary.adaptation.len(), budget);
    for m in &summary.methods {
        assert_eq!(m.per_seed.len(), 2);
        assert!(m.mean.is_finite() && m.mean <= 0.0);
        let b = &m.min_qos;
        assert!(0.0 <= b.min && b.min <= b.q1 && b.q1 <= b.median && b.median <= b.q3 && b.q3 <= b.max);
    }
}

#[test]
fn rerun_reproduces_bytes_and_seeds_run_independently() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_experiment(&tiny(a.path()), Mode::Scratch).unwrap();
    let mut single = tiny(b.path());
    single.seeds = vec![11];
    run_experiment(&single, Mode::Scratch).unwrap();
    let name = "scratch_task3_seed11.csv";
    assert_eq!(
        std::fs::read(a.path().join(name)).unwrap(),
        std::fs::read(b.path().join(name)).unwrap()
    );
}

#[test]
fn invalid_config_is_rejected_before_any_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never");
    let mut config = tiny(&out);
    config.schedule.num_tasks = 7;
    assert!(run_experiment(&config, Mode::All).is_err());
    assert!(!out.exists());
}
