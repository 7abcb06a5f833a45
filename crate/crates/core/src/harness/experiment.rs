use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::metrics::{write_trace, Method, MetricsLog};
use crate::error::{Error, Result};
use crate::meta::{meta_adapt_new, meta_train, run_baseline, train_donor, Adaptation, Baseline, BaselineKind, MetaModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Meta,
    Scratch,
    Tl,
    Mtl,
    All,
}

impl Mode {
    pub fn methods(self) -> Vec<Method> {
        match self {
            Mode::Meta => vec![Method::Meta],
            Mode::Scratch => vec![Method::Scratch],
            Mode::Tl => vec![Method::Tl],
            Mode::Mtl => vec![Method::Mtl],
            Mode::All => Method::ALL.to_vec(),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "meta" => Ok(Mode::Meta),
            "scratch" => Ok(Mode::Scratch),
            "tl" => Ok(Mode::Tl),
            "mtl" => Ok(Mode::Mtl),
            "all" => Ok(Mode::All),
            other => Err(Error::config("mode", format!("unknown mode `{other}`"))),
        }
    }
}

pub fn checkpoint_path(dir: &Path, seed: u64) -> PathBuf {
    dir.join(format!("meta_model_seed{seed}.json"))
}

/// Meta-trains on the configured task portfolio.
pub fn meta_phase(config: &ExperimentConfig, seed: u64) -> Result<MetaModel> {
    meta_train(config.task_specs(), config.schedule.clone(), config.agent.clone(), seed)
        .map_err(|e| e.context(format!("meta-train, seed {seed}")))
}

/// Adapts a meta model to the new task for T_new episodes.
pub fn adapt_phase(config: &ExperimentConfig, meta: &MetaModel, seed: u64) -> Result<Adaptation> {
    meta_adapt_new(meta, &config.new_task_spec(), &config.schedule, &config.agent, seed)
        .map_err(|e| e.context(format!("adapt, seed {seed}")))
}

/// Runs one baseline on the new task with the T_new budget.
pub fn baseline_phase(config: &ExperimentConfig, kind: BaselineKind, seed: u64) -> Result<Adaptation> {
    let budget = config.schedule.adaptation_budget();
    let new_task = config.new_task_spec();
    let run = || -> Result<Adaptation> {
        match kind {
            BaselineKind::Scratch => run_baseline(Baseline::Scratch, &new_task, budget, &config.agent, seed),
            BaselineKind::Transfer => {
                let donor = train_donor(&config.donor_spec()?, config.baselines.donor_episodes, &config.agent, seed)?;
                run_baseline(Baseline::Transfer { donor: &donor }, &new_task, budget, &config.agent, seed)
            }
            BaselineKind::MultiTask => {
                let donors = config.task_specs();
                run_baseline(Baseline::MultiTask { donors: &donors }, &new_task, budget, &config.agent, seed)
            }
        }
    };
    run().map_err(|e| e.context(format!("baseline {}, seed {seed}", kind.name())))
}

fn timed<T>(log: &mut MetricsLog, phase: &str, seed: u64, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f()?;
    log.record_timing(phase, seed, start.elapsed().as_secs_f64());
    Ok(out)
}

/// Runs every method of `mode` for one seed, writing each method's CSV as soon
/// as it finishes.
pub fn run_seed(config: &ExperimentConfig, mode: Mode, seed: u64, out_dir: &Path) -> Result<MetricsLog> {
    let mut log = MetricsLog::new();
    let task_id = config.new_task.task_id;
    for method in mode.methods() {
        let adaptation = match method {
            Method::Meta => {
                let meta = timed(&mut log, "meta-train", seed, || meta_phase(config, seed))?;
                meta.save(checkpoint_path(out_dir, seed))?;
                let adaptation = timed(&mut log, "adapt", seed, || adapt_phase(config, &meta, seed))?;
                write_trace(out_dir, task_id, seed, &adaptation)?;
                adaptation
            }
            Method::Scratch => timed(&mut log, "scratch", seed, || {
                baseline_phase(config, BaselineKind::Scratch, seed)
            })?,
            Method::Tl => timed(&mut log, "tl", seed, || baseline_phase(config, BaselineKind::Transfer, seed))?,
            Method::Mtl => timed(&mut log, "mtl", seed, || baseline_phase(config, BaselineKind::MultiTask, seed))?,
        };
        log.push_adaptation(method, task_id, seed, &adaptation);
        log.write_run(out_dir, method, task_id, seed)?;
    }
    Ok(log)
}

/// Runs `mode` for every configured seed (seeds in parallel) into `config.out_dir`.
///
/// Results depend only on the config and seed. An interrupted run is not
/// resumed: rerunning starts over and overwrites the earlier files.
pub fn run_experiment(config: &ExperimentConfig, mode: Mode) -> Result<MetricsLog> {
    config.validate()?;
    let out_dir = config.out_dir.as_path();
    std::fs::create_dir_all(out_dir)?;
    std::fs::write(out_dir.join("experiment.toml"), config.to_toml_string()?)?;
    let logs: Vec<Result<MetricsLog>> = config.seeds.par_iter().map(|&seed| run_seed(config, mode, seed, out_dir)).collect();
    let mut log = MetricsLog::new();
    for l in logs {
        log.extend(l?);
    }
    write_timings(out_dir, &log)?;
    Ok(log)
}

/// Wall-clock seconds per phase, kept apart from the metric CSVs.
pub fn write_timings(dir: &Path, log: &MetricsLog) -> Result<()> {
    let mut text = String::from("phase\tseed\tseconds\n");
    for t in log.timings() {
        let _ = writeln!(text, "{}\t{}\t{:.3}", t.phase, t.seed, t.seconds);
    }
    std::fs::write(dir.join("timings.txt"), text)?;
    Ok(())
}
