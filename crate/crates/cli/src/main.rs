use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use oran_meta::ddpg::evaluate_policy;
use oran_meta::harness::{
    adapt_phase, baseline_phase, checkpoint_path, compute_cdf, load_config, meta_phase, run_experiment, summarize,
    write_trace, ExperimentConfig, Method, MetricsLog, Mode,
};
use oran_meta::meta::{BaselineKind, MetaModel};

#[derive(Parser)]
#[command(name = "oran-meta", version, about = "Meta-reinforcement learning for O-RAN resource allocation")]
struct Cli {
    /// Experiment file (TOML). Overrides --profile.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Built-in profile used when no --config is given.
    #[arg(long, global = true, value_enum, default_value_t = Profile::Toy)]
    profile: Profile,
    /// Run a single seed instead of the configured list.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (defaults to the config's out_dir).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Toy,
    Paper,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Scratch,
    Tl,
    Mtl,
}

#[derive(Clone, Copy, ValueEnum)]
enum RunMode {
    Meta,
    Scratch,
    Tl,
    Mtl,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Meta-train on the task portfolio and save one checkpoint per seed.
    MetaTrain,
    /// Adapt saved meta models to the new task.
    Adapt,
    /// Run a baseline on the new task with the same episode budget.
    Baseline {
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Greedy evaluation of saved meta models on every task.
    Eval {
        /// Checkpoint to evaluate instead of the per-seed files in the output directory.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        episodes: usize,
    },
    /// Summarize the metric CSVs of an output directory.
    Summarize {
        /// Episodes averaged at the end of each run.
        #[arg(long, default_value_t = 5)]
        window: usize,
    },
    /// Run meta-training, adaptation and baselines end to end.
    Run {
        #[arg(long, value_enum, default_value_t = RunMode::All)]
        mode: RunMode,
    },
}

fn resolve(cli: &Cli) -> anyhow::Result<ExperimentConfig> {
    let mut config = match &cli.config {
        Some(path) => load_config(path)?,
        None => ExperimentConfig::profile(match cli.profile {
            Profile::Toy => "toy",
            Profile::Paper => "paper",
        })?,
    };
    if let Some(seed) = cli.seed {
        config.seeds = vec![seed];
    }
    if let Some(out) = &cli.out {
        config.out_dir = out.clone();
    }
    config.validate()?;
    Ok(config)
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let config = resolve(&cli)?;
    let out = config.out_dir.clone();
    std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let task_id = config.new_task.task_id;

    match cli.command {
        Command::MetaTrain => {
            for &seed in &config.seeds {
                let start = std::time::Instant::now();
                let meta = meta_phase(&config, seed)?;
                let path = checkpoint_path(&out, seed);
                meta.save(&path)?;
                println!("seed {seed}: {} ({:.1}s)", path.display(), start.elapsed().as_secs_f64());
            }
        }
        Command::Adapt => {
            let mut log = MetricsLog::new();
            for &seed in &config.seeds {
                let path = checkpoint_path(&out, seed);
                let meta = MetaModel::load(&path)
                    .with_context(|| format!("loading {} (run meta-train first)", path.display()))?;
                let adaptation = adapt_phase(&config, &meta, seed)?;
                write_trace(&out, task_id, seed, &adaptation)?;
                log.push_adaptation(Method::Meta, task_id, seed, &adaptation);
                let csv = log.write_run(&out, Method::Meta, task_id, seed)?;
                println!("seed {seed}: final return {:.6} -> {}", adaptation.final_return(5).unwrap_or(f64::NAN), csv.display());
            }
        }
        Command::Baseline { kind } => {
            let kind = match kind {
                Kind::Scratch => BaselineKind::Scratch,
                Kind::Tl => BaselineKind::Transfer,
                Kind::Mtl => BaselineKind::MultiTask,
            };
            let method = Method::from(kind);
            let mut log = MetricsLog::new();
            for &seed in &config.seeds {
                let adaptation = baseline_phase(&config, kind, seed)?;
                log.push_adaptation(method, task_id, seed, &adaptation);
                let csv = log.write_run(&out, method, task_id, seed)?;
                println!("seed {seed}: final return {:.6} -> {}", adaptation.final_return(5).unwrap_or(f64::NAN), csv.display());
            }
        }
        Command::Eval { checkpoint, episodes } => {
            let models: Vec<(String, PathBuf, u64)> = match checkpoint {
                Some(p) => vec![(p.display().to_string(), p, config.seeds[0])],
                None => config.seeds.iter().map(|&s| (format!("seed {s}"), checkpoint_path(&out, s), s)).collect(),
            };
            let mut tasks = config.task_specs();
            tasks.push(config.new_task_spec());
            for (label, path, seed) in models {
                let meta = MetaModel::load(&path).with_context(|| format!("loading {}", path.display()))?;
                let agent = meta.agent(&config.agent)?;
                println!("{label} (iteration {}):", meta.iteration);
                for task in &tasks {
                    let r = evaluate_policy(&agent, task, episodes, config.agent.horizon, seed)?;
                    println!(
                        "  task {:>3} K={:<4} return {:>12.6}  q_avg {:.4} q_min {:.4} q_max {:.4}",
                        task.task_id, task.cell.num_rbs, r.mean_return, r.q_avg, r.q_min, r.q_max
                    );
                }
            }
        }
        Command::Summarize { window } => {
            let log = MetricsLog::read_dir(&out)?;
            if log.records().is_empty() {
                bail!("no metric CSVs found in {}", out.display());
            }
            let summary = summarize(&log, window)?;
            let text = summary.to_string();
            std::fs::write(out.join("summary.txt"), &text)?;
            for m in log.methods() {
                let samples: Vec<f64> = log.records().iter().filter(|r| r.method == m).map(|r| r.q_min).collect();
                let mut w = csv::Writer::from_path(out.join(format!("cdf_qmin_{m}.csv")))?;
                w.write_record(["q_min", "cdf"])?;
                for (x, f) in compute_cdf(&samples)? {
                    w.write_record([x.to_string(), f.to_string()])?;
                }
                w.flush()?;
            }
            print!("{text}");
        }
        Command::Run { mode } => {
            let mode = match mode {
                RunMode::Meta => Mode::Meta,
                RunMode::Scratch => Mode::Scratch,
                RunMode::Tl => Mode::Tl,
                RunMode::Mtl => Mode::Mtl,
                RunMode::All => Mode::All,
            };
            let log = run_experiment(&config, mode)?;
            for t in log.timings() {
                println!("{:<12} seed {:<4} {:>9.2}s", t.phase, t.seed, t.seconds);
            }
            println!("wrote {} records to {}", log.records().len(), out.display());
        }
    }
    Ok(())
}
