//! Experiment driver: TOML configuration profiles, per-seed runs of the
//! meta-learner and baselines, CSV metric logs and summary statistics.
//!
//! Output layout of a run directory:
//!
//! - `{method}_task{id}_seed{seed}.csv`: columns `episode, return, q_avg, q_min, q_max`,
//!   one row per adaptation episode, evaluated greedily on the new task;
//! - `adapt_trace_task{id}_seed{seed}.csv`: columns `shot, episode_return` for meta adaptation;
//! - `meta_model_seed{seed}.json`: meta-model checkpoint;
//! - `experiment.toml`, `timings.txt` and, after summarizing, `summary.txt`.

mod config;
mod experiment;
mod metrics;
mod stats;

pub use config::{load_config, BaselineConfig, ExperimentConfig, TaskEntry, SCHEMA_VERSION};
pub use experiment::{
    adapt_phase, baseline_phase, checkpoint_path, meta_phase, run_experiment, run_seed, write_timings, Mode,
};
pub use metrics::{csv_file_name, trace_file_name, write_trace, EpisodeRecord, Method, MetricsLog, PhaseTiming};
pub use stats::{
    cdf_at, compute_cdf, five_number_summary, mean_std, relative_gain, summarize, FiveNumber, GainReport,
    MethodSummary, Summary,
};
