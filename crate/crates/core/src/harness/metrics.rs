use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::meta::{Adaptation, BaselineKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Meta,
    Scratch,
    Tl,
    Mtl,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Meta, Method::Scratch, Method::Tl, Method::Mtl];
    pub const BASELINES: [Method; 3] = [Method::Scratch, Method::Tl, Method::Mtl];

    pub fn name(self) -> &'static str {
        match self {
            Method::Meta => "meta",
            Method::Scratch => "scratch",
            Method::Tl => "tl",
            Method::Mtl => "mtl",
        }
    }
}

impl From<BaselineKind> for Method {
    fn from(kind: BaselineKind) -> Self {
        match kind {
            BaselineKind::Scratch => Method::Scratch,
            BaselineKind::Transfer => Method::Tl,
            BaselineKind::MultiTask => Method::Mtl,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown method `{s}`")))
    }
}

/// One evaluated episode on the target task.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord {
    pub method: Method,
    pub task_id: u64,
    pub seed: u64,
    /// 1-based episode (shot) index.
    pub episode: usize,
    pub ret: f64,
    pub q_avg: f64,
    pub q_min: f64,
    pub q_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTiming {
    pub phase: String,
    pub seed: u64,
    pub seconds: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    episode: usize,
    #[serde(rename = "return")]
    ret: f64,
    q_avg: f64,
    q_min: f64,
    q_max: f64,
}

#[derive(Debug, Serialize)]
struct TraceRow {
    shot: usize,
    episode_return: f64,
}

/// Append-only store of evaluation records and wall-clock timings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsLog {
    records: Vec<EpisodeRecord>,
    timings: Vec<PhaseTiming>,
}

pub fn csv_file_name(method: Method, task_id: u64, seed: u64) -> String {
    format!("{}_task{task_id}_seed{seed}.csv", method.name())
}

pub fn trace_file_name(task_id: u64, seed: u64) -> String {
    format!("adapt_trace_task{task_id}_seed{seed}.csv")
}

fn parse_file_name(name: &str) -> Option<(Method, u64, u64)> {
    let stem = name.strip_suffix(".csv")?;
    let mut parts = stem.split('_');
    let method = parts.next()?.parse().ok()?;
    let task = parts.next()?.strip_prefix("task")?.parse().ok()?;
    let seed = parts.next()?.strip_prefix("seed")?.parse().ok()?;
    parts.next().is_none().then_some((method, task, seed))
}

impl MetricsLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: EpisodeRecord) {
        self.records.push(record);
    }

    pub fn push_adaptation(&mut self, method: Method, task_id: u64, seed: u64, adaptation: &Adaptation) {
        for s in &adaptation.shots {
            self.push(EpisodeRecord {
                method,
                task_id,
                seed,
                episode: s.shot,
                ret: s.eval_return,
                q_avg: s.q_avg,
                q_min: s.q_min,
                q_max: s.q_max,
            });
        }
    }

    pub fn record_timing(&mut self, phase: impl Into<String>, seed: u64, seconds: f64) {
        self.timings.push(PhaseTiming {
            phase: phase.into(),
            seed,
            seconds,
        });
    }

    pub fn extend(&mut self, other: MetricsLog) {
        self.records.extend(other.records);
        self.timings.extend(other.timings);
    }

    pub fn records(&self) -> &[EpisodeRecord] {
        &self.records
    }

    pub fn timings(&self) -> &[PhaseTiming] {
        &self.timings
    }

    pub fn methods(&self) -> BTreeSet<Method> {
        self.records.iter().map(|r| r.method).collect()
    }

    pub fn seeds(&self, method: Method) -> BTreeSet<u64> {
        self.records.iter().filter(|r| r.method == method).map(|r| r.seed).collect()
    }

    /// Records of one run, in insertion order.
    pub fn series(&self, method: Method, seed: u64) -> Vec<&EpisodeRecord> {
        self.records.iter().filter(|r| r.method == method && r.seed == seed).collect()
    }

    /// Writes the records of one (method, task, seed) run to `dir`.
    pub fn write_run(&self, dir: &Path, method: Method, task_id: u64, seed: u64) -> Result<PathBuf> {
        let path = dir.join(csv_file_name(method, task_id, seed));
        let mut w = csv::Writer::from_path(&path)?;
        for r in self.records.iter().filter(|r| r.method == method && r.task_id == task_id && r.seed == seed) {
            w.serialize(CsvRow {
                episode: r.episode,
                ret: r.ret,
                q_avg: r.q_avg,
                q_min: r.q_min,
                q_max: r.q_max,
            })?;
        }
        w.flush()?;
        Ok(path)
    }

    /// Writes every run held in the log.
    pub fn write_all(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let runs: BTreeSet<(Method, u64, u64)> = self.records.iter().map(|r| (r.method, r.task_id, r.seed)).collect();
        runs.into_iter().map(|(m, t, s)| self.write_run(dir, m, t, s)).collect()
    }

    /// Rebuilds a log from the metric CSVs in `dir` (files named by [`csv_file_name`]).
    pub fn read_dir(dir: &Path) -> Result<Self> {
        let mut files = Vec::new();
        for entry in std::fs::read_dir(dir)? {
            let entry = entry?;
            let name = entry.file_name().to_string_lossy().into_owned();
            if let Some(key) = parse_file_name(&name) {
                files.push((key, entry.path()));
            }
        }
        files.sort();
        let mut log = Self::new();
        for ((method, task_id, seed), path) in files {
            let mut reader = csv::Reader::from_path(&path)?;
            for row in reader.deserialize::<CsvRow>() {
                let row = row?;
                log.push(EpisodeRecord {
                    method,
                    task_id,
                    seed,
                    episode: row.episode,
                    ret: row.ret,
                    q_avg: row.q_avg,
                    q_min: row.q_min,
                    q_max: row.q_max,
                });
            }
        }
        Ok(log)
    }
}

/// Adaptation trace with columns `shot, episode_return`.
pub fn write_trace(dir: &Path, task_id: u64, seed: u64, adaptation: &Adaptation) -> Result<PathBuf> {
    let path = dir.join(trace_file_name(task_id, seed));
    let mut w = csv::Writer::from_path(&path)?;
    for s in &adaptation.shots {
        w.serialize(TraceRow {
            shot: s.shot,
            episode_return: s.eval_return,
        })?;
    }
    w.flush()?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(method: Method, seed: u64, episode: usize, ret: f64) -> EpisodeRecord {
        EpisodeRecord {
            method,
            task_id: 3,
            seed,
            episode,
            ret,
            q_avg: 0.1 * ret,
            q_min: 1.0 / 3.0,
            q_max: 0.9,
        }
    }

    #[test]
    fn file_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(parse_file_name(&csv_file_name(m, 7, 12)), Some((m, 7, 12)));
        }
        assert_eq!(parse_file_name(&trace_file_name(3, 0)), None);
        assert_eq!(parse_file_name("summary.txt"), None);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let mut log = MetricsLog::new();
        let returns = [-5.123456789012345, 0.1 + 0.2, -1e-300];
        for (i, r) in returns.into_iter().enumerate() {
            log.push(rec(Method::Meta, 0, i + 1, r));
        }
        for (i, r) in returns.into_iter().enumerate() {
            log.push(rec(Method::Scratch, 1, i + 1, r * 2.0));
        }
        log.record_timing("meta-train", 0, 1.5);
        log.write_all(dir.path()).unwrap();
        let back = MetricsLog::read_dir(dir.path()).unwrap();
        assert_eq!(back.records(), log.records());
        assert!(back.timings().is_empty());
    }

    #[test]
    fn csv_header_and_layout() {
        let dir = tempfile::tempdir().unwrap();
        let mut log = MetricsLog::new();
        log.push(rec(Method::Tl, 4, 1, -2.5));
        let path = log.write_run(dir.path(), Method::Tl, 3, 4).unwrap();
        assert!(path.ends_with("tl_task3_seed4.csv"));
        let text = std::fs::read_to_string(path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("episode,return,q_avg,q_min,q_max"));
        assert_eq!(lines.next(), Some("1,-2.5,-0.25,0.3333333333333333,0.9"));
    }

    #[test]
    fn series_and_methods() {
        let mut log = MetricsLog::new();
        log.push(rec(Method::Meta, 0, 1, 1.0));
        log.push(rec(Method::Meta, 1, 1, 2.0));
        log.push(rec(Method::Meta, 0, 2, 3.0));
        assert_eq!(log.series(Method::Meta, 0).iter().map(|r| r.ret).collect::<Vec<_>>(), vec![1.0, 3.0]);
        assert_eq!(log.methods(), BTreeSet::from([Method::Meta]));
        assert_eq!(log.seeds(Method::Meta), BTreeSet::from([0, 1]));
    }
}
