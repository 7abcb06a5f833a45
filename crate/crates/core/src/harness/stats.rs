use std::collections::BTreeMap;
use std::fmt;

use super::metrics::{Method, MetricsLog};
use crate::error::{Error, Result};

/// Empirical CDF as `(value, F(value))` pairs over the distinct sorted values,
/// with `F(x) = #{samples ≤ x} / n`.
pub fn compute_cdf(samples: &[f64]) -> Result<Vec<(f64, f64)>> {
    if samples.is_empty() {
        return Err(Error::contract("empirical CDF of an empty sample"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::contract("empirical CDF of a sample containing NaN"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, &x) in sorted.iter().enumerate() {
        let f = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == x => last.1 = f,
            _ => out.push((x, f)),
        }
    }
    Ok(out)
}

/// Evaluates a CDF built by [`compute_cdf`] at `x`.
pub fn cdf_at(cdf: &[(f64, f64)], x: f64) -> f64 {
    let idx = cdf.partition_point(|&(v, _)| v <= x);
    if idx == 0 {
        0.0
    } else {
        cdf[idx - 1].1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Min, quartiles (linear interpolation between order statistics) and max.
pub fn five_number_summary(samples: &[f64]) -> Result<FiveNumber> {
    if samples.is_empty() || samples.iter().any(|x| x.is_nan()) {
        return Err(Error::contract("five-number summary needs a nonempty sample without NaN"));
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    Ok(FiveNumber {
        min: s[0],
        q1: quantile_sorted(&s, 0.25),
        median: quantile_sorted(&s, 0.5),
        q3: quantile_sorted(&s, 0.75),
        max: s[s.len() - 1],
    })
}

/// Mean and sample standard deviation; the deviation is 0 for a single value.
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return Some((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Some((mean, var.sqrt()))
}

/// `(candidate − base) / |base|`.
pub fn relative_gain(candidate: f64, base: f64) -> f64 {
    (candidate - base) / base.abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: Method,
    /// Final return of each seed, in seed order.
    pub per_seed: Vec<(u64, f64)>,
    pub mean: f64,
    pub std: f64,
    /// Set when only one seed was available, so `std` carries no information.
    pub single_seed: bool,
    pub min_qos: FiveNumber,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GainReport {
    pub baseline: Method,
    pub meta_return: f64,
    pub baseline_return: f64,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    /// Episodes averaged at the end of each run to form its final return.
    pub final_window: usize,
    pub methods: Vec<MethodSummary>,
    /// Gain of meta over the best baseline.
    pub gain: Option<GainReport>,
    /// Gain of meta over each available baseline.
    pub pairwise: Vec<GainReport>,
    /// Mean evaluation return per shot index, one column per method.
    pub adaptation: BTreeMap<usize, BTreeMap<Method, f64>>,
    pub warnings: Vec<String>,
}

impl Summary {
    pub fn method(&self, method: Method) -> Option<&MethodSummary> {
        self.methods.iter().find(|m| m.method == method)
    }
}

fn final_return(returns: &[f64], window: usize) -> Option<f64> {
    let tail = &returns[returns.len().saturating_sub(window)..];
    (!tail.is_empty()).then(|| tail.iter().sum::<f64>() / tail.len() as f64)
}

/// Per-method statistics computed only from the records in `log`.
///
/// Missing methods produce warnings and a partial report rather than an error.
pub fn summarize(log: &MetricsLog, final_window: usize) -> Result<Summary> {
    if final_window == 0 {
        return Err(Error::config("final_window", "must be positive"));
    }
    let mut warnings = Vec::new();
    let present = log.methods();
    for m in Method::ALL {
        if !present.contains(&m) {
            warnings.push(format!("method `{m}` has no records"));
        }
    }
    if present.len() < 2 {
        warnings.push("fewer than two methods present; no comparison possible".into());
    }

    let mut methods = Vec::new();
    let mut adaptation: BTreeMap<usize, BTreeMap<Method, f64>> = BTreeMap::new();
    for &m in &present {
        let mut per_seed = Vec::new();
        let mut shot_sums: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
        for seed in log.seeds(m) {
            let series = log.series(m, seed);
            let returns: Vec<f64> = series.iter().map(|r| r.ret).collect();
            if let Some(f) = final_return(&returns, final_window) {
                per_seed.push((seed, f));
            }
            for r in &series {
                let e = shot_sums.entry(r.episode).or_insert((0.0, 0));
                e.0 += r.ret;
                e.1 += 1;
            }
        }
        for (shot, (sum, n)) in shot_sums {
            adaptation.entry(shot).or_default().insert(m, sum / n as f64);
        }
        let finals: Vec<f64> = per_seed.iter().map(|p| p.1).collect();
        let (mean, std) = mean_std(&finals).expect("method present implies at least one record");
        let single_seed = finals.len() == 1;
        if single_seed {
            warnings.push(format!("method `{m}` has a single seed; std reported as 0"));
        }
        let q_min: Vec<f64> = log.records().iter().filter(|r| r.method == m).map(|r| r.q_min).collect();
        methods.push(MethodSummary {
            method: m,
            per_seed,
            mean,
            std,
            single_seed,
            min_qos: five_number_summary(&q_min)?,
        });
    }

    let meta = methods.iter().find(|s| s.method == Method::Meta);
    let pairwise: Vec<GainReport> = match meta {
        Some(meta) => methods
            .iter()
            .filter(|s| s.method != Method::Meta)
            .map(|b| GainReport {
                baseline: b.method,
                meta_return: meta.mean,
                baseline_return: b.mean,
                gain: relative_gain(meta.mean, b.mean),
            })
            .collect(),
        None => Vec::new(),
    };
    let gain = pairwise
        .iter()
        .max_by(|a, b| a.baseline_return.total_cmp(&b.baseline_return))
        .cloned();
    if meta.is_some() && gain.is_none() {
        warnings.push("no baseline present; gain not computed".into());
    }

    Ok(Summary {
        final_window,
        methods,
        gain,
        pairwise,
        adaptation,
        warnings,
    })
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "final return (mean of last {} episodes per seed)", self.final_window)?;
        for m in &self.methods {
            write!(f, "  {:<8} {:>12.6} ± {:<10.6} seeds={}", m.method.name(), m.mean, m.std, m.per_seed.len())?;
            if m.single_seed {
                write!(f, " [single seed]")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "relative gain of meta")?;
        match &self.gain {
            Some(g) => writeln!(f, "  vs best baseline ({}): {:+.2}%", g.baseline, 100.0 * g.gain)?,
            None => writeln!(f, "  vs best baseline: n/a")?,
        }
        for g in &self.pairwise {
            writeln!(f, "  vs {:<8} {:+.2}%", g.baseline.name(), 100.0 * g.gain)?;
        }
        writeln!(f, "min-QoS five-number summary (min, q1, median, q3, max)")?;
        for m in &self.methods {
            let b = &m.min_qos;
            writeln!(
                f,
                "  {:<8} {:.6} {:.6} {:.6} {:.6} {:.6}",
                m.method.name(),
                b.min,
                b.q1,
                b.median,
                b.q3,
                b.max
            )?;
        }
        writeln!(f, "adaptation curve (mean return per shot)")?;
        write!(f, "  {:>5}", "shot")?;
        for m in &self.methods {
            write!(f, " {:>12}", m.method.name())?;
        }
        writeln!(f)?;
        for (shot, row) in &self.adaptation {
            write!(f, "  {shot:>5}")?;
            for m in &self.methods {
                match row.get(&m.method) {
                    Some(v) => write!(f, " {v:>12.6}")?,
                    None => write!(f, " {:>12}", "-")?,
                }
            }
            writeln!(f)?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::metrics::EpisodeRecord;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Exp1};

    #[test]
    fn cdf_definition() {
        let cdf = compute_cdf(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(cdf, vec![(1.0, 1.0 / 3.0), (2.0, 2.0 / 3.0), (3.0, 1.0)]);
        assert_eq!(cdf_at(&cdf, 2.0), 2.0 / 3.0);
        assert_eq!(cdf_at(&cdf, 0.5), 0.0);
        assert_eq!(cdf_at(&cdf, 2.5), 2.0 / 3.0);
        assert_eq!(cdf_at(&cdf, 9.0), 1.0);
    }

    #[test]
    fn cdf_of_constant_sample_is_single_jump() {
        assert_eq!(compute_cdf(&[4.0; 7]).unwrap(), vec![(4.0, 1.0)]);
    }

    #[test]
    fn cdf_rejects_empty_and_nan() {
        assert!(compute_cdf(&[]).is_err());
        assert!(compute_cdf(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn cdf_of_exponential_draws() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let xs: Vec<f64> = (0..10_000).map(|_| Exp1.sample(&mut rng)).collect();
        let cdf = compute_cdf(&xs).unwrap();
        assert!((cdf_at(&cdf, 1.0) - (1.0 - (-1.0f64).exp())).abs() < 0.02);
    }

    #[test]
    fn five_numbers_of_one_to_five() {
        let b = five_number_summary(&[5.0, 3.0, 1.0, 4.0, 2.0]).unwrap();
        assert_eq!((b.min, b.q1, b.median, b.q3, b.max), (1.0, 2.0, 3.0, 4.0, 5.0));
        assert!(five_number_summary(&[]).is_err());
    }

    #[test]
    fn gain_formula() {
        assert!((relative_gain(1.198, 1.0) - 0.198).abs() < 1e-12);
        assert!((relative_gain(-4.0, -5.0) - 0.2).abs() < 1e-12);
    }

    fn push_run(log: &mut MetricsLog, method: Method, seed: u64, returns: &[f64]) {
        for (i, &ret) in returns.iter().enumerate() {
            log.push(EpisodeRecord {
                method,
                task_id: 3,
                seed,
                episode: i + 1,
                ret,
                q_avg: 0.5,
                q_min: ret / 10.0,
                q_max: 0.9,
            });
        }
    }

    #[test]
    fn summary_of_synthetic_runs() {
        let mut log = MetricsLog::new();
        push_run(&mut log, Method::Meta, 0, &[0.0, 1.198]);
        push_run(&mut log, Method::Scratch, 0, &[0.0, 1.0]);
        push_run(&mut log, Method::Tl, 0, &[0.0, 0.5]);
        let s = summarize(&log, 1).unwrap();
        let g = s.gain.as_ref().unwrap();
        assert_eq!(g.baseline, Method::Scratch);
        assert!((g.gain - 0.198).abs() < 1e-12);
        assert!(s.method(Method::Meta).unwrap().single_seed);
        assert_eq!(s.method(Method::Meta).unwrap().std, 0.0);
        assert!(s.warnings.iter().any(|w| w.contains("mtl")));
        assert_eq!(s.adaptation[&2][&Method::Tl], 0.5);
        let text = s.to_string();
        assert!(text.contains("+19.80%"));
    }

    #[test]
    fn summary_across_seeds() {
        let mut log = MetricsLog::new();
        push_run(&mut log, Method::Meta, 0, &[9.0, 1.0, 3.0]);
        push_run(&mut log, Method::Meta, 1, &[9.0, 3.0, 5.0]);
        let s = summarize(&log, 2).unwrap();
        let m = s.method(Method::Meta).unwrap();
        assert_eq!(m.per_seed, vec![(0, 2.0), (1, 4.0)]);
        assert_eq!(m.mean, 3.0);
        assert!((m.std - 2f64.sqrt()).abs() < 1e-12);
        assert!(!m.single_seed);
        assert!(s.gain.is_none());
        assert_eq!(s.adaptation[&1][&Method::Meta], 9.0);
    }
}
