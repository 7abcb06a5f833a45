use super::action::compute_penalties;
use super::state::qos_stats;
use super::task::TaskSpec;
use crate::error::{Error, Result};
use crate::sim::{AllocationAction, RateReport};

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `sigmoid(q_norm) - sigmoid(power) - sigmoid(rb_excess)`.
pub fn reward_from_terms(q_norm: f64, power: f64, rb_excess: f64) -> f64 {
    sigmoid(q_norm) - sigmoid(power) - sigmoid(rb_excess)
}

/// Per-step reward of task `task` for the allocation that produced `report`.
pub fn compute_reward(report: &RateReport, alloc: &AllocationAction, task: &TaskSpec) -> Result<f64> {
    let band = task.demand_max_bps - task.demand_min_bps;
    if band == 0.0 {
        return Err(Error::config("task.demand_max_bps", "equals demand_min_bps"));
    }
    let q_min = qos_stats(report, task).q_min;
    let q_norm = (q_min - task.demand_min_bps) / band;
    let pen = compute_penalties(alloc, &task.cell);
    Ok(reward_from_terms(q_norm, pen.power, pen.rb_excess))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::CellConfig;
    use rand::{Rng, SeedableRng};

    fn report(rates: Vec<f64>) -> RateReport {
        let n = rates.len();
        RateReport {
            min_rate: rates.iter().copied().reduce(f64::min),
            per_ue_rate: rates,
            interference: vec![],
            sinr: vec![],
            active: vec![true; n],
        }
    }

    fn task(n: usize) -> TaskSpec {
        TaskSpec::new(0, 1e6, 10e6, CellConfig { num_ues: n, num_rbs: 10, ..Default::default() }).unwrap()
    }

    #[test]
    fn demand_floor_with_no_penalty_is_minus_half() {
        let t = task(2);
        let alloc = AllocationAction::empty(&t.cell);
        let r = compute_reward(&report(vec![1e6, 5e6]), &alloc, &t).unwrap();
        assert_eq!(r, -0.5);
    }

    #[test]
    fn saturated_qos_stays_below_one() {
        assert!(reward_from_terms(1e9, 0.0, 0.0) < 1.0);
        assert!((reward_from_terms(50.0, 0.0, 0.0) - 0.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_demand_band_is_error() {
        let mut t = task(1);
        t.demand_max_bps = t.demand_min_bps;
        let alloc = AllocationAction::empty(&t.cell);
        assert!(matches!(compute_reward(&report(vec![1.0]), &alloc, &t), Err(Error::Config { .. })));
    }

    #[test]
    fn matches_direct_formula() {
        let mut rng = crate::rng::SimRng::seed_from_u64(17);
        for _ in 0..1000 {
            let q: f64 = rng.random_range(-5.0..5.0);
            let p: f64 = rng.random_range(0.0..1.0);
            let kr: f64 = rng.random_range(0.0..5.0);
            let direct = 1.0 / (1.0 + (-q).exp()) - 1.0 / (1.0 + (-p).exp()) - 1.0 / (1.0 + (-kr).exp());
            assert!((reward_from_terms(q, p, kr) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn sigmoid_is_stable_in_the_tails() {
        assert_eq!(sigmoid(-1000.0), 0.0);
        assert_eq!(sigmoid(1000.0), 1.0);
        assert_eq!(sigmoid(0.0), 0.5);
    }
}
