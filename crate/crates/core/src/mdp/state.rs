use super::task::TaskSpec;
use crate::sim::{AllocationAction, RateReport};

/// Throughput statistics of the active UEs in bits/s.
///
/// When every UE is idle the demand is trivially met and all three equal
/// `c_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QosStats {
    pub q_avg: f64,
    pub q_min: f64,
    pub q_max: f64,
}

pub fn qos_stats(report: &RateReport, task: &TaskSpec) -> QosStats {
    let (mut sum, mut count) = (0.0, 0usize);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for r in report.active_rates() {
        sum += r;
        count += 1;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    if count == 0 {
        let cx = task.demand_max_bps;
        return QosStats { q_avg: cx, q_min: cx, q_max: cx };
    }
    QosStats {
        q_avg: sum / count as f64,
        q_min: lo,
        q_max: hi,
    }
}

/// Agent observation. QoS entries are divided by `c_x`, previous RB requests
/// by `K`, and previous powers are mapped back onto [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct MdpState {
    pub q_avg: f64,
    pub q_min: f64,
    pub q_max: f64,
    pub prev_rb_action: Vec<f64>,
    pub prev_power_action: Vec<f64>,
}

impl MdpState {
    pub fn dim(num_ues: usize) -> usize {
        3 + 2 * num_ues
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(3 + self.prev_rb_action.len() + self.prev_power_action.len());
        v.extend([self.q_avg, self.q_min, self.q_max]);
        v.extend_from_slice(&self.prev_rb_action);
        v.extend_from_slice(&self.prev_power_action);
        v
    }
}

pub fn encode_state(report: &RateReport, prev: &AllocationAction, task: &TaskSpec) -> MdpState {
    let cfg = &task.cell;
    let q = qos_stats(report, task);
    let cx = task.demand_max_bps;
    let k = cfg.num_rbs as f64;
    let span = cfg.p_max_mw - cfg.p_min_mw;
    MdpState {
        q_avg: q.q_avg / cx,
        q_min: q.q_min / cx,
        q_max: q.q_max / cx,
        prev_rb_action: prev.rb_requested.iter().map(|&r| r as f64 / k).collect(),
        prev_power_action: prev
            .ue_power
            .iter()
            .map(|&p| if span > 0.0 { 2.0 * (p - cfg.p_min_mw) / span - 1.0 } else { 0.0 })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::decode_action;
    use crate::sim::CellConfig;

    fn report(rates: Vec<f64>, active: Vec<bool>) -> RateReport {
        RateReport {
            min_rate: None,
            per_ue_rate: rates,
            interference: vec![],
            sinr: vec![],
            active,
        }
    }

    fn task(n: usize, k: usize) -> TaskSpec {
        TaskSpec::new(0, 1e6, 10e6, CellConfig { num_ues: n, num_rbs: k, ..Default::default() }).unwrap()
    }

    #[test]
    fn normalizes_qos_by_peak_demand() {
        let t = task(4, 8);
        let rep = report(vec![1e6, 2e6, 3e6, 9e9], vec![true, true, true, false]);
        let s = encode_state(&rep, &AllocationAction::empty(&t.cell), &t);
        assert!((s.q_avg - 0.2).abs() < 1e-15);
        assert!((s.q_min - 0.1).abs() < 1e-15);
        assert!((s.q_max - 0.3).abs() < 1e-15);
    }

    #[test]
    fn all_idle_reports_full_demand() {
        let t = task(2, 8);
        let s = encode_state(&report(vec![0.0, 0.0], vec![false, false]), &AllocationAction::empty(&t.cell), &t);
        assert_eq!((s.q_avg, s.q_min, s.q_max), (1.0, 1.0, 1.0));
    }

    #[test]
    fn length_is_three_plus_two_n() {
        for n in [1, 5, 30] {
            let t = task(n, 10);
            let s = encode_state(&report(vec![0.0; n], vec![true; n]), &AllocationAction::empty(&t.cell), &t);
            assert_eq!(s.to_vec().len(), 3 + 2 * n);
            assert_eq!(MdpState::dim(n), 3 + 2 * n);
        }
    }

    #[test]
    fn previous_action_round_trips_on_grid() {
        let (n, k) = (3, 10);
        let t = task(n, k);
        // requests 2, 5, 7 RBs; raw = 2 r / K - 1
        let raw = [2.0 * 2.0 / 10.0 - 1.0, 0.0, 2.0 * 7.0 / 10.0 - 1.0, -1.0, 0.5, 1.0];
        let alloc = decode_action(&raw, &[true; 3], &t.cell).unwrap();
        let s = encode_state(&report(vec![0.0; n], vec![true; n]), &alloc, &t);
        let counts: Vec<usize> = s.prev_rb_action.iter().map(|x| (x * k as f64).round() as usize).collect();
        assert_eq!(counts, alloc.rb_requested);
        for (got, want) in s.prev_power_action.iter().zip(&raw[n..]) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
