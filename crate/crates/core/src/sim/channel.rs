use rand::Rng;
use rand_distr::Exp1;

use super::config::CellConfig;
use super::snapshot::EnvSnapshot;
use crate::rng::SimRng;

/// One draw of small-scale fading and neighbour activity.
///
/// Gains are unit-mean exponential power gains |h|^2, stored row-major
/// `[ue * num_rbs + rb]`. `neighbor_gain[j]` is the gain from neighbour RU `j`
/// to each UE of this cell; `neighbor_power[j][rb]` is that RU's transmit power
/// on `rb` (0 when the RB is idle there).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub num_ues: usize,
    pub num_rbs: usize,
    pub gain: Vec<f64>,
    pub neighbor_gain: Vec<Vec<f64>>,
    pub neighbor_power: Vec<Vec<f64>>,
}

impl ChannelRealization {
    pub fn gain(&self, u: usize, k: usize) -> f64 {
        self.gain[u * self.num_rbs + k]
    }
}

pub fn sample_channel(snap: &EnvSnapshot, config: &CellConfig, rng: &mut SimRng) -> ChannelRealization {
    let n = snap.num_ues();
    let k = config.num_rbs;
    let draw_gains = |rng: &mut SimRng| -> Vec<f64> { (0..n * k).map(|_| rng.sample::<f64, _>(Exp1)).collect() };
    let gain = draw_gains(rng);
    let mut neighbor_gain = Vec::with_capacity(config.num_neighbors);
    let mut neighbor_power = Vec::with_capacity(config.num_neighbors);
    for _ in 0..config.num_neighbors {
        neighbor_gain.push(draw_gains(rng));
        let powers = (0..k)
            .map(|_| {
                if rng.random::<f64>() < config.neighbor_occupancy {
                    rng.random_range(config.p_min_mw..=config.p_max_mw)
                } else {
                    0.0
                }
            })
            .collect();
        neighbor_power.push(powers);
    }
    ChannelRealization {
        num_ues: n,
        num_rbs: k,
        gain,
        neighbor_gain,
        neighbor_power,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::reset;
    use rand::SeedableRng;

    #[test]
    fn gains_have_unit_mean() {
        // 10^6 exponential draws: std of the mean is 1e-3.
        let cfg = CellConfig { num_ues: 100, num_rbs: 100, num_neighbors: 0, ..Default::default() };
        let snap = reset(&cfg, 1).unwrap();
        let mut rng = SimRng::seed_from_u64(2);
        let mut sum = 0.0;
        let mut count = 0usize;
        for _ in 0..100 {
            let ch = sample_channel(&snap, &cfg, &mut rng);
            assert!(ch.gain.iter().all(|&g| g >= 0.0));
            sum += ch.gain.iter().sum::<f64>();
            count += ch.gain.len();
        }
        assert_eq!(count, 1_000_000);
        let mean = sum / count as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn unoccupied_neighbors_transmit_nothing() {
        let cfg = CellConfig { neighbor_occupancy: 0.0, num_neighbors: 3, ..Default::default() };
        let snap = reset(&cfg, 4).unwrap();
        let ch = sample_channel(&snap, &cfg, &mut SimRng::seed_from_u64(4));
        assert_eq!(ch.neighbor_power.len(), 3);
        assert!(ch.neighbor_power.iter().flatten().all(|&p| p == 0.0));
    }

    #[test]
    fn occupied_neighbor_power_within_limits() {
        let cfg = CellConfig { neighbor_occupancy: 1.0, ..Default::default() };
        let snap = reset(&cfg, 4).unwrap();
        let ch = sample_channel(&snap, &cfg, &mut SimRng::seed_from_u64(9));
        for &p in ch.neighbor_power.iter().flatten() {
            assert!(p >= cfg.p_min_mw && p <= cfg.p_max_mw);
        }
        assert!(ch.neighbor_gain.iter().flatten().all(|&g| g >= 0.0));
    }
}
