use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::config::CellConfig;
use super::mobility::HEADING_OFFSETS;
use crate::error::Result;
use crate::rng::SimRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrafficLevel {
    Idle,
    Low,
    Mid,
    High,
}

impl TrafficLevel {
    pub const ALL: [TrafficLevel; 4] = [
        TrafficLevel::Idle,
        TrafficLevel::Low,
        TrafficLevel::Mid,
        TrafficLevel::High,
    ];
    pub const ACTIVE: [TrafficLevel; 3] = [TrafficLevel::Low, TrafficLevel::Mid, TrafficLevel::High];

    /// Idle UEs are not scheduled and do not count towards QoS statistics.
    pub fn is_active(self) -> bool {
        self != TrafficLevel::Idle
    }

    fn allowed(config: &CellConfig) -> &'static [TrafficLevel] {
        if config.allow_idle {
            &Self::ALL
        } else {
            &Self::ACTIVE
        }
    }
}

/// Dynamic world state of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvSnapshot {
    pub positions: Vec<[f64; 2]>,
    pub speeds: Vec<f64>,
    /// Absolute heading in radians.
    pub directions: Vec<f64>,
    pub traffic: Vec<TrafficLevel>,
    pub time_index: u64,
}

impl EnvSnapshot {
    pub fn num_ues(&self) -> usize {
        self.positions.len()
    }

    pub fn active_mask(&self) -> Vec<bool> {
        self.traffic.iter().map(|t| t.is_active()).collect()
    }

    /// Distance from UE `u` to the point `at`, floored at 1 m.
    pub fn distance(&self, u: usize, at: [f64; 2]) -> f64 {
        let [x, y] = self.positions[u];
        (x - at[0]).hypot(y - at[1]).max(1.0)
    }
}

/// Places UEs for a fresh episode; deterministic in `seed`.
pub fn reset(config: &CellConfig, seed: u64) -> Result<EnvSnapshot> {
    reset_with(config, &mut SimRng::seed_from_u64(seed))
}

pub fn reset_with(config: &CellConfig, rng: &mut SimRng) -> Result<EnvSnapshot> {
    config.validate()?;
    let n = config.num_ues;
    let mut snap = EnvSnapshot {
        positions: Vec::with_capacity(n),
        speeds: Vec::with_capacity(n),
        directions: Vec::with_capacity(n),
        traffic: Vec::with_capacity(n),
        time_index: 0,
    };
    let levels = TrafficLevel::allowed(config);
    for _ in 0..n {
        // sqrt keeps the density uniform over the disc area
        let r = config.cell_radius_m * rng.random::<f64>().sqrt();
        let phi = std::f64::consts::TAU * rng.random::<f64>();
        snap.positions.push([r * phi.cos(), r * phi.sin()]);
        snap.speeds
            .push(rng.random_range(config.speed_min_mps..=config.speed_max_mps));
        snap.directions.push(*HEADING_OFFSETS.choose(rng).unwrap());
        snap.traffic.push(*levels.choose(rng).unwrap());
    }
    Ok(snap)
}

/// Each UE independently moves to a uniformly chosen *other* level with
/// probability `config.traffic_switch_prob`.
pub fn step_traffic(snap: &mut EnvSnapshot, config: &CellConfig, rng: &mut SimRng) {
    let levels = TrafficLevel::allowed(config);
    for level in snap.traffic.iter_mut() {
        if rng.random::<f64>() < config.traffic_switch_prob {
            let others: Vec<TrafficLevel> = levels.iter().copied().filter(|l| l != level).collect();
            if let Some(next) = others.choose(rng) {
                *level = *next;
            }
        }
    }
}
