use std::f64::consts::PI;

use rand::seq::IndexedRandom;
use rand::Rng;

use super::config::CellConfig;
use super::snapshot::EnvSnapshot;
use crate::rng::SimRng;

/// The seven allowed headings. Initial headings are drawn from this set; after
/// a boundary reflection the new heading is the inward normal plus one of them.
pub const HEADING_OFFSETS: [f64; 7] = [
    -PI / 3.0,
    -PI / 6.0,
    -PI / 12.0,
    0.0,
    PI / 12.0,
    PI / 6.0,
    PI / 3.0,
];

// A step can reflect several times only when the cell is smaller than one step.
const MAX_REFLECTIONS: usize = 16;

/// Advances every UE by `speed * dt` along its heading, reflecting at the cell edge.
///
/// Speed and heading change only when a UE hits the boundary. The time index
/// is incremented by one.
pub fn step_mobility(snap: &mut EnvSnapshot, config: &CellConfig, dt: f64, rng: &mut SimRng) {
    let radius = config.cell_radius_m;
    for u in 0..snap.num_ues() {
        let mut pos = snap.positions[u];
        let mut heading = snap.directions[u];
        let mut speed = snap.speeds[u];
        let mut remaining = speed * dt;

        for _ in 0..MAX_REFLECTIONS {
            let dir = [heading.cos(), heading.sin()];
            let end = [pos[0] + remaining * dir[0], pos[1] + remaining * dir[1]];
            if end[0].hypot(end[1]) <= radius {
                pos = end;
                remaining = 0.0;
                break;
            }
            // distance along `dir` to the circle |pos + s dir| = radius
            let pd = pos[0] * dir[0] + pos[1] * dir[1];
            let c = pos[0] * pos[0] + pos[1] * pos[1] - radius * radius;
            let s = (-pd + (pd * pd - c).max(0.0).sqrt()).clamp(0.0, remaining);
            let mut hit = [pos[0] + s * dir[0], pos[1] + s * dir[1]];
            let norm = hit[0].hypot(hit[1]);
            if norm > 0.0 {
                hit = [hit[0] * radius / norm, hit[1] * radius / norm];
            }
            pos = hit;
            remaining -= s;
            heading = (-hit[1]).atan2(-hit[0]) + *HEADING_OFFSETS.choose(rng).unwrap();
            speed = rng.random_range(config.speed_min_mps..=config.speed_max_mps);
        }
        if remaining > 0.0 || pos[0].hypot(pos[1]) > radius {
            let norm = pos[0].hypot(pos[1]);
            if norm > radius {
                pos = [pos[0] * radius / norm, pos[1] * radius / norm];
            }
        }
        snap.positions[u] = pos;
        snap.directions[u] = heading;
        snap.speeds[u] = speed;
    }
    snap.time_index += 1;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{reset, TrafficLevel};
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn single_ue(pos: [f64; 2], heading: f64, speed: f64) -> EnvSnapshot {
        EnvSnapshot {
            positions: vec![pos],
            speeds: vec![speed],
            directions: vec![heading],
            traffic: vec![TrafficLevel::Low],
            time_index: 0,
        }
    }

    #[test]
    fn straight_line_motion() {
        let cfg = CellConfig::default();
        let mut snap = single_ue([0.0, 0.0], 0.0, 10.0);
        step_mobility(&mut snap, &cfg, 1.0, &mut SimRng::seed_from_u64(0));
        assert_eq!(snap.positions[0], [10.0, 0.0]);
        assert_eq!(snap.speeds[0], 10.0);
        assert_eq!(snap.directions[0], 0.0);
        assert_eq!(snap.time_index, 1);
    }

    #[test]
    fn boundary_ue_moving_outward_is_reflected_inside() {
        let cfg = CellConfig::default();
        let mut snap = single_ue([500.0, 0.0], 0.0, 20.0);
        step_mobility(&mut snap, &cfg, 1.0, &mut SimRng::seed_from_u64(3));
        let [x, y] = snap.positions[0];
        assert!(x.hypot(y) <= 500.0);
        assert!(x < 500.0);
        // new heading points inwards: within 60 degrees of -x
        let inward = snap.directions[0].cos() * -1.0;
        assert!(inward >= 0.5 - 1e-12);
        assert!((10.0..=20.0).contains(&snap.speeds[0]));
    }

    #[test]
    fn tiny_cell_survives_multiple_reflections() {
        let cfg = CellConfig { cell_radius_m: 3.0, ..Default::default() };
        let mut rng = SimRng::seed_from_u64(11);
        let mut snap = single_ue([0.0, 0.0], 0.3, 20.0);
        for _ in 0..500 {
            step_mobility(&mut snap, &cfg, 1.0, &mut rng);
            let [x, y] = snap.positions[0];
            assert!(x.hypot(y) <= 3.0 + 1e-9);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn positions_stay_in_disc(seed in any::<u64>()) {
            let cfg = CellConfig { num_ues: 10, ..Default::default() };
            let mut snap = reset(&cfg, seed).unwrap();
            let mut rng = SimRng::seed_from_u64(seed ^ 0xABCD);
            for _ in 0..1000 {
                step_mobility(&mut snap, &cfg, 1.0, &mut rng);
                for p in &snap.positions {
                    prop_assert!(p[0].hypot(p[1]) <= cfg.cell_radius_m + 1e-9);
                }
            }
        }
    }
}
