use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Static parameters of one DU/RU cell.
///
/// Powers are per resource block in mW. The serving RU sits at the origin;
/// `num_neighbors` interfering RUs sit on a ring of radius
/// `neighbor_distance_m` at evenly spaced angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellConfig {
    pub num_rbs: usize,
    pub num_ues: usize,
    pub rb_bandwidth_hz: f64,
    pub p_min_mw: f64,
    pub p_max_mw: f64,
    pub path_loss_exp: f64,
    pub noise_psd_dbm_hz: f64,
    pub cell_radius_m: f64,
    pub num_neighbors: usize,
    pub neighbor_distance_m: f64,
    pub neighbor_occupancy: f64,
    /// Informational only; rates are computed per RB.
    pub subcarrier_spacing_hz: f64,
    pub speed_min_mps: f64,
    pub speed_max_mps: f64,
    /// Per-step probability that a UE switches traffic level.
    pub traffic_switch_prob: f64,
    /// When false, UEs only cycle among the non-idle levels.
    pub allow_idle: bool,
}

impl Default for CellConfig {
    fn default() -> Self {
        Self {
            num_rbs: 60,
            num_ues: 30,
            rb_bandwidth_hz: 200e3,
            p_min_mw: dbm_to_mw(3.0),
            p_max_mw: dbm_to_mw(6.0),
            path_loss_exp: 3.0,
            noise_psd_dbm_hz: -173.0,
            cell_radius_m: 500.0,
            num_neighbors: 2,
            neighbor_distance_m: 1000.0,
            neighbor_occupancy: 0.5,
            subcarrier_spacing_hz: 15e3,
            speed_min_mps: 10.0,
            speed_max_mps: 20.0,
            traffic_switch_prob: 0.01,
            allow_idle: true,
        }
    }
}

impl CellConfig {
    /// Noise power over one RB in mW, integrating the PSD over the RB bandwidth.
    pub fn noise_per_rb_mw(&self) -> f64 {
        dbm_to_mw(self.noise_psd_dbm_hz + 10.0 * self.rb_bandwidth_hz.log10())
    }

    pub fn neighbor_positions(&self) -> Vec<[f64; 2]> {
        (0..self.num_neighbors)
            .map(|j| {
                let angle = std::f64::consts::TAU * j as f64 / self.num_neighbors as f64;
                [
                    self.neighbor_distance_m * angle.cos(),
                    self.neighbor_distance_m * angle.sin(),
                ]
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_at("cell")
    }

    /// Validates and reports failing fields under the dotted `prefix`.
    pub fn validate_at(&self, prefix: &str) -> Result<()> {
        let err = |field: &str, reason: &str| Err(Error::config(format!("{prefix}.{field}"), reason));
        let finite = [
            ("rb_bandwidth_hz", self.rb_bandwidth_hz),
            ("p_min_mw", self.p_min_mw),
            ("p_max_mw", self.p_max_mw),
            ("path_loss_exp", self.path_loss_exp),
            ("noise_psd_dbm_hz", self.noise_psd_dbm_hz),
            ("cell_radius_m", self.cell_radius_m),
            ("neighbor_distance_m", self.neighbor_distance_m),
            ("speed_min_mps", self.speed_min_mps),
            ("speed_max_mps", self.speed_max_mps),
        ];
        for (field, value) in finite {
            if !value.is_finite() {
                return err(field, "must be finite");
            }
        }
        if self.num_rbs == 0 {
            return err("num_rbs", "must be positive");
        }
        if self.num_ues == 0 {
            return err("num_ues", "must be positive");
        }
        if self.rb_bandwidth_hz <= 0.0 {
            return err("rb_bandwidth_hz", "must be positive");
        }
        if self.p_min_mw <= 0.0 {
            return err("p_min_mw", "must be positive");
        }
        if self.p_min_mw > self.p_max_mw {
            return err("p_min_mw", "must not exceed p_max_mw");
        }
        if self.path_loss_exp <= 0.0 {
            return err("path_loss_exp", "must be positive");
        }
        if self.cell_radius_m <= 0.0 {
            return err("cell_radius_m", "must be positive");
        }
        if self.neighbor_distance_m <= 0.0 {
            return err("neighbor_distance_m", "must be positive");
        }
        if !(0.0..=1.0).contains(&self.neighbor_occupancy) {
            return err("neighbor_occupancy", "must be a probability in [0, 1]");
        }
        if self.speed_min_mps < 0.0 || self.speed_min_mps > self.speed_max_mps {
            return err("speed_min_mps", "must satisfy 0 <= speed_min_mps <= speed_max_mps");
        }
        if !(0.0..=1.0).contains(&self.traffic_switch_prob) {
            return err("traffic_switch_prob", "must be a probability in [0, 1]");
        }
        Ok(())
    }
}
