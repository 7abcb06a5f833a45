use super::channel::ChannelRealization;
use super::config::CellConfig;
use super::snapshot::EnvSnapshot;
use crate::error::{Error, Result};

/// A concrete allocation: which UE holds which RB, and the power on each RB.
///
/// `rb_indicator` is the binary matrix e, row-major `[ue * num_rbs + rb]`.
/// `rb_requested` keeps each UE's pre-truncation request so that penalties can
/// see infeasible demands. `ue_power` is the per-UE power level chosen by the
/// agent; every RB the UE holds carries it in `rb_power`.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationAction {
    pub num_ues: usize,
    pub num_rbs: usize,
    pub rb_indicator: Vec<bool>,
    pub rb_requested: Vec<usize>,
    pub rb_power: Vec<f64>,
    pub ue_power: Vec<f64>,
}

impl AllocationAction {
    /// No RBs assigned and every UE at `p_min`.
    pub fn empty(config: &CellConfig) -> Self {
        let (n, k) = (config.num_ues, config.num_rbs);
        Self {
            num_ues: n,
            num_rbs: k,
            rb_indicator: vec![false; n * k],
            rb_requested: vec![0; n],
            rb_power: vec![0.0; k],
            ue_power: vec![config.p_min_mw; n],
        }
    }

    pub fn assigned(&self, u: usize, k: usize) -> bool {
        self.rb_indicator[u * self.num_rbs + k]
    }

    /// RBs physically held by each UE.
    pub fn assigned_counts(&self) -> Vec<usize> {
        (0..self.num_ues)
            .map(|u| (0..self.num_rbs).filter(|&k| self.assigned(u, k)).count())
            .collect()
    }

    pub fn total_assigned(&self) -> usize {
        self.rb_indicator.iter().filter(|&&e| e).count()
    }

    pub fn owner(&self, k: usize) -> Option<usize> {
        (0..self.num_ues).find(|&u| self.assigned(u, k))
    }

    /// Checks the physical constraints: single-owner RBs, at most `num_rbs`
    /// assignments, powers in `[p_min, p_max]` on used RBs and 0 elsewhere.
    pub fn check_feasible(&self, config: &CellConfig) -> Result<()> {
        let (n, k) = (config.num_ues, config.num_rbs);
        if self.num_ues != n || self.num_rbs != k || self.rb_indicator.len() != n * k || self.rb_power.len() != k {
            return Err(Error::contract(format!(
                "allocation shape {}x{} does not match cell {}x{}",
                self.num_ues, self.num_rbs, n, k
            )));
        }
        if self.rb_requested.len() != n || self.ue_power.len() != n {
            return Err(Error::contract("per-UE vectors have the wrong length"));
        }
        for rb in 0..k {
            let owners = (0..n).filter(|&u| self.assigned(u, rb)).count();
            let p = self.rb_power[rb];
            match owners {
                0 if p != 0.0 => {
                    return Err(Error::contract(format!("unassigned RB {rb} carries power {p}")));
                }
                0 => {}
                1 if !(config.p_min_mw..=config.p_max_mw).contains(&p) => {
                    return Err(Error::contract(format!("RB {rb} power {p} mW outside limits")));
                }
                1 => {}
                _ => return Err(Error::contract(format!("RB {rb} assigned to {owners} UEs"))),
            }
        }
        if self.total_assigned() > k {
            return Err(Error::contract("more RBs assigned than available"));
        }
        Ok(())
    }
}

/// Outcome of one scheduling step.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    /// Achievable rate of each UE in bits/s.
    pub per_ue_rate: Vec<f64>,
    /// Minimum rate over active UEs; `None` when every UE is idle.
    pub min_rate: Option<f64>,
    /// Interference power in mW, row-major `[ue * num_rbs + rb]`.
    pub interference: Vec<f64>,
    pub sinr: Vec<f64>,
    pub active: Vec<bool>,
}

impl RateReport {
    pub fn active_rates(&self) -> impl Iterator<Item = f64> + '_ {
        self.per_ue_rate
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(&r, _)| r)
    }
}

/// Shannon rate of each UE summed over its RBs, with path loss, Rayleigh gain
/// and background interference from neighbouring RUs on the same RB.
pub fn compute_rates(
    alloc: &AllocationAction,
    ch: &ChannelRealization,
    snap: &EnvSnapshot,
    config: &CellConfig,
) -> Result<RateReport> {
    alloc.check_feasible(config)?;
    let (n, k) = (config.num_ues, config.num_rbs);
    if snap.num_ues() != n || ch.num_ues != n || ch.num_rbs != k {
        return Err(Error::contract("snapshot or channel shape does not match the cell"));
    }
    if ch.neighbor_gain.len() != ch.neighbor_power.len() {
        return Err(Error::contract("neighbour gain/power count mismatch"));
    }
    let active = snap.active_mask();
    for u in 0..n {
        if !active[u] && (0..k).any(|rb| alloc.assigned(u, rb)) {
            return Err(Error::contract(format!("idle UE {u} holds RBs")));
        }
    }

    let eta = config.path_loss_exp;
    let noise = config.noise_per_rb_mw();
    let neighbors = config.neighbor_positions();
    if neighbors.len() != ch.neighbor_gain.len() {
        return Err(Error::contract("channel neighbour count does not match the cell"));
    }

    let mut interference = vec![0.0; n * k];
    let mut sinr = vec![0.0; n * k];
    let mut per_ue_rate = vec![0.0; n];
    for u in 0..n {
        let serving_loss = snap.distance(u, [0.0, 0.0]).powf(-eta);
        let neighbor_loss: Vec<f64> = neighbors.iter().map(|&at| snap.distance(u, at).powf(-eta)).collect();
        for rb in 0..k {
            let idx = u * k + rb;
            let i_uk: f64 = neighbor_loss
                .iter()
                .zip(ch.neighbor_gain.iter().zip(&ch.neighbor_power))
                .map(|(loss, (g, p))| p[rb] * loss * g[idx])
                .sum();
            interference[idx] = i_uk;
            let signal = alloc.rb_power[rb] * serving_loss * ch.gain[idx];
            sinr[idx] = signal / (i_uk + noise);
            if alloc.rb_indicator[idx] {
                per_ue_rate[u] += config.rb_bandwidth_hz * (1.0 + sinr[idx]).log2();
            }
        }
    }

    let min_rate = per_ue_rate
        .iter()
        .zip(&active)
        .filter(|(_, &a)| a)
        .map(|(&r, _)| r)
        .reduce(f64::min);
    Ok(RateReport {
        per_ue_rate,
        min_rate,
        interference,
        sinr,
        active,
    })
}
