use crate::error::{Error, Result};
use crate::sim::{AllocationAction, CellConfig};

/// Maps a raw actor output onto a feasible allocation.
///
/// The first `N` entries are RB requests, `round((x+1)/2 * K)`; the next `N`
/// are power levels, `p_min + (x+1)/2 * (p_max - p_min)`. RBs are handed out
/// first-fit in ascending UE order until the cell runs out, so the physical
/// assignment always satisfies the RB budget. Idle UEs request nothing.
pub fn decode_action(raw: &[f64], active: &[bool], config: &CellConfig) -> Result<AllocationAction> {
    let (n, k) = (config.num_ues, config.num_rbs);
    if raw.len() != 2 * n {
        return Err(Error::contract(format!("raw action has length {}, expected {}", raw.len(), 2 * n)));
    }
    if active.len() != n {
        return Err(Error::contract("activity mask length differs from UE count"));
    }
    if raw.iter().any(|x| x.is_nan()) {
        return Err(Error::contract("raw action contains NaN"));
    }
    let unit = |x: f64| (x.clamp(-1.0, 1.0) + 1.0) / 2.0;

    let mut alloc = AllocationAction::empty(config);
    let span = config.p_max_mw - config.p_min_mw;
    let mut next_rb = 0usize;
    for u in 0..n {
        alloc.ue_power[u] = (config.p_min_mw + unit(raw[n + u]) * span).clamp(config.p_min_mw, config.p_max_mw);
        if !active[u] {
            continue;
        }
        let requested = (unit(raw[u]) * k as f64).round() as usize;
        alloc.rb_requested[u] = requested;
        let granted = requested.min(k - next_rb);
        for rb in next_rb..next_rb + granted {
            alloc.rb_indicator[u * k + rb] = true;
            alloc.rb_power[rb] = alloc.ue_power[u];
        }
        next_rb += granted;
    }
    Ok(alloc)
}

/// Normalized penalty arguments fed to the reward sigmoids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Penalties {
    /// Consumed power over the physical assignment, divided by `K * p_max`.
    pub power: f64,
    /// Requested RBs beyond the budget, divided by `K`.
    pub rb_excess: f64,
}

pub fn compute_penalties(alloc: &AllocationAction, config: &CellConfig) -> Penalties {
    let k = config.num_rbs as f64;
    let consumed: f64 = (0..alloc.num_rbs)
        .filter(|&rb| alloc.owner(rb).is_some())
        .map(|rb| alloc.rb_power[rb])
        .sum();
    let requested: usize = alloc.rb_requested.iter().sum();
    Penalties {
        power: consumed / (k * config.p_max_mw),
        rb_excess: requested.saturating_sub(config.num_rbs) as f64 / k,
    }
}
