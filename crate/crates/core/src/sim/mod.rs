//! Single-cell downlink simulator: geometry, UE mobility, traffic states,
//! Rayleigh fading with background inter-cell interference, and per-UE rates.

mod channel;
mod config;
mod mobility;
mod rates;
mod snapshot;

pub use channel::{sample_channel, ChannelRealization};
pub use config::{dbm_to_mw, CellConfig};
pub use mobility::{step_mobility, HEADING_OFFSETS};
pub use rates::{compute_rates, AllocationAction, RateReport};
pub use snapshot::{reset, reset_with, step_traffic, EnvSnapshot, TrafficLevel};
