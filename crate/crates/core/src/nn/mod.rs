//! Dense tanh networks with exact reverse-mode gradients and Adam.
//!
//! Parameters live in one flat vector in a fixed canonical order: for each
//! layer, the weight matrix (row-major, `out x in`) followed by the bias. The
//! same order is used for gradients, optimizer moments, snapshots and the
//! meta-parameter exchange.

mod adam;
mod network;
mod snapshot;

pub use adam::{AdamConfig, AdamState};
pub use network::{soft_update, Activation, DenseNetwork, Gradients, Tape};
pub use snapshot::{NetworkSnapshot, SNAPSHOT_FORMAT, SNAPSHOT_VERSION};
