//! Parameter snapshot files.
//!
//! A snapshot is a JSON object:
//!
//! ```text
//! {
//!   "format": "oran-meta/dense-network",
//!   "version": 1,
//!   "layer_sizes": [13, 64, 64, 10],
//!   "hidden": "tanh",
//!   "output": "tanh",
//!   "params": [ ... ]          // flat, canonical order
//! }
//! ```
//!
//! Floats are written in shortest round-trip form, so loading restores the
//! parameters bit for bit.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::network::{Activation, DenseNetwork};
use crate::error::{Error, Result};

pub const SNAPSHOT_FORMAT: &str = "oran-meta/dense-network";
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSnapshot {
    pub format: String,
    pub version: u32,
    pub layer_sizes: Vec<usize>,
    pub hidden: Activation,
    pub output: Activation,
    pub params: Vec<f64>,
}

impl From<&DenseNetwork> for NetworkSnapshot {
    fn from(net: &DenseNetwork) -> Self {
        Self {
            format: SNAPSHOT_FORMAT.to_string(),
            version: SNAPSHOT_VERSION,
            layer_sizes: net.layer_sizes().to_vec(),
            hidden: net.hidden_activation(),
            output: net.output_activation(),
            params: net.params_as_vector(),
        }
    }
}

impl TryFrom<&NetworkSnapshot> for DenseNetwork {
    type Error = Error;

    fn try_from(snap: &NetworkSnapshot) -> Result<Self> {
        if snap.format != SNAPSHOT_FORMAT {
            return Err(Error::Parse(format!("unexpected snapshot format `{}`", snap.format)));
        }
        if snap.version != SNAPSHOT_VERSION {
            return Err(Error::Parse(format!("unsupported snapshot version {}", snap.version)));
        }
        let mut net = DenseNetwork::zeros(&snap.layer_sizes, snap.hidden, snap.output)?;
        net.vector_as_params(&snap.params)?;
        Ok(net)
    }
}

impl DenseNetwork {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string(&NetworkSnapshot::from(self)).map_err(|e| Error::Parse(e.to_string()))?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let snap: NetworkSnapshot = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        DenseNetwork::try_from(&snap)
    }
}
