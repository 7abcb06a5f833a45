use std::sync::atomic::{AtomicU64, Ordering};

use ndarray::linalg::general_mat_mul;
use ndarray::{Array2, ArrayView1, ArrayView2, ArrayViewMut2, Axis};
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::adam::AdamState;
use crate::error::{Error, Result};
use crate::rng::SimRng;

static NEXT_VERSION: AtomicU64 = AtomicU64::new(1);

fn fresh_version() -> u64 {
    NEXT_VERSION.fetch_add(1, Ordering::Relaxed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Tanh,
    Identity,
}

impl Activation {
    fn apply(self, z: &mut Array2<f64>) {
        if self == Activation::Tanh {
            z.mapv_inplace(f64::tanh);
        }
    }

    /// Multiplies `grad` by the derivative, given the activation output `out`.
    fn backprop(self, grad: &mut Array2<f64>, out: &Array2<f64>) {
        if self == Activation::Tanh {
            grad.zip_mut_with(out, |g, &y| *g *= 1.0 - y * y);
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Layer {
    inputs: usize,
    outputs: usize,
    offset: usize,
}

impl Layer {
    fn weight_len(&self) -> usize {
        self.inputs * self.outputs
    }

    fn bias_offset(&self) -> usize {
        self.offset + self.weight_len()
    }

    fn len(&self) -> usize {
        self.weight_len() + self.outputs
    }
}

/// A chain of affine layers with a shared hidden activation and its own
/// output activation.
#[derive(Debug, Clone)]
pub struct DenseNetwork {
    sizes: Vec<usize>,
    layers: Vec<Layer>,
    hidden: Activation,
    output: Activation,
    params: Vec<f64>,
    version: u64,
}

/// Activations recorded by a forward pass, consumed by [`DenseNetwork::backward`].
#[derive(Debug, Clone)]
pub struct Tape {
    version: u64,
    activations: Vec<Array2<f64>>,
}

impl Tape {
    pub fn output(&self) -> &Array2<f64> {
        self.activations.last().expect("tape holds at least the input")
    }
}

#[derive(Debug, Clone)]
pub struct Gradients {
    /// Gradient w.r.t. the flat parameter vector.
    pub params: Vec<f64>,
    /// Gradient w.r.t. the batch input, `batch x inputs`.
    pub input: Array2<f64>,
}

impl DenseNetwork {
    /// Number of parameters of a network with the given layer sizes.
    pub fn param_count(sizes: &[usize]) -> usize {
        sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
    }

    /// All parameters zero.
    pub fn zeros(sizes: &[usize], hidden: Activation, output: Activation) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(Error::config("network.layer_sizes", "need at least an input and an output layer"));
        }
        if sizes.contains(&0) {
            return Err(Error::config("network.layer_sizes", "layer sizes must be positive"));
        }
        let mut layers = Vec::with_capacity(sizes.len() - 1);
        let mut offset = 0;
        for w in sizes.windows(2) {
            let layer = Layer {
                inputs: w[0],
                outputs: w[1],
                offset,
            };
            offset += layer.len();
            layers.push(layer);
        }
        Ok(Self {
            sizes: sizes.to_vec(),
            layers,
            hidden,
            output,
            params: vec![0.0; offset],
            version: fresh_version(),
        })
    }

    /// Weights and biases uniform in `±1/sqrt(fan_in)`, deterministic in `seed`.
    pub fn new(sizes: &[usize], hidden: Activation, output: Activation, seed: u64) -> Result<Self> {
        let mut net = Self::zeros(sizes, hidden, output)?;
        let mut rng = SimRng::seed_from_u64(seed);
        for layer in net.layers.clone() {
            let bound = 1.0 / (layer.inputs as f64).sqrt();
            for p in &mut net.params[layer.offset..layer.offset + layer.len()] {
                *p = rng.random_range(-bound..bound);
            }
        }
        Ok(net)
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn hidden_activation(&self) -> Activation {
        self.hidden
    }

    pub fn output_activation(&self) -> Activation {
        self.output
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_as_vector(&self) -> Vec<f64> {
        self.params.clone()
    }

    /// Overwrites all parameters from a flat vector in canonical order.
    pub fn vector_as_params(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.params.len() {
            return Err(Error::contract(format!(
                "parameter vector has length {}, network needs {}",
                flat.len(),
                self.params.len()
            )));
        }
        self.params.copy_from_slice(flat);
        self.version = fresh_version();
        Ok(())
    }

    /// Mutable access to the parameters. Any outstanding tape becomes stale.
    pub fn params_mut(&mut self) -> &mut [f64] {
        self.version = fresh_version();
        &mut self.params
    }

    pub fn same_shape(&self, other: &DenseNetwork) -> bool {
        self.sizes == other.sizes && self.hidden == other.hidden && self.output == other.output
    }

    fn weights(&self, layer: &Layer) -> ArrayView2<'_, f64> {
        ArrayView2::from_shape(
            (layer.outputs, layer.inputs),
            &self.params[layer.offset..layer.bias_offset()],
        )
        .expect("layer layout is consistent")
    }

    fn bias(&self, layer: &Layer) -> ArrayView1<'_, f64> {
        ArrayView1::from(&self.params[layer.bias_offset()..layer.offset + layer.len()])
    }

    fn activation(&self, index: usize) -> Activation {
        if index + 1 == self.layers.len() {
            self.output
        } else {
            self.hidden
        }
    }

    /// Forward pass over a batch (`batch x inputs`).
    pub fn forward_batch(&self, input: ArrayView2<'_, f64>) -> Result<(Array2<f64>, Tape)> {
        if input.ncols() != self.input_dim() {
            return Err(Error::contract(format!(
                "input has {} columns, network expects {}",
                input.ncols(),
                self.input_dim()
            )));
        }
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(input.to_owned());
        for (i, layer) in self.layers.iter().enumerate() {
            let prev = activations.last().unwrap();
            let mut z = prev.dot(&self.weights(layer).t());
            z += &self.bias(layer);
            self.activation(i).apply(&mut z);
            activations.push(z);
        }
        let out = activations.last().unwrap().clone();
        Ok((
            out,
            Tape {
                version: self.version,
                activations,
            },
        ))
    }

    pub fn forward(&self, input: &[f64]) -> Result<(Vec<f64>, Tape)> {
        let view = ArrayView2::from_shape((1, input.len()), input).expect("row vector");
        let (out, tape) = self.forward_batch(view)?;
        Ok((out.into_raw_vec_and_offset().0, tape))
    }

    /// Output only, without keeping a tape.
    pub fn predict(&self, input: &[f64]) -> Result<Vec<f64>> {
        self.forward(input).map(|(out, _)| out)
    }

    /// Reverse pass: gradients of `sum(output_grad ⊙ output)` with respect to
    /// parameters and inputs.
    pub fn backward(&self, tape: &Tape, output_grad: ArrayView2<'_, f64>) -> Result<Gradients> {
        if tape.version != self.version || tape.activations.len() != self.layers.len() + 1 {
            return Err(Error::contract("tape was recorded on different parameters"));
        }
        if output_grad.dim() != tape.output().dim() {
            return Err(Error::contract(format!(
                "output gradient shape {:?} differs from output shape {:?}",
                output_grad.dim(),
                tape.output().dim()
            )));
        }
        let mut grads = vec![0.0; self.params.len()];
        let mut delta = output_grad.to_owned();
        for (i, layer) in self.layers.iter().enumerate().rev() {
            self.activation(i).backprop(&mut delta, &tape.activations[i + 1]);
            let below = &tape.activations[i];
            {
                let (w_grad, b_grad) = grads[layer.offset..layer.offset + layer.len()].split_at_mut(layer.weight_len());
                let mut w_view = ArrayViewMut2::from_shape((layer.outputs, layer.inputs), w_grad).unwrap();
                general_mat_mul(1.0, &delta.t(), below, 0.0, &mut w_view);
                for (g, s) in b_grad.iter_mut().zip(delta.sum_axis(Axis(0))) {
                    *g = s;
                }
            }
            delta = delta.dot(&self.weights(layer));
        }
        Ok(Gradients {
            params: grads,
            input: delta,
        })
    }

    pub fn apply_adam(&mut self, grads: &[f64], opt: &mut AdamState) -> Result<()> {
        opt.step(&mut self.params, grads)?;
        self.version = fresh_version();
        Ok(())
    }

    /// `self ← (1 − tau)·self + tau·source`.
    pub fn soft_update_from(&mut self, source: &DenseNetwork, tau: f64) -> Result<()> {
        if !self.same_shape(source) {
            return Err(Error::contract("soft update between differently shaped networks"));
        }
        soft_update(&mut self.params, &source.params, tau)?;
        self.version = fresh_version();
        Ok(())
    }

    /// Copies parameters from a network of identical shape.
    pub fn copy_from(&mut self, source: &DenseNetwork) -> Result<()> {
        if !self.same_shape(source) {
            return Err(Error::contract("copy between differently shaped networks"));
        }
        self.vector_as_params(&source.params)
    }
}

pub fn soft_update(target: &mut [f64], source: &[f64], tau: f64) -> Result<()> {
    if target.len() != source.len() {
        return Err(Error::contract("soft update length mismatch"));
    }
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::contract(format!("tau {tau} outside [0, 1]")));
    }
    for (t, &s) in target.iter_mut().zip(source) {
        *t = (1.0 - tau) * *t + tau * s;
    }
    Ok(())
}
