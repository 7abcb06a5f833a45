use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamConfig {
    pub fn with_lr(lr: f64) -> Self {
        Self {
            lr,
            ..Self::default()
        }
    }
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            lr: 1e-4,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Bias-corrected Adam moments for a flat parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub config: AdamConfig,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub step_count: u64,
}

impl AdamState {
    pub fn new(num_params: usize, config: AdamConfig) -> Self {
        Self {
            config,
            m: vec![0.0; num_params],
            v: vec![0.0; num_params],
            step_count: 0,
        }
    }

    /// Clears the moments and the step counter, keeping the hyperparameters.
    pub fn reset(&mut self) {
        self.m.iter_mut().for_each(|x| *x = 0.0);
        self.v.iter_mut().for_each(|x| *x = 0.0);
        self.step_count = 0;
    }

    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) -> Result<()> {
        if params.len() != self.m.len() || grads.len() != self.m.len() {
            return Err(Error::contract(format!(
                "adam state has {} slots, got {} params and {} grads",
                self.m.len(),
                params.len(),
                grads.len()
            )));
        }
        let AdamConfig {
            lr,
            beta1,
            beta2,
            epsilon,
        } = self.config;
        self.step_count += 1;
        let t = self.step_count as f64;
        let c1 = 1.0 - beta1.powf(t);
        let c2 = 1.0 - beta2.powf(t);
        for (((p, &g), m), v) in params.iter_mut().zip(grads).zip(&mut self.m).zip(&mut self.v) {
            *m = beta1 * *m + (1.0 - beta1) * g;
            *v = beta2 * *v + (1.0 - beta2) * g * g;
            let m_hat = *m / c1;
            let v_hat = *v / c2;
            *p -= lr * m_hat / (v_hat.sqrt() + epsilon);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_matches_hand_formula() {
        let mut state = AdamState::new(1, AdamConfig::with_lr(1e-4));
        let mut theta = [0.0];
        state.step(&mut theta, &[1.0]).unwrap();
        // m_hat = v_hat = 1  =>  theta = -lr / (1 + eps)
        assert!((theta[0] - (-1e-4 / (1.0 + 1e-8))).abs() < 1e-12);
        assert!((theta[0] + 9.9999999e-5).abs() < 1e-12);
        assert_eq!(state.step_count, 1);
    }

    #[test]
    fn zero_gradient_leaves_params_and_decays_moments() {
        let mut state = AdamState::new(2, AdamConfig::default());
        let mut theta = [1.0, -1.0];
        state.step(&mut theta, &[0.5, -0.5]).unwrap();
        let (after, m, v) = (theta, state.m.clone(), state.v.clone());
        state.step(&mut theta, &[0.0, 0.0]).unwrap();
        for i in 0..2 {
            assert!((state.m[i] - 0.9 * m[i]).abs() < 1e-15);
            assert!((state.v[i] - 0.999 * v[i]).abs() < 1e-15);
        }
        // with nonzero momentum the parameters still move; from a clean state they must not
        let mut fresh = AdamState::new(2, AdamConfig::default());
        let mut still = after;
        fresh.step(&mut still, &[0.0, 0.0]).unwrap();
        assert_eq!(still, after);
    }

    #[test]
    fn two_steps_differ_from_one_doubled_step() {
        let mut a = AdamState::new(1, AdamConfig::with_lr(1e-2));
        let mut ta = [0.3];
        a.step(&mut ta, &[0.8]).unwrap();
        a.step(&mut ta, &[0.8]).unwrap();
        let mut b = AdamState::new(1, AdamConfig::with_lr(2e-2));
        let mut tb = [0.3];
        b.step(&mut tb, &[0.8]).unwrap();
        assert_ne!(ta[0], tb[0]);
    }

    #[test]
    fn zero_betas_reduce_to_sign_descent() {
        let cfg = AdamConfig {
            lr: 0.05,
            beta1: 0.0,
            beta2: 0.0,
            epsilon: 1e-300,
        };
        for g in [3.0, -0.25, 1e-3, -42.0] {
            let mut state = AdamState::new(1, cfg);
            let mut theta = [1.5];
            state.step(&mut theta, &[g]).unwrap();
            assert!((theta[0] - (1.5 - 0.05 * g / f64::abs(g))).abs() < 1e-9);
        }
    }

    #[test]
    fn shape_mismatch_rejected() {
        let mut state = AdamState::new(2, AdamConfig::default());
        assert!(matches!(state.step(&mut [0.0; 3], &[0.0; 3]), Err(Error::Contract(_))));
    }
}
