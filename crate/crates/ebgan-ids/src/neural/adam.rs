//! Bias-corrected Adam over an [`Mlp`]'s parameters.

use ndarray::{Array1, Array2, Zip};

use super::mlp::{Mlp, MlpGradients};

/// Adam hyperparameters. Defaults follow adversarial-training
/// convention: lr 0.0002, β₁ 0.5, β₂ 0.999, ε 1e-8.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 2e-4,
            beta1: 0.5,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

impl AdamConfig {
    pub fn with_learning_rate(learning_rate: f64) -> Self {
        Self {
            learning_rate,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
struct LayerMoments {
    m_weight: Array2<f64>,
    v_weight: Array2<f64>,
    m_bias: Array1<f64>,
    v_bias: Array1<f64>,
}

/// First/second-moment accumulators mirroring one net's parameters.
#[derive(Debug, Clone)]
pub struct AdamState {
    pub config: AdamConfig,
    step: u64,
    layers: Vec<LayerMoments>,
}

#[inline]
fn update_one(
    param: &mut f64,
    m: &mut f64,
    v: &mut f64,
    grad: f64,
    config: &AdamConfig,
    correction1: f64,
    correction2: f64,
) {
    *m = config.beta1 * *m + (1.0 - config.beta1) * grad;
    *v = config.beta2 * *v + (1.0 - config.beta2) * grad * grad;
    let m_hat = *m / correction1;
    let v_hat = *v / correction2;
    *param -= config.learning_rate * m_hat / (v_hat.sqrt() + config.epsilon);
}

impl AdamState {
    /// Zeroed accumulators shaped like `net`'s parameters.
    pub fn for_mlp(net: &Mlp, config: AdamConfig) -> Self {
        let layers = net
            .layers
            .iter()
            .map(|l| LayerMoments {
                m_weight: Array2::zeros(l.weight.raw_dim()),
                v_weight: Array2::zeros(l.weight.raw_dim()),
                m_bias: Array1::zeros(l.bias.raw_dim()),
                v_bias: Array1::zeros(l.bias.raw_dim()),
            })
            .collect();
        Self {
            config,
            step: 0,
            layers,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// One bias-corrected Adam update of every parameter in `net`.
    ///
    /// # Panics
    /// Panics if `net` or `grads` do not match the shapes this state was
    /// built for.
    pub fn apply(&mut self, net: &mut Mlp, grads: &MlpGradients) {
        assert_eq!(self.layers.len(), net.layers.len(), "layer count mismatch");
        assert_eq!(grads.layers.len(), net.layers.len(), "layer count mismatch");
        self.step += 1;
        let correction1 = 1.0 - self.config.beta1.powi(self.step as i32);
        let correction2 = 1.0 - self.config.beta2.powi(self.step as i32);
        let config = self.config;
        for ((layer, moments), grad) in net
            .layers
            .iter_mut()
            .zip(&mut self.layers)
            .zip(&grads.layers)
        {
            Zip::from(&mut layer.weight)
                .and(&mut moments.m_weight)
                .and(&mut moments.v_weight)
                .and(&grad.weight)
                .for_each(|p, m, v, &g| update_one(p, m, v, g, &config, correction1, correction2));
            Zip::from(&mut layer.bias)
                .and(&mut moments.m_bias)
                .and(&mut moments.v_bias)
                .and(&grad.bias)
                .for_each(|p, m, v, &g| update_one(p, m, v, g, &config, correction1, correction2));
        }
    }
}
