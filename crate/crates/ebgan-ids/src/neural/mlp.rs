//! Batched multilayer perceptron with LeakyReLU between hidden layers
//! and hand-written backpropagation.
//!
//! Rows are samples, columns are features. A layer stores its weight as
//! an `out × in` matrix, so the batched affine map is
//! `Z = X · (W / σ̂)ᵀ + b`, where `σ̂` is the stored spectral-norm
//! estimate (1 when spectral normalization is disabled). The estimate is
//! held constant within a training step: gradients are taken with respect
//! to `W` at fixed `σ̂`, never through the power iteration that produced
//! it.

use ndarray::{Array1, Array2, Axis};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

#[inline]
pub(crate) fn leaky_relu(z: f64, slope: f64) -> f64 {
    if z > 0.0 {
        z
    } else {
        slope * z
    }
}

#[inline]
pub(crate) fn leaky_relu_grad(z: f64, slope: f64) -> f64 {
    if z > 0.0 {
        1.0
    } else {
        slope
    }
}

/// Persistent spectral-normalization state for one layer.
#[derive(Debug, Clone, PartialEq)]
pub struct SnState {
    /// Left-singular-vector estimate, unit norm, length = out dimension.
    pub u: Array1<f64>,
    /// Spectral-norm estimate currently used by forward/backward.
    pub sigma: f64,
    /// Set when the weight was effectively zero at the last update; the
    /// layer then behaves as if unnormalized (σ̂ treated as 1).
    pub degenerate: bool,
}

/// Fully-connected layer `x ↦ (W/σ̂)·x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineLayer {
    /// `out × in` weight matrix.
    pub weight: Array2<f64>,
    pub bias: Array1<f64>,
    pub sn: Option<SnState>,
}

impl AffineLayer {
    /// Glorot-uniform initialization: entries drawn from
    /// ±√(6 / (fan_in + fan_out)), bias zero.
    pub fn glorot(in_dim: usize, out_dim: usize, rng: &mut impl Rng) -> Self {
        assert!(in_dim > 0 && out_dim > 0, "layer dimensions must be positive");
        let limit = (6.0 / (in_dim + out_dim) as f64).sqrt();
        let weight = Array2::from_shape_fn((out_dim, in_dim), |_| rng.random_range(-limit..limit));
        Self {
            weight,
            bias: Array1::zeros(out_dim),
            sn: None,
        }
    }

    pub fn from_parts(weight: Array2<f64>, bias: Array1<f64>) -> Self {
        assert_eq!(weight.nrows(), bias.len(), "bias length must match rows");
        Self {
            weight,
            bias,
            sn: None,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.weight.ncols()
    }

    pub fn out_dim(&self) -> usize {
        self.weight.nrows()
    }

    /// Attach spectral normalization with a random unit `u` and σ̂ = 1.
    /// The first power iteration replaces the neutral estimate.
    pub fn enable_spectral_norm(&mut self, rng: &mut impl Rng) {
        let mut u = Array1::from_shape_fn(self.out_dim(), |_| -> f64 {
            StandardNormal.sample(rng)
        });
        let norm = u.dot(&u).sqrt();
        if norm > 0.0 {
            u /= norm;
        } else {
            u[0] = 1.0;
        }
        self.sn = Some(SnState {
            u,
            sigma: 1.0,
            degenerate: false,
        });
    }

    /// σ̂ used by forward/backward: the stored estimate, or 1 when
    /// spectral normalization is disabled or degenerate.
    pub fn sigma(&self) -> f64 {
        match &self.sn {
            Some(sn) if !sn.degenerate => sn.sigma,
            _ => 1.0,
        }
    }

    /// The weight actually applied by forward: `W / σ̂`.
    pub fn effective_weight(&self) -> Array2<f64> {
        &self.weight / self.sigma()
    }
}

/// Intermediates retained by [`Mlp::forward`] for backpropagation.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    /// `inputs[l]`: the batch fed into layer `l` (`inputs[0]` is the input).
    inputs: Vec<Array2<f64>>,
    /// `pre_acts[l]`: affine output of layer `l` before activation.
    pre_acts: Vec<Array2<f64>>,
}

impl ForwardCache {
    pub fn batch_size(&self) -> usize {
        self.inputs[0].nrows()
    }
}

/// Gradient of a scalar loss for one layer's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerGradient {
    pub weight: Array2<f64>,
    pub bias: Array1<f64>,
}

/// Gradients for every trainable parameter plus the input gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGradients {
    /// One entry per layer, in forward order.
    pub layers: Vec<LayerGradient>,
    /// ∂loss/∂input, same shape as the forward input batch.
    pub input: Array2<f64>,
}

impl MlpGradients {
    /// Elementwise `self += other`, for accumulating loss terms.
    pub fn add_assign(&mut self, other: &MlpGradients) {
        assert_eq!(self.layers.len(), other.layers.len(), "layer count mismatch");
        for (a, b) in self.layers.iter_mut().zip(&other.layers) {
            a.weight += &b.weight;
            a.bias += &b.bias;
        }
        self.input += &other.input;
    }

    /// Multiply every gradient (including the input gradient) by `c`.
    pub fn scale(&mut self, c: f64) {
        for g in &mut self.layers {
            g.weight *= c;
            g.bias *= c;
        }
        self.input *= c;
    }
}

/// Ordered affine layers with LeakyReLU between all but the last layer;
/// the last layer is linear.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub layers: Vec<AffineLayer>,
    /// LeakyReLU negative slope shared by all hidden activations.
    pub slope: f64,
}

impl Mlp {
    /// Build a Glorot-initialized net with the given layer widths, e.g.
    /// `&[121, 512, 256, 100]` for a three-layer encoder.
    pub fn new(dims: &[usize], slope: f64, rng: &mut impl Rng) -> Self {
        assert!(dims.len() >= 2, "an MLP needs at least one layer");
        let layers = dims
            .windows(2)
            .map(|w| AffineLayer::glorot(w[0], w[1], rng))
            .collect();
        Self { layers, slope }
    }

    /// Assemble from explicit layers, checking that dimensions chain.
    pub fn from_layers(layers: Vec<AffineLayer>, slope: f64) -> Self {
        assert!(!layers.is_empty(), "an MLP needs at least one layer");
        for pair in layers.windows(2) {
            assert_eq!(
                pair[0].out_dim(),
                pair[1].in_dim(),
                "consecutive layer dimensions must chain"
            );
        }
        Self { layers, slope }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().out_dim()
    }

    pub fn parameter_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weight.len() + l.bias.len())
            .sum()
    }

    /// Batched forward pass.
    ///
    /// # Panics
    /// Panics if `x` has a column count different from the input width.
    pub fn forward(&self, x: &Array2<f64>) -> (Array2<f64>, ForwardCache) {
        assert_eq!(
            x.ncols(),
            self.input_dim(),
            "input width does not match the first layer"
        );
        let last = self.layers.len() - 1;
        let mut inputs = Vec::with_capacity(self.layers.len());
        let mut pre_acts = Vec::with_capacity(self.layers.len());
        let mut a = x.clone();
        for (l, layer) in self.layers.iter().enumerate() {
            let z = a.dot(&layer.weight.t()) / layer.sigma() + &layer.bias;
            inputs.push(a);
            a = if l == last {
                z.clone()
            } else {
                z.mapv(|v| leaky_relu(v, self.slope))
            };
            pre_acts.push(z);
        }
        (a, ForwardCache { inputs, pre_acts })
    }

    /// Forward pass without retaining intermediates.
    pub fn infer(&self, x: &Array2<f64>) -> Array2<f64> {
        self.forward(x).0
    }

    /// Backpropagate `upstream = ∂loss/∂output` through the cached pass.
    ///
    /// # Panics
    /// Panics if the cache does not belong to this net or `upstream` has
    /// the wrong shape.
    pub fn backward(&self, cache: &ForwardCache, upstream: &Array2<f64>) -> MlpGradients {
        assert_eq!(
            cache.inputs.len(),
            self.layers.len(),
            "cache does not match this net"
        );
        assert_eq!(upstream.nrows(), cache.batch_size(), "batch size mismatch");
        assert_eq!(
            upstream.ncols(),
            self.output_dim(),
            "upstream width does not match the output layer"
        );

        let mut grads: Vec<Option<LayerGradient>> = (0..self.layers.len()).map(|_| None).collect();
        // delta = ∂loss/∂(pre-activation of layer l)
        let mut delta = upstream.clone();
        let mut input_grad = None;
        for l in (0..self.layers.len()).rev() {
            let layer = &self.layers[l];
            assert_eq!(
                cache.inputs[l].ncols(),
                layer.in_dim(),
                "cache does not match this net"
            );
            let sigma = layer.sigma();
            let weight = delta.t().dot(&cache.inputs[l]) / sigma;
            let bias = delta.sum_axis(Axis(0));
            let dx = delta.dot(&layer.weight) / sigma;
            grads[l] = Some(LayerGradient { weight, bias });
            if l == 0 {
                input_grad = Some(dx);
            } else {
                let gate = cache.pre_acts[l - 1].mapv(|z| leaky_relu_grad(z, self.slope));
                delta = dx * gate;
            }
        }
        MlpGradients {
            layers: grads.into_iter().map(Option::unwrap).collect(),
            input: input_grad.unwrap(),
        }
    }

    /// A zero-filled gradient bundle shaped like this net, for `batch`
    /// input rows.
    pub fn zero_gradients(&self, batch: usize) -> MlpGradients {
        MlpGradients {
            layers: self
                .layers
                .iter()
                .map(|l| LayerGradient {
                    weight: Array2::zeros(l.weight.raw_dim()),
                    bias: Array1::zeros(l.bias.raw_dim()),
                })
                .collect(),
            input: Array2::zeros((batch, self.input_dim())),
        }
    }
}
