//! Adversarial training of the reconstruction-energy discriminator.
//!
//! The discriminator is an autoencoder whose per-record reconstruction
//! error acts as an energy: low on traffic it has learned to compress,
//! high elsewhere. The generator receives noise concatenated with a real
//! malicious record and rewrites only that record's non-functional
//! columns, producing adversarial malicious traffic that keeps its
//! attack semantics while probing the discriminator's blind spots.

mod loss;
mod persist;
mod pt;
mod train;

pub use loss::{
    d_loss, d_loss_value, g_loss, g_loss_value, generate_adversarial, sample_latent, DiscGradients,
};
pub use persist::{
    load_discriminator, load_generator, read_discriminator, read_generator, save_discriminator,
    save_generator, write_discriminator, write_generator,
};
pub use pt::{pull_away, pull_away_with_grad};
pub use train::{train, LossRecord, TrainOutcome};

use ndarray::{Array1, Array2, Axis};
use rand::Rng;

use crate::neural::{power_iteration, refresh_sigma, Mlp};
use crate::preprocess::FunctionalMask;
use crate::{Error, Result};

/// What the generator consumes and produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorMode {
    /// Input `z ‖ x` for a real malicious record `x`; output covers only
    /// the mask's replaced columns, spliced into a copy of `x`.
    MaskedRewrite,
    /// Ablation mode: input `z` alone, output a full record width. No
    /// functional preservation.
    NoiseOnly,
}

/// Generator network plus the shape contract it was built for.
#[derive(Debug, Clone)]
pub struct Generator {
    pub net: Mlp,
    pub latent_dim: usize,
    pub mode: GeneratorMode,
}

impl Generator {
    /// Glorot-initialized generator for `mask` over `d`-column records.
    pub fn new(
        config: &TrainConfig,
        d: usize,
        mask: &FunctionalMask,
        rng: &mut impl Rng,
    ) -> Self {
        let mode = if config.noise_only_generator {
            GeneratorMode::NoiseOnly
        } else {
            GeneratorMode::MaskedRewrite
        };
        let (input, output) = match mode {
            GeneratorMode::MaskedRewrite => (config.latent_dim + d, mask.replaced_count()),
            GeneratorMode::NoiseOnly => (config.latent_dim, d),
        };
        let mut dims = Vec::with_capacity(config.gen_hidden.len() + 2);
        dims.push(input);
        dims.extend_from_slice(&config.gen_hidden);
        dims.push(output);
        Self {
            net: Mlp::new(&dims, config.leaky_slope, rng),
            latent_dim: config.latent_dim,
            mode,
        }
    }

    /// Rebuild a generator around an existing network, checking that
    /// the network's input width is consistent with `mode`: noise-only
    /// consumes exactly `latent_dim` values, masked-rewrite consumes
    /// the latent draw plus the record it rewrites.
    pub fn from_parts(net: Mlp, latent_dim: usize, mode: GeneratorMode) -> Result<Self> {
        if latent_dim == 0 {
            return Err(Error::Dimension("latent width must be positive".into()));
        }
        let consistent = match mode {
            GeneratorMode::MaskedRewrite => net.input_dim() > latent_dim,
            GeneratorMode::NoiseOnly => net.input_dim() == latent_dim,
        };
        if !consistent {
            return Err(Error::Dimension(format!(
                "generator input width {} is inconsistent with latent width {latent_dim}",
                net.input_dim()
            )));
        }
        Ok(Self {
            net,
            latent_dim,
            mode,
        })
    }

    pub fn output_dim(&self) -> usize {
        self.net.output_dim()
    }
}

/// Autoencoder discriminator: encoder (optionally spectral-normalized)
/// into a low-dimensional code, decoder back to record width.
#[derive(Debug, Clone)]
pub struct Discriminator {
    pub encoder: Mlp,
    pub decoder: Mlp,
}

impl Discriminator {
    pub fn new(config: &TrainConfig, d: usize, rng: &mut impl Rng) -> Self {
        let mut enc_dims = Vec::with_capacity(config.enc_hidden.len() + 2);
        enc_dims.push(d);
        enc_dims.extend_from_slice(&config.enc_hidden);
        enc_dims.push(config.code_dim);
        let mut dec_dims = Vec::with_capacity(config.dec_hidden.len() + 2);
        dec_dims.push(config.code_dim);
        dec_dims.extend_from_slice(&config.dec_hidden);
        dec_dims.push(d);
        let mut encoder = Mlp::new(&enc_dims, config.leaky_slope, rng);
        if config.sn_enabled {
            for layer in &mut encoder.layers {
                layer.enable_spectral_norm(rng);
            }
        }
        Self {
            encoder,
            decoder: Mlp::new(&dec_dims, config.leaky_slope, rng),
        }
    }

    pub fn from_parts(encoder: Mlp, decoder: Mlp) -> Result<Self> {
        if encoder.output_dim() != decoder.input_dim() {
            return Err(Error::Dimension(format!(
                "encoder code width {} does not feed decoder input width {}",
                encoder.output_dim(),
                decoder.input_dim()
            )));
        }
        if encoder.input_dim() != decoder.output_dim() {
            return Err(Error::Dimension(format!(
                "encoder input width {} does not match decoder output width {}",
                encoder.input_dim(),
                decoder.output_dim()
            )));
        }
        Ok(Self { encoder, decoder })
    }

    pub fn input_dim(&self) -> usize {
        self.encoder.input_dim()
    }

    pub fn code_dim(&self) -> usize {
        self.encoder.output_dim()
    }

    pub fn sn_enabled(&self) -> bool {
        self.encoder.layers.iter().any(|l| l.sn.is_some())
    }

    /// Dec(Enc(x)) for a batch.
    pub fn reconstruct(&self, x: &Array2<f64>) -> Array2<f64> {
        self.decoder.infer(&self.encoder.infer(x))
    }

    /// Per-row reconstruction energy mse(x, Dec(Enc(x))).
    pub fn energy_batch(&self, x: &Array2<f64>) -> Array1<f64> {
        let recon = self.reconstruct(x);
        row_energies(x, &recon)
    }

    /// Reconstruction energy of a single record.
    pub fn energy(&self, x: &[f64]) -> f64 {
        let row = Array2::from_shape_vec((1, x.len()), x.to_vec())
            .expect("1×d shape always matches");
        self.energy_batch(&row)[0]
    }

    /// One power-iteration update of every spectral-normalized encoder
    /// layer; returns true if any layer was degenerate (zero weight).
    pub fn update_spectral_norm(&mut self) -> bool {
        let mut any_degenerate = false;
        for layer in &mut self.encoder.layers {
            if layer.sn.is_some() {
                any_degenerate |= power_iteration(layer).degenerate;
            }
        }
        any_degenerate
    }

    /// Deterministic σ̂ refresh from the stored `u` vectors, matching
    /// what a checkpoint reload computes.
    pub fn refresh_spectral_norm(&mut self) {
        for layer in &mut self.encoder.layers {
            if layer.sn.is_some() {
                refresh_sigma(layer);
            }
        }
    }
}

/// Per-row mean squared reconstruction error.
pub(crate) fn row_energies(x: &Array2<f64>, recon: &Array2<f64>) -> Array1<f64> {
    assert_eq!(x.dim(), recon.dim(), "reconstruction shape mismatch");
    let diff = recon - x;
    (&diff * &diff).sum_axis(Axis(1)) / x.ncols() as f64
}

/// Hyperparameters and architecture of one training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Hinge margin m of the discriminator loss.
    pub margin: f64,
    /// Weight of the pull-away term in the generator loss.
    pub lambda_pt: f64,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub latent_dim: usize,
    pub seed: u64,
    /// Spectral normalization on every encoder layer.
    pub sn_enabled: bool,
    /// Ablation: generator sees noise only and emits full records.
    pub noise_only_generator: bool,
    pub gen_hidden: Vec<usize>,
    pub enc_hidden: Vec<usize>,
    pub code_dim: usize,
    pub dec_hidden: Vec<usize>,
    pub leaky_slope: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            margin: 1.0,
            lambda_pt: 0.1,
            learning_rate: 2e-4,
            beta1: 0.5,
            beta2: 0.999,
            batch_size: 64,
            epochs: 20,
            latent_dim: 100,
            seed: 0,
            sn_enabled: true,
            noise_only_generator: false,
            gen_hidden: vec![512, 256],
            enc_hidden: vec![512, 256],
            code_dim: 100,
            dec_hidden: vec![128, 256],
            leaky_slope: 0.2,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        fn bad(message: String) -> Result<()> {
            Err(Error::Config(message))
        }
        if !(self.margin > 0.0 && self.margin.is_finite()) {
            return bad(format!("margin must be a positive real, got {}", self.margin));
        }
        if !(self.lambda_pt >= 0.0 && self.lambda_pt.is_finite()) {
            return bad(format!("lambda_pt must be ≥ 0, got {}", self.lambda_pt));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            ));
        }
        for (name, beta) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(0.0..1.0).contains(&beta) {
                return bad(format!("{name} must lie in [0, 1), got {beta}"));
            }
        }
        if self.batch_size < 2 {
            return bad(format!(
                "batch_size must be at least 2 (the pull-away term needs pairs), got {}",
                self.batch_size
            ));
        }
        if self.latent_dim < 1 {
            return bad("latent_dim must be at least 1".into());
        }
        if self.code_dim < 1 {
            return bad("code_dim must be at least 1".into());
        }
        if !(self.leaky_slope >= 0.0 && self.leaky_slope.is_finite()) {
            return bad(format!(
                "leaky_slope must be ≥ 0, got {}",
                self.leaky_slope
            ));
        }
        Ok(())
    }
}
