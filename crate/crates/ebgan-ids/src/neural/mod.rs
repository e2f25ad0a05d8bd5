//! Minimal differentiable building blocks: affine layers with optional
//! spectral normalization, LeakyReLU MLPs with analytic backprop, MSE,
//! Adam, and a flat binary checkpoint format.
//!
//! Everything is 64-bit: the gradient contract (analytic vs. central
//! finite differences at relative error < 1e-4) needs the headroom, and
//! the networks are small enough that precision costs nothing.

pub mod adam;
pub mod checkpoint;
pub mod mlp;
pub mod sn;

#[cfg(test)]
pub(crate) mod testutil;

pub use adam::{AdamConfig, AdamState};
pub use checkpoint::{load_mlp, read_mlp, save_mlp, write_mlp};
pub use mlp::{AffineLayer, ForwardCache, LayerGradient, Mlp, MlpGradients, SnState};
pub use sn::{power_iteration, refresh_sigma, spectral_normalize, SnOutcome, SN_EPS};

/// Mean squared error between two equal-length slices.
///
/// # Panics
/// Panics if the slices differ in length.
pub fn mse(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "mse over slices of different lengths");
    assert!(!a.is_empty(), "mse over empty slices");
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    sum / a.len() as f64
}
