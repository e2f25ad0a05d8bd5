//! Anomaly-based network intrusion detection with an energy-based GAN.
//!
//! The discriminator is an autoencoder whose reconstruction error acts as an
//! energy: traffic it was trained on (normal records) reconstructs well, so it
//! scores low, while malicious records score high. The generator works against
//! it by rewriting the non-functional features of real malicious records into
//! adversarial variants that keep their attack semantics.
//!
//! Modules:
//! - [`dataset`]: NSL-KDD record parsing, the 41-feature schema and the
//!   attack-label taxonomy.
//! - [`preprocess`]: one-hot + min-max encoding and the per-attack functional
//!   feature masks.
//! - [`neural`]: dense layers, LeakyReLU, Adam and spectral normalization with
//!   hand-derived gradients.
//! - [`ebgan`]: generator/discriminator pair, margin and pull-away losses, and
//!   the training loop.
//! - [`detect`]: anomaly scoring, thresholding, metrics and CSV exports.
//! - [`cli`]: configuration and the subcommand entry points.

pub mod cli;
pub mod dataset;
pub mod detect;
pub mod ebgan;
mod error;
pub mod neural;
pub mod preprocess;

pub use error::{Error, Result};
