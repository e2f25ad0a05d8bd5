//! The alternating training loop.

use ndarray::{Array2, Axis};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::loss::{d_loss, g_loss, generate_adversarial, sample_latent};
use super::{Discriminator, Generator, TrainConfig};
use crate::neural::{AdamConfig, AdamState};
use crate::preprocess::FunctionalMask;
use crate::{Error, Result};

/// One batch's losses, in recording order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossRecord {
    pub epoch: usize,
    /// Batch index within the epoch.
    pub batch: usize,
    pub d_loss: f64,
    pub g_loss: f64,
}

/// Trained networks plus the per-batch loss trace.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub generator: Generator,
    pub discriminator: Discriminator,
    pub log: Vec<LossRecord>,
}

fn check_finite(value: f64, which: &str, seed: u64, epoch: usize, batch: usize) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Numerical(format!(
            "non-finite {which} loss at seed {seed}, epoch {epoch}, batch {batch}"
        )))
    }
}

/// Train generator and discriminator on encoded batches.
///
/// Each epoch walks the shuffled normal records in mini-batches; the
/// malicious bucket is sampled with replacement to pair each batch. Per
/// batch: one Adam step on the discriminator (spectral-norm estimates
/// updated first, adversarial batch treated as constant), then one Adam
/// step on the generator against the updated discriminator, reusing the
/// same latent draws and malicious rows. Fully deterministic under
/// `config.seed`. At the end, σ̂ is refreshed the same way a checkpoint
/// reload would compute it, so the returned discriminator scores
/// identically to its saved copy.
pub fn train(
    config: &TrainConfig,
    normal: &Array2<f64>,
    malicious: &Array2<f64>,
    mask: &FunctionalMask,
) -> Result<TrainOutcome> {
    config.validate()?;
    let d = normal.ncols();
    if normal.nrows() == 0 {
        return Err(Error::Config(
            "training requires at least one normal record".into(),
        ));
    }
    let masked_mode = !config.noise_only_generator;
    if masked_mode {
        if malicious.nrows() == 0 {
            return Err(Error::Config(
                "masked-rewrite training requires at least one malicious record".into(),
            ));
        }
        if malicious.ncols() != d {
            return Err(Error::Dimension(format!(
                "malicious records have {} columns, normal records {d}",
                malicious.ncols()
            )));
        }
        match mask.replaced_encoded.iter().max() {
            None => {
                return Err(Error::Config(
                    "the functional mask has no replaced columns".into(),
                ))
            }
            Some(&max_col) if max_col >= d => {
                return Err(Error::Dimension(format!(
                    "mask column {max_col} is out of range for {d}-column records"
                )));
            }
            _ => {}
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut disc = Discriminator::new(config, d, &mut rng);
    let mut gen = Generator::new(config, d, mask, &mut rng);

    let adam = AdamConfig {
        learning_rate: config.learning_rate,
        beta1: config.beta1,
        beta2: config.beta2,
        epsilon: 1e-8,
    };
    let mut enc_opt = AdamState::for_mlp(&disc.encoder, adam);
    let mut dec_opt = AdamState::for_mlp(&disc.decoder, adam);
    let mut gen_opt = AdamState::for_mlp(&gen.net, adam);

    let n_normal = normal.nrows();
    let epoch_len = n_normal.div_ceil(config.batch_size);
    let mut order: Vec<usize> = (0..n_normal).collect();
    let mut log = Vec::with_capacity(config.epochs * epoch_len);

    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        for batch in 0..epoch_len {
            let start = batch * config.batch_size;
            let end = (start + config.batch_size).min(n_normal);
            let x_normal = normal.select(Axis(0), &order[start..end]);
            let nb = x_normal.nrows();

            let mal_batch = if masked_mode {
                let idx: Vec<usize> = (0..nb)
                    .map(|_| rng.random_range(0..malicious.nrows()))
                    .collect();
                malicious.select(Axis(0), &idx)
            } else {
                Array2::zeros((nb, d))
            };
            let z = sample_latent(nb, config.latent_dim, &mut rng);

            if config.sn_enabled {
                disc.update_spectral_norm();
            }
            let x_adv = generate_adversarial(&gen, &mal_batch, &z, mask);
            let (loss_d, d_grads) = d_loss(&disc, &x_normal, &x_adv, config.margin);
            check_finite(loss_d, "discriminator", config.seed, epoch, batch)?;
            enc_opt.apply(&mut disc.encoder, &d_grads.encoder);
            dec_opt.apply(&mut disc.decoder, &d_grads.decoder);

            let (loss_g, g_grads) = g_loss(&gen, &disc, &mal_batch, &z, mask, config.lambda_pt);
            check_finite(loss_g, "generator", config.seed, epoch, batch)?;
            gen_opt.apply(&mut gen.net, &g_grads);

            log.push(LossRecord {
                epoch,
                batch,
                d_loss: loss_d,
                g_loss: loss_g,
            });
        }
    }

    if config.sn_enabled {
        disc.refresh_spectral_norm();
    }
    Ok(TrainOutcome {
        generator: gen,
        discriminator: disc,
        log,
    })
}
