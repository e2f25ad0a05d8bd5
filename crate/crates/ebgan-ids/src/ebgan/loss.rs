//! The two adversarial losses and the masked rewrite that turns real
//! malicious records into adversarial ones.

use ndarray::{s, Array1, Array2, Axis};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::pt::{pull_away, pull_away_with_grad};
use super::{row_energies, Discriminator, Generator, GeneratorMode};
use crate::neural::{ForwardCache, MlpGradients};
use crate::preprocess::FunctionalMask;

/// `n × latent_dim` matrix of i.i.d. standard-normal draws.
pub fn sample_latent(n: usize, latent_dim: usize, rng: &mut impl Rng) -> Array2<f64> {
    assert!(n >= 1, "latent batch must be non-empty");
    assert!(latent_dim >= 1, "latent dimension must be positive");
    Array2::from_shape_fn((n, latent_dim), |_| -> f64 { StandardNormal.sample(rng) })
}

/// Generator forward pass with everything g_loss needs to backpropagate.
struct AdvForward {
    /// Generator output before clamping.
    raw: Array2<f64>,
    cache: ForwardCache,
    x_adv: Array2<f64>,
}

fn adv_forward(
    gen: &Generator,
    malicious: &Array2<f64>,
    z: &Array2<f64>,
    mask: &FunctionalMask,
) -> AdvForward {
    assert_eq!(z.ncols(), gen.latent_dim, "latent width mismatch");
    assert!(z.nrows() >= 1, "batch must be non-empty");
    match gen.mode {
        GeneratorMode::MaskedRewrite => {
            assert_eq!(z.nrows(), malicious.nrows(), "batch sizes must match");
            assert_eq!(
                gen.output_dim(),
                mask.replaced_count(),
                "generator output width does not match the mask"
            );
            let n = z.nrows();
            let d = malicious.ncols();
            let mut gen_input = Array2::zeros((n, gen.latent_dim + d));
            gen_input.slice_mut(s![.., ..gen.latent_dim]).assign(z);
            gen_input.slice_mut(s![.., gen.latent_dim..]).assign(malicious);
            let (raw, cache) = gen.net.forward(&gen_input);
            let mut x_adv = malicious.clone();
            for (k, &col) in mask.replaced_encoded.iter().enumerate() {
                for i in 0..n {
                    x_adv[[i, col]] = raw[[i, k]].clamp(0.0, 1.0);
                }
            }
            AdvForward { raw, cache, x_adv }
        }
        GeneratorMode::NoiseOnly => {
            let (raw, cache) = gen.net.forward(z);
            let x_adv = raw.mapv(|v| v.clamp(0.0, 1.0));
            AdvForward { raw, cache, x_adv }
        }
    }
}

/// Rewrite a malicious batch: preserved columns are copied bitwise from
/// the input, replaced columns become `clamp(G(z ‖ x), [0, 1])`.
pub fn generate_adversarial(
    gen: &Generator,
    malicious: &Array2<f64>,
    z: &Array2<f64>,
    mask: &FunctionalMask,
) -> Array2<f64> {
    adv_forward(gen, malicious, z, mask).x_adv
}

/// Parameter gradients of the discriminator loss.
#[derive(Debug, Clone)]
pub struct DiscGradients {
    pub encoder: MlpGradients,
    pub decoder: MlpGradients,
}

/// Discriminator loss: mean over the batch of
/// `energy(x_normal) + max(0, m − energy(x_adv))`, with gradients for
/// the discriminator only (`x_adv` is a constant here — no gradient
/// flows back into the generator).
pub fn d_loss(
    disc: &Discriminator,
    x_normal: &Array2<f64>,
    x_adv: &Array2<f64>,
    margin: f64,
) -> (f64, DiscGradients) {
    assert!(margin > 0.0 && margin.is_finite(), "margin must be positive");
    assert!(x_normal.nrows() >= 1 && x_adv.nrows() >= 1, "batches must be non-empty");
    assert_eq!(x_normal.ncols(), disc.input_dim(), "record width mismatch");
    assert_eq!(x_adv.ncols(), disc.input_dim(), "record width mismatch");

    let d = disc.input_dim() as f64;
    let n_normal = x_normal.nrows();
    let n_adv = x_adv.nrows();

    // one concatenated pass: rows 0..n_normal are the normal batch,
    // the rest the adversarial batch
    let x_all = ndarray::concatenate(Axis(0), &[x_normal.view(), x_adv.view()]).unwrap();
    let (code, enc_cache) = disc.encoder.forward(&x_all);
    let (recon, dec_cache) = disc.decoder.forward(&code);
    let energies = row_energies(&x_all, &recon);

    let e_normal = energies.slice(s![..n_normal]);
    let e_adv = energies.slice(s![n_normal..]);
    let loss = e_normal.mean().unwrap()
        + e_adv.iter().map(|&e| (margin - e).max(0.0)).sum::<f64>() / n_adv as f64;

    // ∂loss/∂recon row by row: the normal term pulls reconstructions
    // toward the input; hinge-active adversarial rows push them away;
    // saturated rows contribute nothing.
    let mut scale = Array1::zeros(n_normal + n_adv);
    for i in 0..n_normal {
        scale[i] = 2.0 / (d * n_normal as f64);
    }
    for (i, &e) in e_adv.iter().enumerate() {
        scale[n_normal + i] = if e < margin {
            -2.0 / (d * n_adv as f64)
        } else {
            0.0
        };
    }
    let up = (&recon - &x_all) * &scale.insert_axis(Axis(1));

    let decoder = disc.decoder.backward(&dec_cache, &up);
    let encoder = disc.encoder.backward(&enc_cache, &decoder.input);
    (loss, DiscGradients { encoder, decoder })
}

/// [`d_loss`] without gradients, for finite-difference probing.
pub fn d_loss_value(
    disc: &Discriminator,
    x_normal: &Array2<f64>,
    x_adv: &Array2<f64>,
    margin: f64,
) -> f64 {
    let e_normal = disc.energy_batch(x_normal);
    let e_adv = disc.energy_batch(x_adv);
    e_normal.mean().unwrap()
        + e_adv.iter().map(|&e| (margin - e).max(0.0)).sum::<f64>() / e_adv.len() as f64
}

/// Generator loss: mean adversarial energy plus `lambda_pt` times the
/// pull-away term on the encoder codes of the adversarial batch.
/// Returns gradients for the generator only; they flow through the
/// replaced columns alone, since preserved columns are copied constants.
///
/// The pull-away term needs at least two rows; on a single-row batch it
/// is skipped regardless of `lambda_pt`.
pub fn g_loss(
    gen: &Generator,
    disc: &Discriminator,
    malicious: &Array2<f64>,
    z: &Array2<f64>,
    mask: &FunctionalMask,
    lambda_pt: f64,
) -> (f64, MlpGradients) {
    assert!(lambda_pt >= 0.0, "lambda_pt must be nonnegative");
    let fwd = adv_forward(gen, malicious, z, mask);
    let x_adv = &fwd.x_adv;
    assert_eq!(x_adv.ncols(), disc.input_dim(), "record width mismatch");
    let n = x_adv.nrows() as f64;
    let d = disc.input_dim() as f64;

    let (code, enc_cache) = disc.encoder.forward(x_adv);
    let (recon, dec_cache) = disc.decoder.forward(&code);
    let energies = row_energies(x_adv, &recon);
    let energy_term = energies.mean().unwrap();

    let use_pt = lambda_pt > 0.0 && x_adv.nrows() >= 2;
    let (pt_value, pt_grad) = if use_pt {
        pull_away_with_grad(&code)
    } else {
        (0.0, Array2::zeros(code.raw_dim()))
    };
    let loss = energy_term + lambda_pt * pt_value;

    // Energy reaches x_adv twice — directly and through the
    // reconstruction — and the pull-away term through the code.
    let up_recon = (&recon - x_adv) * (2.0 / (d * n));
    let dec_g = disc.decoder.backward(&dec_cache, &up_recon);
    let mut code_grad = dec_g.input;
    if use_pt {
        code_grad.scaled_add(lambda_pt, &pt_grad);
    }
    let enc_g = disc.encoder.backward(&enc_cache, &code_grad);
    let dx_adv = (x_adv - &recon) * (2.0 / (d * n)) + enc_g.input;

    let up_output = match gen.mode {
        GeneratorMode::MaskedRewrite => {
            let mut up = Array2::zeros((x_adv.nrows(), gen.output_dim()));
            for (k, &col) in mask.replaced_encoded.iter().enumerate() {
                for i in 0..x_adv.nrows() {
                    up[[i, k]] = dx_adv[[i, col]];
                }
            }
            up
        }
        GeneratorMode::NoiseOnly => dx_adv,
    };
    // clamp gate: saturated outputs pass no gradient
    let gate = fwd.raw.mapv(|v| if v > 0.0 && v < 1.0 { 1.0 } else { 0.0 });
    let up_raw = up_output * gate;
    let gen_grads = gen.net.backward(&fwd.cache, &up_raw);
    (loss, gen_grads)
}

/// [`g_loss`] without gradients, for finite-difference probing.
pub fn g_loss_value(
    gen: &Generator,
    disc: &Discriminator,
    malicious: &Array2<f64>,
    z: &Array2<f64>,
    mask: &FunctionalMask,
    lambda_pt: f64,
) -> f64 {
    let x_adv = generate_adversarial(gen, malicious, z, mask);
    let code = disc.encoder.infer(&x_adv);
    let recon = disc.decoder.infer(&code);
    let energy_term = row_energies(&x_adv, &recon).mean().unwrap();
    if lambda_pt > 0.0 && x_adv.nrows() >= 2 {
        energy_term + lambda_pt * pull_away(&code)
    } else {
        energy_term
    }
}
