//! Finite-difference oracle shared by the in-crate unit tests.
//!
//! Central differences with step 1e-5 over a flat parameter view; a
//! gradient passes when the relative error against the analytic value is
//! below 1e-4, with the denominator floored at 1e-6 so near-zero
//! gradients compare absolutely.

use ndarray::Array2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use super::mlp::{Mlp, MlpGradients};

pub(crate) const FD_STEP: f64 = 1e-5;
pub(crate) const FD_TOLERANCE: f64 = 1e-4;

pub(crate) fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-6)
}

/// Central-difference gradient of `f` at `at`.
pub(crate) fn central_difference(
    f: &mut dyn FnMut(&[f64]) -> f64,
    at: &[f64],
    step: f64,
) -> Vec<f64> {
    let mut point = at.to_vec();
    (0..at.len())
        .map(|i| {
            let original = point[i];
            point[i] = original + step;
            let plus = f(&point);
            point[i] = original - step;
            let minus = f(&point);
            point[i] = original;
            (plus - minus) / (2.0 * step)
        })
        .collect()
}

/// All trainable parameters in layer order, weights row-major then bias.
pub(crate) fn flatten_params(net: &Mlp) -> Vec<f64> {
    let mut flat = Vec::with_capacity(net.parameter_count());
    for layer in &net.layers {
        flat.extend(layer.weight.iter());
        flat.extend(layer.bias.iter());
    }
    flat
}

/// Inverse of [`flatten_params`]; spectral-norm state is left untouched,
/// so σ̂ stays frozen while parameters are perturbed.
pub(crate) fn load_params(net: &mut Mlp, flat: &[f64]) {
    let mut it = flat.iter();
    for layer in &mut net.layers {
        for w in layer.weight.iter_mut() {
            *w = *it.next().expect("flat parameter vector too short");
        }
        for b in layer.bias.iter_mut() {
            *b = *it.next().expect("flat parameter vector too short");
        }
    }
    assert!(it.next().is_none(), "flat parameter vector too long");
}

/// Parameter gradients in the same order as [`flatten_params`].
pub(crate) fn flatten_grads(grads: &MlpGradients) -> Vec<f64> {
    let mut flat = Vec::new();
    for layer in &grads.layers {
        flat.extend(layer.weight.iter());
        flat.extend(layer.bias.iter());
    }
    flat
}

/// Check every parameter gradient and the input gradient of
/// `loss(net) = Σ C ⊙ net(x)` against central differences, for a random
/// coefficient matrix `C`.
pub(crate) fn check_gradients(net: &Mlp, x: &Array2<f64>, rng: &mut impl Rng) {
    let coeffs =
        Array2::from_shape_fn((x.nrows(), net.output_dim()), |_| rng.random_range(-1.0..1.0));
    let (_, cache) = net.forward(x);
    let analytic = net.backward(&cache, &coeffs);

    let base = flatten_params(net);
    let mut probe = net.clone();
    let mut on_params = |flat: &[f64]| {
        load_params(&mut probe, flat);
        (probe.infer(x) * &coeffs).sum()
    };
    let numeric = central_difference(&mut on_params, &base, FD_STEP);
    for (i, (&a, &n)) in flatten_grads(&analytic).iter().zip(&numeric).enumerate() {
        assert!(
            relative_error(a, n) < FD_TOLERANCE,
            "parameter {i}: analytic {a} vs numeric {n}"
        );
    }

    let x_flat: Vec<f64> = x.iter().copied().collect();
    let mut on_input = |flat: &[f64]| {
        let xm = Array2::from_shape_vec(x.raw_dim(), flat.to_vec()).unwrap();
        (net.infer(&xm) * &coeffs).sum()
    };
    let numeric_x = central_difference(&mut on_input, &x_flat, FD_STEP);
    for (i, (&a, &n)) in analytic.input.iter().zip(&numeric_x).enumerate() {
        assert!(
            relative_error(a, n) < FD_TOLERANCE,
            "input component {i}: analytic {a} vs numeric {n}"
        );
    }
}
