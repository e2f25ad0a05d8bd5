//! Spectral normalization by power iteration.
//!
//! One call advances the persistent left vector `u` by a single power
//! iteration and refreshes the spectral-norm estimate σ̂; the layer's
//! forward pass then applies `W / σ̂` until the next call. σ̂ is a frozen
//! constant as far as gradients are concerned — backprop never
//! differentiates through the power iteration.

use ndarray::Array1;

use super::mlp::AffineLayer;

/// Norms at or below this are treated as zero.
pub const SN_EPS: f64 = 1e-12;

/// Result of one spectral-norm update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnOutcome {
    /// The σ̂ the layer will use until the next update.
    pub sigma: f64,
    /// True when the weight was effectively zero, in which case the
    /// weight is left unnormalized (σ̂ treated as 1) and `u` unchanged.
    pub degenerate: bool,
}

fn l2(v: &Array1<f64>) -> f64 {
    v.dot(v).sqrt()
}

/// One power-iteration update of the persistent `u` and σ̂:
/// `v = normalize(Wᵀu)`, `u ← normalize(Wv)`, `σ̂ = ‖Wv‖`.
///
/// # Panics
/// Panics if spectral normalization is not enabled on the layer.
pub fn power_iteration(layer: &mut AffineLayer) -> SnOutcome {
    let sn = layer
        .sn
        .as_mut()
        .expect("spectral normalization not enabled on this layer");
    let w = &layer.weight;

    let wt_u = w.t().dot(&sn.u);
    let v_norm = l2(&wt_u);
    if v_norm <= SN_EPS {
        sn.sigma = 1.0;
        sn.degenerate = true;
        return SnOutcome {
            sigma: 1.0,
            degenerate: true,
        };
    }
    let v = wt_u / v_norm;
    let wv = w.dot(&v);
    let sigma = l2(&wv);
    if sigma <= SN_EPS {
        sn.sigma = 1.0;
        sn.degenerate = true;
        return SnOutcome {
            sigma: 1.0,
            degenerate: true,
        };
    }
    sn.u = wv / sigma;
    sn.sigma = sigma;
    sn.degenerate = false;
    SnOutcome {
        sigma,
        degenerate: false,
    }
}

/// Recompute σ̂ = ‖Wᵀu‖ from the stored `u` without advancing it.
///
/// Used after loading a checkpoint and at the end of training so that an
/// in-memory model and its reloaded copy apply bit-identical weights.
///
/// # Panics
/// Panics if spectral normalization is not enabled on the layer.
pub fn refresh_sigma(layer: &mut AffineLayer) -> SnOutcome {
    let sn = layer
        .sn
        .as_mut()
        .expect("spectral normalization not enabled on this layer");
    let norm = l2(&layer.weight.t().dot(&sn.u));
    if norm <= SN_EPS {
        sn.sigma = 1.0;
        sn.degenerate = true;
    } else {
        sn.sigma = norm;
        sn.degenerate = false;
    }
    SnOutcome {
        sigma: sn.sigma,
        degenerate: sn.degenerate,
    }
}

/// [`power_iteration`] plus the resulting effective weight `W / σ̂`.
pub fn spectral_normalize(layer: &mut AffineLayer) -> (ndarray::Array2<f64>, SnOutcome) {
    let outcome = power_iteration(layer);
    (layer.effective_weight(), outcome)
}
