//! Pull-away term: mean squared cosine similarity over ordered row
//! pairs, pushing a batch of code vectors to spread out in direction.

use ndarray::{Array2, Axis};

/// f(S) = 1/(N(N−1)) · Σ_{i≠j} (Sᵢ·Sⱼ / (‖Sᵢ‖‖Sⱼ‖))².
///
/// Pairs involving a zero-norm row contribute 0 (a warning is logged
/// rather than dividing by zero). The result lies in [0, 1].
///
/// # Panics
/// Panics when `s` has fewer than two rows.
pub fn pull_away(s: &Array2<f64>) -> f64 {
    pairwise(s, None)
}

/// [`pull_away`] plus its gradient with respect to every entry of `s`.
pub fn pull_away_with_grad(s: &Array2<f64>) -> (f64, Array2<f64>) {
    let mut grad = Array2::zeros(s.raw_dim());
    let value = pairwise(s, Some(&mut grad));
    (value, grad)
}

fn pairwise(s: &Array2<f64>, mut grad: Option<&mut Array2<f64>>) -> f64 {
    let n = s.nrows();
    assert!(n >= 2, "pull-away needs at least two rows");

    let norms: Vec<f64> = s
        .axis_iter(Axis(0))
        .map(|row| row.dot(&row).sqrt())
        .collect();
    if norms.iter().any(|&v| v == 0.0) {
        log::warn!("pull-away input contains a zero-norm row; its pairs contribute 0");
    }

    // Ordered pairs double every unordered pair, so the coefficient for
    // a single (i, j), i < j, is 2/(N(N−1)); its gradient contribution
    // to row i is 4/(N(N−1)) · c·(Sⱼ/(‖Sᵢ‖‖Sⱼ‖) − c·Sᵢ/‖Sᵢ‖²).
    let k = 1.0 / (n * (n - 1)) as f64;
    let mut sum = 0.0;
    for i in 0..n {
        if norms[i] == 0.0 {
            continue;
        }
        for j in (i + 1)..n {
            if norms[j] == 0.0 {
                continue;
            }
            let si = s.row(i);
            let sj = s.row(j);
            let c = si.dot(&sj) / (norms[i] * norms[j]);
            sum += 2.0 * c * c;
            if let Some(g) = grad.as_deref_mut() {
                let scale = 4.0 * k * c;
                for col in 0..s.ncols() {
                    g[[i, col]] += scale
                        * (sj[col] / (norms[i] * norms[j]) - c * si[col] / (norms[i] * norms[i]));
                    g[[j, col]] += scale
                        * (si[col] / (norms[i] * norms[j]) - c * sj[col] / (norms[j] * norms[j]));
                }
            }
        }
    }
    k * sum
}
