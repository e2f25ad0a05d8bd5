//! Tabular artifacts: score tables, score histograms, and reconstructed
//! records for external clustering or projection tools.
//!
//! All floating-point values are written with Rust's shortest
//! round-trip formatting, so parsing a value back yields the exact
//! bits that were written.

use std::io::Write;

use ndarray::Array2;

use super::{AnomalyScore, Label};
use crate::ebgan::Discriminator;
use crate::{Error, Result};

/// One row of a score histogram: a half-open bin `[bin_low, bin_high)`
/// (the last bin includes its upper edge) with per-class counts.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramRow {
    pub bin_low: f64,
    pub bin_high: f64,
    pub count_normal: usize,
    pub count_malicious: usize,
}

/// Bin normalized scores into `bins` equal-width bins over [0, 1],
/// counting normal and malicious records separately.
///
/// Scores are expected to be normalized; values outside [0, 1] land in
/// the nearest end bin.
pub fn histogram(scores: &[AnomalyScore], bins: usize) -> Vec<HistogramRow> {
    assert!(bins > 0, "histogram needs at least one bin");
    let mut rows: Vec<HistogramRow> = (0..bins)
        .map(|i| HistogramRow {
            bin_low: i as f64 / bins as f64,
            bin_high: (i + 1) as f64 / bins as f64,
            count_normal: 0,
            count_malicious: 0,
        })
        .collect();
    for s in scores {
        let raw = (s.score * bins as f64).floor();
        let bin = (raw.max(0.0) as usize).min(bins - 1);
        match s.true_label {
            Label::Normal => rows[bin].count_normal += 1,
            Label::Malicious => rows[bin].count_malicious += 1,
        }
    }
    rows
}

/// Write `index,score,true_label,predicted` rows; an absent prediction
/// leaves the last field empty.
pub fn write_scores_csv(out: &mut dyn Write, scores: &[AnomalyScore]) -> Result<()> {
    writeln!(out, "index,score,true_label,predicted")?;
    for s in scores {
        let predicted = s.predicted.map(Label::as_str).unwrap_or("");
        writeln!(out, "{},{},{},{}", s.index, s.score, s.true_label, predicted)?;
    }
    Ok(())
}

/// Write `bin_low,bin_high,count_normal,count_malicious` rows.
pub fn write_histogram_csv(out: &mut dyn Write, rows: &[HistogramRow]) -> Result<()> {
    writeln!(out, "bin_low,bin_high,count_normal,count_malicious")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.bin_low, r.bin_high, r.count_normal, r.count_malicious
        )?;
    }
    Ok(())
}

/// Write one headerless row per record: the d reconstructed values
/// followed by the true label (d + 1 columns).
pub fn write_reconstructions_csv(
    out: &mut dyn Write,
    disc: &Discriminator,
    x: &Array2<f64>,
    true_labels: &[Label],
) -> Result<()> {
    if x.ncols() != disc.input_dim() {
        return Err(Error::Dimension(format!(
            "records have {} columns, discriminator expects {}",
            x.ncols(),
            disc.input_dim()
        )));
    }
    if true_labels.len() != x.nrows() {
        return Err(Error::Dimension(format!(
            "{} labels for {} records",
            true_labels.len(),
            x.nrows()
        )));
    }
    let recon = disc.reconstruct(x);
    for (row, &label) in recon.rows().into_iter().zip(true_labels) {
        let mut line = String::new();
        for v in row.iter() {
            line.push_str(&format!("{v}"));
            line.push(',');
        }
        line.push_str(label.as_str());
        writeln!(out, "{line}")?;
    }
    Ok(())
}
