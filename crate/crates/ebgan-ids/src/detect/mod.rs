//! Anomaly scoring, threshold selection, and detection metrics.
//!
//! A fitted discriminator assigns each record the reconstruction error
//! of its autoencoder pass. Records whose score clears a threshold —
//! either the top-c% cut or the maximum score seen on training normals —
//! are predicted malicious, and the binary predictions roll up into the
//! usual precision/recall/F1 report.

mod export;

pub use export::{
    histogram, write_histogram_csv, write_reconstructions_csv, write_scores_csv, HistogramRow,
};

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;

use crate::ebgan::Discriminator;
use crate::neural::mse;
use crate::{Error, Result};

/// How reconstruction error is collapsed into a scalar score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScoreCriterion {
    /// Mean squared error (the default, stronger criterion).
    #[default]
    Mse,
    /// Sum of absolute componentwise differences.
    L1,
}

impl ScoreCriterion {
    pub fn as_str(self) -> &'static str {
        match self {
            ScoreCriterion::Mse => "mse",
            ScoreCriterion::L1 => "l1",
        }
    }
}

impl fmt::Display for ScoreCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScoreCriterion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mse" => Ok(ScoreCriterion::Mse),
            "l1" => Ok(ScoreCriterion::L1),
            other => Err(Error::Config(format!(
                "unknown score criterion `{other}` (expected mse or l1)"
            ))),
        }
    }
}

/// How the decision threshold ∅ is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdMode {
    /// Flag the `c`% of records with the highest scores.
    Ratio(f64),
    /// ∅ = maximum training-normal score; flag scores strictly above.
    MaxTrain,
}

impl ThresholdMode {
    /// Stable, comma-free label for tabular output.
    pub fn label(self) -> String {
        match self {
            ThresholdMode::Ratio(c) => format!("ratio:{c}"),
            ThresholdMode::MaxTrain => "max-train".to_string(),
        }
    }
}

/// Ground-truth / predicted class of one record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Normal,
    Malicious,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Normal => "normal",
            Label::Malicious => "malicious",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One scored record.
#[derive(Debug, Clone, PartialEq)]
pub struct AnomalyScore {
    /// Position of the record in the scored set.
    pub index: usize,
    pub score: f64,
    pub true_label: Label,
    pub predicted: Option<Label>,
}

/// Score one record: reconstruction error of `x` under `criterion`.
pub fn score(disc: &Discriminator, x: &[f64], criterion: ScoreCriterion) -> Result<f64> {
    if x.len() != disc.input_dim() {
        return Err(Error::Dimension(format!(
            "record has {} columns, discriminator expects {}",
            x.len(),
            disc.input_dim()
        )));
    }
    let row = Array2::from_shape_vec((1, x.len()), x.to_vec()).expect("1×d shape");
    let recon = disc.reconstruct(&row);
    let recon_slice = recon.as_slice().expect("contiguous reconstruction");
    let value = match criterion {
        ScoreCriterion::Mse => mse(x, recon_slice),
        ScoreCriterion::L1 => x
            .iter()
            .zip(recon_slice)
            .map(|(a, b)| (a - b).abs())
            .sum(),
    };
    if !value.is_finite() {
        return Err(Error::Numerical(format!(
            "non-finite anomaly score {value}"
        )));
    }
    Ok(value)
}

/// Score a batch; `index` is the row position.
pub fn score_batch(
    disc: &Discriminator,
    x: &Array2<f64>,
    true_labels: &[Label],
    criterion: ScoreCriterion,
) -> Result<Vec<AnomalyScore>> {
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
    let d = x.ncols() as f64;
    let mut out = Vec::with_capacity(x.nrows());
    for (index, &true_label) in true_labels.iter().enumerate() {
        let xi = x.row(index);
        let ri = recon.row(index);
        let value = match criterion {
            ScoreCriterion::Mse => {
                xi.iter()
                    .zip(ri.iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    / d
            }
            ScoreCriterion::L1 => xi.iter().zip(ri.iter()).map(|(a, b)| (a - b).abs()).sum(),
        };
        if !value.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite anomaly score at record {index}"
            )));
        }
        out.push(AnomalyScore {
            index,
            score: value,
            true_label,
            predicted: None,
        });
    }
    Ok(out)
}

/// Flag the ⌊c%·n⌋ records with the highest scores as malicious (ties
/// broken by ascending index) and return the threshold ∅ — the smallest
/// flagged score, or +∞ when nothing is flagged.
pub fn threshold_by_ratio(scores: &mut [AnomalyScore], c: f64) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::Config("cannot threshold an empty score set".into()));
    }
    if !(0.0..=100.0).contains(&c) {
        return Err(Error::Config(format!(
            "ratio percentage must lie in [0, 100], got {c}"
        )));
    }
    let n = scores.len();
    let k = (c * n as f64 / 100.0).floor() as usize;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .score
            .total_cmp(&scores[a].score)
            .then(scores[a].index.cmp(&scores[b].index))
    });
    for &i in &order[..k] {
        scores[i].predicted = Some(Label::Malicious);
    }
    for &i in &order[k..] {
        scores[i].predicted = Some(Label::Normal);
    }
    Ok(if k == 0 {
        f64::INFINITY
    } else {
        scores[order[k - 1]].score
    })
}

/// ∅ = maximum training-normal score; flag test records strictly above.
pub fn threshold_by_max_train(train_scores: &[f64], test: &mut [AnomalyScore]) -> Result<f64> {
    if train_scores.is_empty() {
        return Err(Error::Config(
            "max-train thresholding needs at least one training score".into(),
        ));
    }
    let threshold = train_scores
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    apply_threshold(test, threshold);
    Ok(threshold)
}

/// Flag every score strictly above `threshold` as malicious.
pub fn apply_threshold(scores: &mut [AnomalyScore], threshold: f64) {
    for s in scores.iter_mut() {
        s.predicted = Some(if s.score > threshold {
            Label::Malicious
        } else {
            Label::Normal
        });
    }
}

/// Confusion counts and summary metrics; malicious is the positive
/// class.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionReport {
    pub criterion: ScoreCriterion,
    pub mode: ThresholdMode,
    pub threshold: f64,
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Set when any metric had a zero denominator and was reported as 0.
    pub zero_division: bool,
}

impl DetectionReport {
    pub const CSV_HEADER: &'static str =
        "criterion,mode,threshold,tp,fp,tn,fn,precision,recall,f1";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.criterion,
            self.mode.label(),
            self.threshold,
            self.true_positives,
            self.false_positives,
            self.true_negatives,
            self.false_negatives,
            self.precision,
            self.recall,
            self.f1
        )
    }
}

/// Roll predictions up into a [`DetectionReport`].
///
/// Every record must already carry a prediction (from one of the
/// threshold operations).
pub fn evaluate(
    scores: &[AnomalyScore],
    criterion: ScoreCriterion,
    mode: ThresholdMode,
    threshold: f64,
) -> Result<DetectionReport> {
    let mut tp = 0;
    let mut fp = 0;
    let mut tn = 0;
    let mut fn_count = 0;
    for s in scores {
        let predicted = s.predicted.ok_or_else(|| {
            Error::Config(format!("record {} has no prediction", s.index))
        })?;
        match (s.true_label, predicted) {
            (Label::Malicious, Label::Malicious) => tp += 1,
            (Label::Normal, Label::Malicious) => fp += 1,
            (Label::Normal, Label::Normal) => tn += 1,
            (Label::Malicious, Label::Normal) => fn_count += 1,
        }
    }

    let mut zero_division = false;
    let mut ratio = |num: usize, den: usize| -> f64 {
        if den == 0 {
            zero_division = true;
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_count);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        zero_division = true;
        0.0
    };
    Ok(DetectionReport {
        criterion,
        mode,
        threshold,
        true_positives: tp,
        false_positives: fp,
        true_negatives: tn,
        false_negatives: fn_count,
        precision,
        recall,
        f1,
        zero_division,
    })
}

/// Min-max normalize into [0, 1]; a constant set maps to all zeros.
pub fn normalize_scores(scores: &[f64]) -> Vec<f64> {
    assert!(!scores.is_empty(), "cannot normalize an empty score set");
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max > min {
        scores.iter().map(|&s| (s - min) / (max - min)).collect()
    } else {
        vec![0.0; scores.len()]
    }
}
