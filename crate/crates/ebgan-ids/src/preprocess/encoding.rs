//! Fitted encoding pipeline: one-hot expansion of symbolic features and
//! min-max normalization of numeric ones.
//!
//! The model is fitted on the training split only. At encode time every
//! component is clamped into [0, 1], so test values outside the training
//! range and categories missing from the training vocabulary cannot break
//! the encoded-vector invariant: unseen categories become an all-zero
//! one-hot block, out-of-range numerics saturate at 0 or 1.

use std::io::{BufRead, BufReader, Read, Write};
use std::ops::Range;
use std::path::Path;

use ndarray::Array2;

use crate::dataset::{schema, FeatureKind, RawRecord, RawValue, FEATURES, FEATURE_COUNT};
use crate::{Error, Result};

/// Marker text produced by [`EncodingModel::decode_numeric`] for an
/// all-zero one-hot block (category unseen during fitting).
pub const UNKNOWN_CATEGORY: &str = "<unknown>";

#[derive(Debug, Clone, PartialEq)]
enum FeatureEncoding {
    Numeric { min: f64, max: f64 },
    OneHot { vocab: Vec<String> },
}

impl FeatureEncoding {
    fn width(&self) -> usize {
        match self {
            FeatureEncoding::Numeric { .. } => 1,
            FeatureEncoding::OneHot { vocab } => vocab.len(),
        }
    }
}

/// A dense vector in model space; every component lies in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedVector(Vec<f64>);

impl EncodedVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Deref for EncodedVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Stack encoded vectors into a row-per-record matrix.
pub fn stack(rows: &[EncodedVector]) -> Array2<f64> {
    let d = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut out = Array2::zeros((rows.len(), d));
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), d, "ragged encoded rows");
        for (j, &v) in row.iter().enumerate() {
            out[[i, j]] = v;
        }
    }
    out
}

/// Fitted vocabularies and per-column ranges; defines the encoded
/// dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingModel {
    encodings: Vec<FeatureEncoding>,
    offsets: Vec<usize>,
    encoded_dim: usize,
    fingerprint: u64,
}

/// Fit vocabularies and min/max ranges on training records.
///
/// Vocabularies are the distinct values seen per symbolic feature, sorted;
/// ranges are per-numeric-column min/max over the given records only.
pub fn fit_encoding(records: &[RawRecord]) -> Result<EncodingModel> {
    let mut iter = records.iter();
    fit_encoding_iter(&mut iter)
}

/// [`fit_encoding`] over an arbitrary record iterator.
pub fn fit_encoding_iter<'a>(
    records: &mut dyn Iterator<Item = &'a RawRecord>,
) -> Result<EncodingModel> {
    let mut vocabs: Vec<std::collections::BTreeSet<String>> =
        vec![Default::default(); FEATURE_COUNT];
    let mut ranges: Vec<Option<(f64, f64)>> = vec![None; FEATURE_COUNT];
    let mut count = 0usize;

    for record in records {
        assert_eq!(
            record.feature_count(),
            FEATURE_COUNT,
            "record does not match the {FEATURE_COUNT}-feature schema"
        );
        count += 1;
        for (idx, value) in record.features.iter().enumerate() {
            match (&FEATURES[idx].kind, value) {
                (FeatureKind::Symbolic, RawValue::Text(t)) => {
                    vocabs[idx].insert(t.clone());
                }
                (FeatureKind::Symbolic, RawValue::Num(_)) => {
                    panic!("numeric value at symbolic feature `{}`", FEATURES[idx].name)
                }
                (_, RawValue::Num(v)) => {
                    let entry = ranges[idx].get_or_insert((*v, *v));
                    entry.0 = entry.0.min(*v);
                    entry.1 = entry.1.max(*v);
                }
                (_, RawValue::Text(_)) => {
                    panic!("text value at numeric feature `{}`", FEATURES[idx].name)
                }
            }
        }
    }

    if count == 0 {
        return Err(Error::Config(
            "cannot fit encoding: no training records".into(),
        ));
    }

    let encodings: Vec<FeatureEncoding> = (0..FEATURE_COUNT)
        .map(|idx| match FEATURES[idx].kind {
            FeatureKind::Symbolic => FeatureEncoding::OneHot {
                vocab: vocabs[idx].iter().cloned().collect(),
            },
            _ => {
                let (min, max) = ranges[idx].expect("numeric range seen for every record");
                FeatureEncoding::Numeric { min, max }
            }
        })
        .collect();

    Ok(EncodingModel::from_encodings(encodings))
}

impl EncodingModel {
    fn from_encodings(encodings: Vec<FeatureEncoding>) -> Self {
        let mut offsets = Vec::with_capacity(FEATURE_COUNT);
        let mut dim = 0;
        for e in &encodings {
            offsets.push(dim);
            dim += e.width();
        }
        Self {
            encodings,
            offsets,
            encoded_dim: dim,
            fingerprint: schema::schema_fingerprint(),
        }
    }

    /// Total number of encoded columns `d`.
    pub fn encoded_dim(&self) -> usize {
        self.encoded_dim
    }

    /// Encoded columns occupied by raw feature `idx`.
    pub fn columns_of(&self, idx: usize) -> Range<usize> {
        let start = self.offsets[idx];
        start..start + self.encodings[idx].width()
    }

    /// Sorted vocabulary of a symbolic feature, if `idx` is symbolic.
    pub fn vocab(&self, idx: usize) -> Option<&[String]> {
        match &self.encodings[idx] {
            FeatureEncoding::OneHot { vocab } => Some(vocab),
            FeatureEncoding::Numeric { .. } => None,
        }
    }

    /// Fitted (min, max) of a numeric feature, if `idx` is numeric.
    pub fn range(&self, idx: usize) -> Option<(f64, f64)> {
        match self.encodings[idx] {
            FeatureEncoding::Numeric { min, max } => Some((min, max)),
            FeatureEncoding::OneHot { .. } => None,
        }
    }

    /// Encode one record. Symbolic features expand to one-hot blocks,
    /// numeric features map through (x - min) / (max - min); every
    /// component is clamped into [0, 1]. Constant columns encode as 0.
    pub fn encode(&self, record: &RawRecord) -> EncodedVector {
        assert_eq!(
            record.feature_count(),
            FEATURE_COUNT,
            "record does not match the {FEATURE_COUNT}-feature schema"
        );
        let mut out = vec![0.0; self.encoded_dim];
        for (idx, value) in record.features.iter().enumerate() {
            let offset = self.offsets[idx];
            match (&self.encodings[idx], value) {
                (FeatureEncoding::Numeric { min, max }, RawValue::Num(v)) => {
                    out[offset] = if max > min {
                        ((v - min) / (max - min)).clamp(0.0, 1.0)
                    } else {
                        0.0
                    };
                }
                (FeatureEncoding::OneHot { vocab }, RawValue::Text(t)) => {
                    if let Ok(pos) = vocab.binary_search(t) {
                        out[offset + pos] = 1.0;
                    }
                    // out-of-vocabulary: leave the block all zero
                }
                _ => panic!(
                    "value kind does not match schema at feature `{}`",
                    FEATURES[idx].name
                ),
            }
        }
        EncodedVector(out)
    }

    /// Encode a batch of records into a row-per-record matrix.
    pub fn encode_batch(&self, records: &[RawRecord]) -> Array2<f64> {
        let mut out = Array2::zeros((records.len(), self.encoded_dim));
        for (i, record) in records.iter().enumerate() {
            let row = self.encode(record);
            for (j, &v) in row.iter().enumerate() {
                out[[i, j]] = v;
            }
        }
        out
    }

    /// Invert the encoding back to record-shaped values: numeric columns
    /// through the inverse min-max map, one-hot blocks to their argmax
    /// category (an exactly-zero block becomes [`UNKNOWN_CATEGORY`]).
    pub fn decode_numeric(&self, v: &[f64]) -> Result<Vec<RawValue>> {
        if v.len() != self.encoded_dim {
            return Err(Error::Dimension(format!(
                "expected encoded vector of length {}, got {}",
                self.encoded_dim,
                v.len()
            )));
        }
        let mut out = Vec::with_capacity(FEATURE_COUNT);
        for idx in 0..FEATURE_COUNT {
            let offset = self.offsets[idx];
            match &self.encodings[idx] {
                FeatureEncoding::Numeric { min, max } => {
                    out.push(RawValue::Num(min + v[offset] * (max - min)));
                }
                FeatureEncoding::OneHot { vocab } => {
                    let block = &v[offset..offset + vocab.len()];
                    if block.iter().all(|&x| x == 0.0) {
                        out.push(RawValue::Text(UNKNOWN_CATEGORY.to_string()));
                    } else {
                        let (best, _) = block
                            .iter()
                            .enumerate()
                            .fold((0usize, f64::NEG_INFINITY), |(bi, bv), (i, &x)| {
                                if x > bv {
                                    (i, x)
                                } else {
                                    (bi, bv)
                                }
                            });
                        out.push(RawValue::Text(vocab[best].clone()));
                    }
                }
            }
        }
        Ok(out)
    }

    // ---- artifact persistence -------------------------------------------

    /// Write the model as a deterministic, diff-friendly text artifact.
    pub fn write_to(&self, w: &mut dyn Write) -> Result<()> {
        writeln!(w, "ebgan-ids-encoding v1")?;
        writeln!(w, "schema {:016x}", self.fingerprint)?;
        writeln!(w, "encoded_dim {}", self.encoded_dim)?;
        for (idx, encoding) in self.encodings.iter().enumerate() {
            let name = FEATURES[idx].name;
            match encoding {
                FeatureEncoding::Numeric { min, max } => {
                    writeln!(w, "feature {name} range {min} {max}")?;
                }
                FeatureEncoding::OneHot { vocab } => {
                    writeln!(w, "feature {name} onehot {}", vocab.len())?;
                    for cat in vocab {
                        writeln!(w, "{cat}")?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Parse an artifact produced by [`EncodingModel::write_to`].
    pub fn read_from(r: &mut dyn Read) -> Result<Self> {
        let reader = BufReader::new(r);
        let mut lines = reader.lines();
        let mut next = || -> Result<String> {
            lines
                .next()
                .transpose()?
                .ok_or_else(|| Error::Artifact("unexpected end of encoding artifact".into()))
        };

        let header = next()?;
        if header.trim() != "ebgan-ids-encoding v1" {
            return Err(Error::Artifact(format!(
                "unrecognized encoding artifact header `{header}`"
            )));
        }
        let schema_line = next()?;
        let fingerprint = schema_line
            .strip_prefix("schema ")
            .and_then(|h| u64::from_str_radix(h.trim(), 16).ok())
            .ok_or_else(|| Error::Artifact(format!("bad schema line `{schema_line}`")))?;
        if fingerprint != schema::schema_fingerprint() {
            return Err(Error::Artifact(
                "encoding artifact was fitted against a different feature schema".into(),
            ));
        }
        let dim_line = next()?;
        let stated_dim: usize = dim_line
            .strip_prefix("encoded_dim ")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Artifact(format!("bad encoded_dim line `{dim_line}`")))?;

        let mut encodings = Vec::with_capacity(FEATURE_COUNT);
        for idx in 0..FEATURE_COUNT {
            let line = next()?;
            let mut parts = line.split_whitespace();
            let (tag, name) = (parts.next(), parts.next());
            if tag != Some("feature") || name != Some(FEATURES[idx].name) {
                return Err(Error::Artifact(format!(
                    "expected feature `{}` at position {idx}, got `{line}`",
                    FEATURES[idx].name
                )));
            }
            match parts.next() {
                Some("range") => {
                    let min: f64 = parts
                        .next()
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| Error::Artifact(format!("bad range line `{line}`")))?;
                    let max: f64 = parts
                        .next()
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| Error::Artifact(format!("bad range line `{line}`")))?;
                    if !min.is_finite() || !max.is_finite() || min > max {
                        return Err(Error::Artifact(format!(
                            "invalid range [{min}, {max}] for `{}`",
                            FEATURES[idx].name
                        )));
                    }
                    encodings.push(FeatureEncoding::Numeric { min, max });
                }
                Some("onehot") => {
                    let n: usize = parts
                        .next()
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| Error::Artifact(format!("bad onehot line `{line}`")))?;
                    let mut vocab = Vec::with_capacity(n);
                    for _ in 0..n {
                        vocab.push(next()?);
                    }
                    if vocab.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(Error::Artifact(format!(
                            "vocabulary for `{}` is not sorted/duplicate-free",
                            FEATURES[idx].name
                        )));
                    }
                    encodings.push(FeatureEncoding::OneHot { vocab });
                }
                other => {
                    return Err(Error::Artifact(format!(
                        "unknown feature encoding `{other:?}` in `{line}`"
                    )));
                }
            }
        }

        let model = EncodingModel::from_encodings(encodings);
        if model.encoded_dim != stated_dim {
            return Err(Error::Artifact(format!(
                "stated encoded_dim {stated_dim} does not match content ({})",
                model.encoded_dim
            )));
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        std::fs::write(path, buf)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut file = std::fs::File::open(path).map_err(|e| {
            Error::Artifact(format!("cannot open encoding artifact {}: {e}", path.display()))
        })?;
        Self::read_from(&mut file)
    }
}
