//! Parsing and serialization of single NSL-KDD records.
//!
//! A line carries 41 comma-separated feature values, the attack label, and
//! optionally a difficulty score in 0..=21 (distributed copies of the
//! dataset differ on whether the difficulty column is present).

use crate::dataset::schema::{FeatureKind, FEATURES, FEATURE_COUNT};
use crate::{Error, Result};

/// One feature value in raw (file) form.
#[derive(Debug, Clone, PartialEq)]
pub enum RawValue {
    /// Symbolic feature, kept as the exact text from the file.
    Text(String),
    /// Numeric feature (continuous or binary).
    Num(f64),
}

impl RawValue {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            RawValue::Num(v) => Some(*v),
            RawValue::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            RawValue::Text(t) => Some(t),
            RawValue::Num(_) => None,
        }
    }
}

/// A parsed traffic record: 41 feature values, attack label, optional
/// difficulty. Constructed through [`parse_record`], which enforces the
/// schema (value kinds, finite non-negative numerics, difficulty range).
#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    pub features: Vec<RawValue>,
    pub label: String,
    pub difficulty: Option<u8>,
}

impl RawRecord {
    pub fn feature_count(&self) -> usize {
        self.features.len()
    }
}

/// Parse one comma-separated line into a record.
///
/// Accepts 42 fields (features + label) or 43 (plus the difficulty column).
pub fn parse_record(line: &str) -> Result<RawRecord> {
    let line = line.trim_end_matches(['\r', '\n']);
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != FEATURE_COUNT + 1 && fields.len() != FEATURE_COUNT + 2 {
        return Err(Error::Parse(format!(
            "expected {} or {} comma-separated fields, got {}",
            FEATURE_COUNT + 1,
            FEATURE_COUNT + 2,
            fields.len()
        )));
    }

    let mut features = Vec::with_capacity(FEATURE_COUNT);
    for (idx, raw) in fields[..FEATURE_COUNT].iter().enumerate() {
        let spec = &FEATURES[idx];
        match spec.kind {
            FeatureKind::Symbolic => {
                if raw.is_empty() {
                    return Err(Error::Parse(format!("empty value for `{}`", spec.name)));
                }
                features.push(RawValue::Text((*raw).to_string()));
            }
            FeatureKind::Binary => {
                let v: f64 = raw.parse().map_err(|_| {
                    Error::Parse(format!("unknown boolean encoding `{raw}` for `{}`", spec.name))
                })?;
                if v != 0.0 && v != 1.0 {
                    return Err(Error::Parse(format!(
                        "unknown boolean encoding `{raw}` for `{}`",
                        spec.name
                    )));
                }
                features.push(RawValue::Num(v));
            }
            FeatureKind::Continuous | FeatureKind::DiscreteNumeric => {
                let v: f64 = raw.parse().map_err(|_| {
                    Error::Parse(format!("non-numeric value `{raw}` for `{}`", spec.name))
                })?;
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Parse(format!(
                        "value `{raw}` for `{}` must be a finite non-negative number",
                        spec.name
                    )));
                }
                features.push(RawValue::Num(v));
            }
        }
    }

    let label = fields[FEATURE_COUNT];
    if label.is_empty() {
        return Err(Error::Parse("empty attack label".into()));
    }

    let difficulty = if fields.len() == FEATURE_COUNT + 2 {
        let raw = fields[FEATURE_COUNT + 1];
        let v: u8 = raw
            .parse()
            .map_err(|_| Error::Parse(format!("bad difficulty value `{raw}`")))?;
        if v > 21 {
            return Err(Error::Parse(format!("difficulty {v} outside 0..=21")));
        }
        Some(v)
    } else {
        None
    };

    Ok(RawRecord {
        features,
        label: label.to_string(),
        difficulty,
    })
}

/// Render a record back to its file form. Numeric values use the shortest
/// text that round-trips, so `parse_record(serialize_record(r)) == r`.
pub fn serialize_record(record: &RawRecord) -> String {
    let mut out = String::new();
    for value in &record.features {
        match value {
            RawValue::Text(t) => out.push_str(t),
            RawValue::Num(v) => out.push_str(&v.to_string()),
        }
        out.push(',');
    }
    out.push_str(&record.label);
    if let Some(d) = record.difficulty {
        out.push(',');
        out.push_str(&d.to_string());
    }
    out
}
