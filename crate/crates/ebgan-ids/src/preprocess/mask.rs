//! Functionality-preserving feature masks.
//!
//! Each attack class keeps the feature groups that carry its malicious
//! function untouched and exposes the remaining numeric features for the
//! generator to rewrite. Symbolic features all live in the intrinsic
//! group, which is never rewritten, so every replaced column is numeric
//! and occupies exactly one encoded column.

use crate::dataset::{group_of, AttackClass, FeatureGroup, FeatureKind, FEATURES, FEATURE_COUNT};
use crate::preprocess::EncodingModel;

/// Feature groups the generator may rewrite for a given attack class.
pub fn replaced_groups(class: AttackClass) -> &'static [FeatureGroup] {
    match class {
        AttackClass::Dos => &[FeatureGroup::Content, FeatureGroup::HostBased],
        AttackClass::Probe => &[FeatureGroup::Content],
        AttackClass::U2rR2l => &[FeatureGroup::TimeBased, FeatureGroup::HostBased],
    }
}

/// Partition of the feature indices into preserved and replaced parts,
/// with the replaced part also resolved to encoded-column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalMask {
    pub class: AttackClass,
    /// Raw feature indices the generator must leave untouched (ascending).
    pub preserved_raw: Vec<usize>,
    /// Raw feature indices the generator rewrites (ascending).
    pub replaced_raw: Vec<usize>,
    /// Encoded-column indices corresponding to `replaced_raw` (ascending).
    pub replaced_encoded: Vec<usize>,
}

impl FunctionalMask {
    /// Number of features the generator outputs for this class.
    pub fn replaced_count(&self) -> usize {
        self.replaced_raw.len()
    }
}

/// Resolve the mask for `class` against a fitted encoding.
pub fn build_mask(class: AttackClass, model: &EncodingModel) -> FunctionalMask {
    let groups = replaced_groups(class);
    let mut preserved_raw = Vec::new();
    let mut replaced_raw = Vec::new();
    let mut replaced_encoded = Vec::new();
    for idx in 0..FEATURE_COUNT {
        if groups.contains(&group_of(idx)) {
            assert!(
                FEATURES[idx].kind != FeatureKind::Symbolic,
                "symbolic feature `{}` cannot be rewritten",
                FEATURES[idx].name
            );
            let cols = model.columns_of(idx);
            assert_eq!(cols.len(), 1, "numeric feature spans one encoded column");
            replaced_raw.push(idx);
            replaced_encoded.push(cols.start);
        } else {
            preserved_raw.push(idx);
        }
    }
    FunctionalMask {
        class,
        preserved_raw,
        replaced_raw,
        replaced_encoded,
    }
}
