//! NSL-KDD dataset handling: record parsing, the feature schema, the
//! attack taxonomy, and category partitioning.

pub mod record;
pub mod schema;
pub mod split;
pub mod taxonomy;

pub use record::{parse_record, serialize_record, RawRecord, RawValue};
pub use schema::{
    group_of, numeric_indices, schema_fingerprint, symbolic_indices, FeatureGroup, FeatureKind,
    FeatureSpec, FEATURES, FEATURE_COUNT,
};
pub use split::{
    load_split, merge_rare_categories, parse_split, MergedPartition, TrafficPartition,
};
pub use taxonomy::{AttackCategory, AttackClass, AttackTaxonomy};
