//! The 41-feature NSL-KDD record schema.
//!
//! Features fall into four groups by position (0-based indices):
//! Intrinsic 0..9, Content 9..22, Time-based 22..31, Host-based 31..41.
//! Three features are symbolic (protocol_type, service, flag), four are
//! binary flags, the remaining 34 are continuous. Symbolic and binary
//! features together form the seven discrete features of the dataset.

/// Number of features in one record, excluding label and difficulty.
pub const FEATURE_COUNT: usize = 41;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Continuous,
    /// Integer-valued numeric feature. Not used by the stock schema but kept
    /// so alternate schemas can distinguish counts from rates.
    DiscreteNumeric,
    /// Categorical text feature, one-hot encoded.
    Symbolic,
    /// 0/1 flag.
    Binary,
}

impl FeatureKind {
    /// Everything except symbolic features is carried as a number.
    pub fn is_numeric(self) -> bool {
        !matches!(self, FeatureKind::Symbolic)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FeatureGroup {
    Intrinsic,
    Content,
    TimeBased,
    HostBased,
}

impl FeatureGroup {
    pub const ALL: [FeatureGroup; 4] = [
        FeatureGroup::Intrinsic,
        FeatureGroup::Content,
        FeatureGroup::TimeBased,
        FeatureGroup::HostBased,
    ];

    /// Index range (0-based, half-open) covered by this group.
    pub fn index_range(self) -> std::ops::Range<usize> {
        match self {
            FeatureGroup::Intrinsic => 0..9,
            FeatureGroup::Content => 9..22,
            FeatureGroup::TimeBased => 22..31,
            FeatureGroup::HostBased => 31..41,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureGroup::Intrinsic => "intrinsic",
            FeatureGroup::Content => "content",
            FeatureGroup::TimeBased => "time-based",
            FeatureGroup::HostBased => "host-based",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FeatureSpec {
    pub name: &'static str,
    pub kind: FeatureKind,
}

use FeatureKind::{Binary, Continuous, Symbolic};

/// The stock NSL-KDD feature table, in file column order.
pub static FEATURES: [FeatureSpec; FEATURE_COUNT] = [
    FeatureSpec { name: "duration", kind: Continuous },
    FeatureSpec { name: "protocol_type", kind: Symbolic },
    FeatureSpec { name: "service", kind: Symbolic },
    FeatureSpec { name: "flag", kind: Symbolic },
    FeatureSpec { name: "src_bytes", kind: Continuous },
    FeatureSpec { name: "dst_bytes", kind: Continuous },
    FeatureSpec { name: "land", kind: Binary },
    FeatureSpec { name: "wrong_fragment", kind: Continuous },
    FeatureSpec { name: "urgent", kind: Continuous },
    FeatureSpec { name: "hot", kind: Continuous },
    FeatureSpec { name: "num_failed_logins", kind: Continuous },
    FeatureSpec { name: "logged_in", kind: Binary },
    FeatureSpec { name: "num_compromised", kind: Continuous },
    FeatureSpec { name: "root_shell", kind: Continuous },
    FeatureSpec { name: "su_attempted", kind: Continuous },
    FeatureSpec { name: "num_root", kind: Continuous },
    FeatureSpec { name: "num_file_creations", kind: Continuous },
    FeatureSpec { name: "num_shells", kind: Continuous },
    FeatureSpec { name: "num_access_files", kind: Continuous },
    FeatureSpec { name: "num_outbound_cmds", kind: Continuous },
    FeatureSpec { name: "is_host_login", kind: Binary },
    FeatureSpec { name: "is_guest_login", kind: Binary },
    FeatureSpec { name: "count", kind: Continuous },
    FeatureSpec { name: "srv_count", kind: Continuous },
    FeatureSpec { name: "serror_rate", kind: Continuous },
    FeatureSpec { name: "srv_serror_rate", kind: Continuous },
    FeatureSpec { name: "rerror_rate", kind: Continuous },
    FeatureSpec { name: "srv_rerror_rate", kind: Continuous },
    FeatureSpec { name: "same_srv_rate", kind: Continuous },
    FeatureSpec { name: "diff_srv_rate", kind: Continuous },
    FeatureSpec { name: "srv_diff_host_rate", kind: Continuous },
    FeatureSpec { name: "dst_host_count", kind: Continuous },
    FeatureSpec { name: "dst_host_srv_count", kind: Continuous },
    FeatureSpec { name: "dst_host_same_srv_rate", kind: Continuous },
    FeatureSpec { name: "dst_host_diff_srv_rate", kind: Continuous },
    FeatureSpec { name: "dst_host_same_src_port_rate", kind: Continuous },
    FeatureSpec { name: "dst_host_srv_diff_host_rate", kind: Continuous },
    FeatureSpec { name: "dst_host_serror_rate", kind: Continuous },
    FeatureSpec { name: "dst_host_srv_serror_rate", kind: Continuous },
    FeatureSpec { name: "dst_host_rerror_rate", kind: Continuous },
    FeatureSpec { name: "dst_host_srv_rerror_rate", kind: Continuous },
];

/// Group of the feature at `index`. Panics if out of range.
pub fn group_of(index: usize) -> FeatureGroup {
    for group in FeatureGroup::ALL {
        if group.index_range().contains(&index) {
            return group;
        }
    }
    panic!("feature index {index} out of range 0..{FEATURE_COUNT}");
}

/// Indices of the three symbolic features, ascending.
pub fn symbolic_indices() -> impl Iterator<Item = usize> {
    FEATURES
        .iter()
        .enumerate()
        .filter(|(_, s)| s.kind == Symbolic)
        .map(|(i, _)| i)
}

/// Indices of every numeric (non-symbolic) feature, ascending.
pub fn numeric_indices() -> impl Iterator<Item = usize> {
    FEATURES
        .iter()
        .enumerate()
        .filter(|(_, s)| s.kind.is_numeric())
        .map(|(i, _)| i)
}

/// FNV-1a fingerprint of the feature table, used to detect encoding
/// artifacts written against a different schema.
pub fn schema_fingerprint() -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            hash ^= u64::from(b);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    for spec in &FEATURES {
        eat(spec.name.as_bytes());
        eat(&[b':', spec.kind as u8, b';']);
    }
    hash
}
