//! Attack-name to traffic-category mapping.
//!
//! The five categories are Normal, DoS, Probe, U2R and R2L. Because U2R and
//! R2L are rare and share the same functional-feature profile, training and
//! masking work on the coarser [`AttackClass`] where the two are merged.
//!
//! The mapping ships as a plain `name,category` text file
//! (`data/attack_taxonomy.txt`, embedded as the default) so it can be
//! audited or replaced; it covers the extended label set of KDDTest+.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::{Error, Result};

/// One of the five traffic categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AttackCategory {
    Normal,
    Dos,
    Probe,
    U2r,
    R2l,
}

impl AttackCategory {
    pub const ATTACKS: [AttackCategory; 4] = [
        AttackCategory::Dos,
        AttackCategory::Probe,
        AttackCategory::U2r,
        AttackCategory::R2l,
    ];

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "normal" => Some(AttackCategory::Normal),
            "dos" => Some(AttackCategory::Dos),
            "probe" => Some(AttackCategory::Probe),
            "u2r" => Some(AttackCategory::U2r),
            "r2l" => Some(AttackCategory::R2l),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AttackCategory::Normal => "normal",
            AttackCategory::Dos => "dos",
            AttackCategory::Probe => "probe",
            AttackCategory::U2r => "u2r",
            AttackCategory::R2l => "r2l",
        }
    }

    /// Training-level class, with U2R and R2L folded together.
    /// `Normal` has no attack class.
    pub fn class(self) -> Option<AttackClass> {
        match self {
            AttackCategory::Normal => None,
            AttackCategory::Dos => Some(AttackClass::Dos),
            AttackCategory::Probe => Some(AttackClass::Probe),
            AttackCategory::U2r | AttackCategory::R2l => Some(AttackClass::U2rR2l),
        }
    }
}

impl fmt::Display for AttackCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Attack granularity used for masking and adversarial training:
/// DoS, Probe, and the merged U2R+R2L class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AttackClass {
    Dos,
    Probe,
    U2rR2l,
}

impl AttackClass {
    pub const ALL: [AttackClass; 3] = [AttackClass::Dos, AttackClass::Probe, AttackClass::U2rR2l];

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "dos" => Some(AttackClass::Dos),
            "probe" => Some(AttackClass::Probe),
            "u2r+r2l" => Some(AttackClass::U2rR2l),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AttackClass::Dos => "dos",
            AttackClass::Probe => "probe",
            AttackClass::U2rR2l => "u2r+r2l",
        }
    }
}

impl fmt::Display for AttackClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Lookup table from lowercase attack-name text to category.
#[derive(Debug, Clone)]
pub struct AttackTaxonomy {
    map: BTreeMap<String, AttackCategory>,
}

static BUILTIN: &str = include_str!("../../data/attack_taxonomy.txt");

impl AttackTaxonomy {
    /// The taxonomy shipped with the crate (standard extended NSL-KDD labels).
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("embedded taxonomy must parse")
    }

    /// Parse `name,category` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, cat_text) = line.split_once(',').ok_or_else(|| Error::Data {
                line: lineno + 1,
                message: format!("expected `name,category`, got `{line}`"),
            })?;
            let name = name.trim();
            let cat_text = cat_text.trim();
            if name.is_empty() || name.chars().any(|c| c.is_ascii_uppercase()) {
                return Err(Error::Data {
                    line: lineno + 1,
                    message: format!("attack name must be non-empty lowercase, got `{name}`"),
                });
            }
            let category = AttackCategory::parse(cat_text).ok_or_else(|| Error::Data {
                line: lineno + 1,
                message: format!(
                    "unknown category `{cat_text}` (want normal/dos/probe/u2r/r2l)"
                ),
            })?;
            if let Some(prev) = map.insert(name.to_string(), category) {
                if prev != category {
                    return Err(Error::Data {
                        line: lineno + 1,
                        message: format!(
                            "label `{name}` mapped to both {prev} and {category}"
                        ),
                    });
                }
            }
        }
        if map.get("normal") != Some(&AttackCategory::Normal) {
            return Err(Error::Config(
                "taxonomy must map `normal` to the normal category".into(),
            ));
        }
        Ok(Self { map })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn category(&self, label: &str) -> Option<AttackCategory> {
        self.map.get(label).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, AttackCategory)> {
        self.map.iter().map(|(k, v)| (k.as_str(), *v))
    }
}
