//! Loading a dataset file and partitioning it by traffic category.

use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::Path;

use crate::dataset::record::{parse_record, RawRecord};
use crate::dataset::taxonomy::{AttackCategory, AttackClass, AttackTaxonomy};
use crate::{Error, Result};

/// Records partitioned into normal traffic and one bucket per attack
/// category. All four attack buckets are always present (possibly empty);
/// record order inside each bucket follows file order.
#[derive(Debug, Clone)]
pub struct TrafficPartition {
    pub normal: Vec<RawRecord>,
    pub attacks: BTreeMap<AttackCategory, Vec<RawRecord>>,
}

impl TrafficPartition {
    fn empty() -> Self {
        let mut attacks = BTreeMap::new();
        for cat in AttackCategory::ATTACKS {
            attacks.insert(cat, Vec::new());
        }
        Self {
            normal: Vec::new(),
            attacks,
        }
    }

    pub fn total(&self) -> usize {
        self.normal.len() + self.attacks.values().map(Vec::len).sum::<usize>()
    }

    /// All records, normal first then buckets in category order.
    pub fn iter_all(&self) -> impl Iterator<Item = &RawRecord> {
        self.normal
            .iter()
            .chain(self.attacks.values().flat_map(|v| v.iter()))
    }
}

/// Same partition after folding U2R and R2L into one bucket.
/// The merged bucket keeps all U2R records first, then all R2L.
#[derive(Debug, Clone)]
pub struct MergedPartition {
    pub normal: Vec<RawRecord>,
    pub attacks: BTreeMap<AttackClass, Vec<RawRecord>>,
}

impl MergedPartition {
    pub fn bucket(&self, class: AttackClass) -> &[RawRecord] {
        self.attacks.get(&class).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn total(&self) -> usize {
        self.normal.len() + self.attacks.values().map(Vec::len).sum::<usize>()
    }
}

/// Parse every line of `reader` and bucket the records by category.
///
/// Fails on the first malformed line or on a label missing from the
/// taxonomy, reporting the 1-based line number.
pub fn parse_split(reader: impl BufRead, taxonomy: &AttackTaxonomy) -> Result<TrafficPartition> {
    let mut partition = TrafficPartition::empty();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let record = parse_record(&line).map_err(|e| Error::Data {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        let category = taxonomy
            .category(&record.label)
            .ok_or_else(|| Error::UnknownLabel {
                line: lineno + 1,
                label: record.label.clone(),
            })?;
        match category {
            AttackCategory::Normal => partition.normal.push(record),
            attack => partition
                .attacks
                .get_mut(&attack)
                .expect("all attack buckets pre-populated")
                .push(record),
        }
    }
    Ok(partition)
}

/// [`parse_split`] over a file on disk.
pub fn load_split(path: &Path, taxonomy: &AttackTaxonomy) -> Result<TrafficPartition> {
    let file = std::fs::File::open(path).map_err(|e| {
        Error::Config(format!("cannot open dataset file {}: {e}", path.display()))
    })?;
    parse_split(std::io::BufReader::new(file), taxonomy)
}

/// Fold the rare U2R and R2L buckets into the single U2R+R2L class.
pub fn merge_rare_categories(partition: TrafficPartition) -> MergedPartition {
    let TrafficPartition { normal, mut attacks } = partition;
    let mut merged = BTreeMap::new();
    let dos = attacks.remove(&AttackCategory::Dos).unwrap_or_default();
    let probe = attacks.remove(&AttackCategory::Probe).unwrap_or_default();
    let mut rare = attacks.remove(&AttackCategory::U2r).unwrap_or_default();
    rare.extend(attacks.remove(&AttackCategory::R2l).unwrap_or_default());
    merged.insert(AttackClass::Dos, dos);
    merged.insert(AttackClass::Probe, probe);
    merged.insert(AttackClass::U2rR2l, rare);
    MergedPartition {
        normal,
        attacks: merged,
    }
}
