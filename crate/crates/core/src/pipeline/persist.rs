use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::report::{Conventions, InvariantReport, REPORT_SCHEMA};
use crate::dynamics::{gamma_braid, ProjectionConfig, CASCADE_SCHEMA};
use crate::modular::OrderCache;
use crate::{BraidWord, Cascade, Error, Result};

#[derive(Deserialize)]
struct SchemaTag {
    schema: Option<String>,
}

fn load_tagged<T: DeserializeOwned>(path: &Path, expected: &str) -> Result<T> {
    let text = fs::read_to_string(path)?;
    let tag: SchemaTag = serde_json::from_str(&text)?;
    match tag.schema.as_deref() {
        Some(s) if s == expected => Ok(serde_json::from_str(&text)?),
        found => Err(Error::Config(format!(
            "{} has schema {}, expected {expected}; regenerate it with this version",
            path.display(),
            found.unwrap_or("(none)")
        ))),
    }
}

/// On-disk form of a cascade record. The extra fields are for readers; loading ignores them.
#[derive(Serialize)]
struct RecordFile<'a> {
    #[serde(flatten)]
    record: &'a Cascade,
    projection: &'a ProjectionConfig<f64>,
    /// Braid of each stage from 0, null where extraction failed.
    braids: Vec<Option<BraidWord>>,
    conventions: Conventions,
}

/// Writes `record` together with its stage braids under `projection`.
pub fn save_record(record: &Cascade, projection: &ProjectionConfig<f64>, path: &Path) -> Result<()> {
    let file = RecordFile {
        record,
        projection,
        braids: (0..=record.stages.len()).map(|n| gamma_braid(record, n, projection).ok()).collect(),
        conventions: Conventions::default(),
    };
    let mut s = serde_json::to_string_pretty(&file)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

/// Loads a cascade record, refusing files written under another schema.
pub fn load_record(path: &Path) -> Result<Cascade> {
    load_tagged(path, CASCADE_SCHEMA)
}

pub fn save_report(report: &InvariantReport, path: &Path) -> Result<()> {
    fs::write(path, report.to_json())?;
    Ok(())
}

pub fn load_report(path: &Path) -> Result<InvariantReport> {
    load_tagged(path, REPORT_SCHEMA)
}

/// Merges the cache file at `path` (if any) into the process-wide order cache.
pub fn load_order_cache(path: &Path) -> Result<usize> {
    let cache = OrderCache::load(path)?;
    OrderCache::global().extend_from(&cache);
    Ok(cache.len())
}

pub fn save_order_cache(path: &Path) -> Result<()> {
    OrderCache::global().save(path)
}
