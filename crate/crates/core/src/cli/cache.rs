//! Append-only result store: one JSON line per canonical spec hash.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::factorize::FactorizationSpec;

const FILE_NAME: &str = "results.jsonl";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: String,
    pub spec: FactorizationSpec,
    pub value: u64,
    pub engine_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

pub struct ResultCache {
    dir: PathBuf,
}

/// Hex sha256 of the spec's canonical JSON (partitions are stored sorted, so
/// equal problems hash equally).
pub fn spec_key(spec: &FactorizationSpec) -> String {
    let canonical = serde_json::to_string(spec).expect("specs serialize");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

impl ResultCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ResultCache { dir: dir.into() }
    }

    pub fn path(&self) -> PathBuf {
        self.dir.join(FILE_NAME)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// All records; unreadable lines are skipped.
    pub fn records(&self) -> io::Result<Vec<CacheRecord>> {
        let text = match fs::read_to_string(self.path()) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e),
        };
        Ok(text.lines().filter_map(|l| serde_json::from_str(l).ok()).collect())
    }

    pub fn lookup(&self, spec: &FactorizationSpec) -> io::Result<Option<u64>> {
        let key = spec_key(spec);
        Ok(self.records()?.into_iter().find(|r| r.key == key).map(|r| r.value))
    }

    /// Appends a record by rewriting the file through a temporary sibling
    /// and renaming it into place, so readers never see a torn file.
    pub fn store(&self, spec: &FactorizationSpec, value: u64) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let key = spec_key(spec);
        let mut records = self.records()?;
        if records.iter().any(|r| r.key == key) {
            return Ok(());
        }
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        records.push(CacheRecord {
            key,
            spec: spec.clone(),
            value,
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
        });
        let tmp = self.dir.join(format!(".{FILE_NAME}.{}.{}", std::process::id(), timestamp_nanos()));
        {
            let mut f = fs::File::create(&tmp)?;
            for r in &records {
                serde_json::to_writer(&mut f, r)?;
                f.write_all(b"\n")?;
            }
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path())
    }

    /// Removes the store; returns how many records it held.
    pub fn clear(&self) -> io::Result<usize> {
        let n = self.records()?.len();
        match fs::remove_file(self.path()) {
            Ok(()) => Ok(n),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(0),
            Err(e) => Err(e),
        }
    }
}

fn timestamp_nanos() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::Variant;

    #[test]
    fn round_trip_and_clear() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::new(dir.path());
        let spec = FactorizationSpec::parse(0, "1,1,1", "1,1,1", Variant::Monotone, None).unwrap();
        assert_eq!(cache.lookup(&spec).unwrap(), None);
        cache.store(&spec, 8).unwrap();
        cache.store(&spec, 8).unwrap();
        assert_eq!(cache.lookup(&spec).unwrap(), Some(8));
        assert_eq!(cache.records().unwrap().len(), 1);
        assert_eq!(cache.clear().unwrap(), 1);
        assert_eq!(cache.lookup(&spec).unwrap(), None);
    }

    #[test]
    fn key_ignores_part_order() {
        let a = FactorizationSpec::parse(0, "1,3", "2,2", Variant::Complex, None).unwrap();
        let b = FactorizationSpec::parse(0, "3,1", "2,2", Variant::Complex, None).unwrap();
        assert_eq!(spec_key(&a), spec_key(&b));
    }
}
