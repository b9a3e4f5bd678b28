//! On-disk volume cache: pretty JSON `{ "version": 1, "volumes": [...] }`
//! with records sorted by `(g, n)` so equal caches give equal bytes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{PolyRecord, VolumePolynomial};
use crate::recursion::VolumeCache;

/// Environment variable naming the cache file when `--cache` is absent.
pub const CACHE_ENV: &str = "WPVOL_CACHE";

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub version: u32,
    pub volumes: Vec<PolyRecord>,
}

impl CacheFile {
    pub fn from_cache(cache: &VolumeCache) -> Self {
        let mut volumes: Vec<PolyRecord> = cache.entries().iter().map(|v| v.to_record()).collect();
        volumes.sort_by_key(|r| (r.g, r.n));
        CacheFile {
            version: FORMAT_VERSION,
            volumes,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CacheFile = serde_json::from_str(text)?;
        if file.version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "cache format version {} is not supported (expected {FORMAT_VERSION})",
                file.version
            )));
        }
        Ok(file)
    }

    /// Inserts every record into `cache`. Each polynomial is re-checked for
    /// the volume invariants, and must agree with any entry already present.
    pub fn load_into(&self, cache: &VolumeCache) -> Result<usize> {
        for rec in &self.volumes {
            let poly = VolumePolynomial::from_record(rec)?;
            if let Some(existing) = cache.get(rec.g, rec.n) {
                if *existing != poly {
                    return Err(Error::Internal(format!(
                        "cached V_({},{}) disagrees with the value in memory",
                        rec.g, rec.n
                    )));
                }
                continue;
            }
            cache.insert(poly)?;
        }
        Ok(self.volumes.len())
    }
}

/// Writes `cache` to `path`.
pub fn save(path: &Path, cache: &VolumeCache) -> Result<()> {
    std::fs::write(path, CacheFile::from_cache(cache).to_json()?)?;
    Ok(())
}

/// Reads `path` into `cache`; returns the number of records.
pub fn load(path: &Path, cache: &VolumeCache) -> Result<usize> {
    CacheFile::from_json(&std::fs::read_to_string(path)?)?.load_into(cache)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::compute_volume;

    #[test]
    fn round_trip_is_byte_stable() {
        let cache = VolumeCache::new();
        compute_volume(1, 3, &cache).unwrap();
        let text = CacheFile::from_cache(&cache).to_json().unwrap();
        let other = VolumeCache::new();
        CacheFile::from_json(&text).unwrap().load_into(&other).unwrap();
        assert_eq!(other.len(), cache.len());
        assert_eq!(CacheFile::from_cache(&other).to_json().unwrap(), text);
    }

    #[test]
    fn rejects_bad_input() {
        let cache = VolumeCache::new();
        assert!(CacheFile::from_json("{\"version\": 9, \"volumes\": []}").is_err());
        let asymmetric = r#"{"version":1,"volumes":[{"g":0,"n":4,"terms":[
            {"p":1,"x":[0,0,0,0],"num":"2","den":"1"},
            {"p":0,"x":[1,0,0,0],"num":"1","den":"2"}]}]}"#;
        let file = CacheFile::from_json(asymmetric).unwrap();
        assert!(file.load_into(&cache).is_err());
        assert!(cache.is_empty());
    }

    #[test]
    fn conflicting_entry_is_rejected() {
        let cache = VolumeCache::new();
        compute_volume(1, 1, &cache).unwrap();
        let wrong = r#"{"version":1,"volumes":[{"g":1,"n":1,"terms":[
            {"p":1,"x":[0],"num":"1","den":"13"},
            {"p":0,"x":[1],"num":"1","den":"48"}]}]}"#;
        assert!(CacheFile::from_json(wrong).unwrap().load_into(&cache).is_err());
    }
}
