//! On-disk cache of norm tables.
//!
//! Entries are keyed by a SHA-256 of the group descriptor, norm name,
//! generator literals and tool version. An entry that fails to parse or
//! whose checksum does not match is deleted and reported as a miss.

use crate::error::{Error, Result};
use crate::group::{Element, GroupDescriptor};
use crate::norms::NormTable;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

pub const CACHE_DIR_ENV: &str = "CINORM_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CacheKey(String);

impl CacheKey {
    pub fn new(descriptor: &GroupDescriptor, norm: &str, generators: &[Element], version: &str) -> Self {
        let mut h = Sha256::new();
        for part in [descriptor.to_string().as_str(), norm, version] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
        h.update((generators.len() as u64).to_le_bytes());
        for g in generators {
            let s = g.to_string();
            h.update((s.len() as u64).to_le_bytes());
            h.update(s.as_bytes());
        }
        CacheKey(hex::encode(h.finalize()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    key: String,
    version: String,
    checksum: String,
    payload: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Miss,
    /// A corrupt entry was found and removed.
    Evicted,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
    version: String,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>, version: impl Into<String>) -> Self {
        Cache { dir: dir.into(), version: version.into() }
    }

    /// `$CINORM_CACHE_DIR`, else `$XDG_CACHE_HOME/cinorm`, else
    /// `$HOME/.cache/cinorm`, else a directory under the system temp dir.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("XDG_CACHE_HOME").map(|d| PathBuf::from(d).join("cinorm")))
            .or_else(|| std::env::var_os("HOME").map(|d| PathBuf::from(d).join(".cache").join("cinorm")))
            .unwrap_or_else(|| std::env::temp_dir().join("cinorm-cache"));
        Cache::new(dir, crate::VERSION)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn key(&self, descriptor: &GroupDescriptor, norm: &str, generators: &[Element]) -> CacheKey {
        CacheKey::new(descriptor, norm, generators, &self.version)
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.0))
    }

    /// The cached table, `Ok(None)` on a miss or after evicting a corrupt
    /// entry. IO errors other than "not found" are returned.
    pub fn get(&self, key: &CacheKey) -> Result<(Option<NormTable>, CacheOutcome)> {
        let path = self.path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((None, CacheOutcome::Miss)),
            Err(e) => return Err(e.into()),
        };
        match self.decode(key, &text) {
            Some(table) => Ok((Some(table), CacheOutcome::Hit)),
            None => {
                fs::remove_file(&path)?;
                Ok((None, CacheOutcome::Evicted))
            }
        }
    }

    fn decode(&self, key: &CacheKey, text: &str) -> Option<NormTable> {
        let env: Envelope = serde_json::from_str(text).ok()?;
        if env.key != key.0 || env.version != self.version || env.checksum != checksum(&env.payload) {
            return None;
        }
        let table = NormTable::from_json(&env.payload).ok()?;
        (table.to_json() == env.payload).then_some(table)
    }

    pub fn put(&self, key: &CacheKey, table: &NormTable) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let payload = table.to_json();
        let env = Envelope { key: key.0.clone(), version: self.version.clone(), checksum: checksum(&payload), payload };
        let text = serde_json::to_string(&env).map_err(|e| Error::Io(e.to_string()))?;
        let tmp = self.dir.join(format!(".{}.{}.tmp", key.0, std::process::id()));
        fs::write(&tmp, text)?;
        fs::rename(&tmp, self.path(key))?;
        Ok(())
    }

    /// Cached value, or `compute` followed by a best-effort `put`. Cache IO
    /// failures never fail the computation.
    pub fn get_or_compute(
        &self,
        key: &CacheKey,
        compute: impl FnOnce() -> Result<NormTable>,
    ) -> Result<(NormTable, CacheOutcome)> {
        let outcome = match self.get(key) {
            Ok((Some(t), o)) => return Ok((t, o)),
            Ok((None, o)) => o,
            Err(_) => CacheOutcome::Miss,
        };
        let table = compute()?;
        let _ = self.put(key, &table);
        Ok((table, outcome))
    }

    /// Cache entry file names, sorted.
    pub fn entries(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        match fs::read_dir(&self.dir) {
            Ok(rd) => {
                for e in rd {
                    let name = e?.file_name().to_string_lossy().into_owned();
                    if name.ends_with(".json") && !name.starts_with('.') {
                        out.push(name);
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(e.into()),
        }
        out.sort();
        Ok(out)
    }

    /// Remove every entry; returns how many were removed.
    pub fn clear(&self) -> Result<usize> {
        let entries = self.entries()?;
        for name in &entries {
            fs::remove_file(self.dir.join(name))?;
        }
        Ok(entries.len())
    }
}

fn checksum(payload: &str) -> String {
    hex::encode(Sha256::digest(payload.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, DEFAULT_LIMIT};
    use crate::norms::TrivialNorm;

    fn table() -> NormTable {
        let g = FiniteGroup::enumerate(&"sn:3".parse().unwrap(), DEFAULT_LIMIT).unwrap();
        NormTable::from_norm(&g, &TrivialNorm).unwrap()
    }

    #[test]
    fn round_trip_version_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path(), "1.0.0");
        let t = table();
        let key = cache.key(t.descriptor(), t.name(), &[]);
        assert_eq!(cache.get(&key).unwrap(), (None, CacheOutcome::Miss));
        cache.put(&key, &t).unwrap();
        let (hit, outcome) = cache.get(&key).unwrap();
        assert_eq!(outcome, CacheOutcome::Hit);
        assert_eq!(hit.unwrap().to_json(), t.to_json());

        let bumped = Cache::new(dir.path(), "1.0.1");
        assert_ne!(bumped.key(t.descriptor(), t.name(), &[]), key);
        assert_eq!(bumped.get(&bumped.key(t.descriptor(), t.name(), &[])).unwrap().1, CacheOutcome::Miss);

        let path = dir.path().join(format!("{}.json", key.as_str()));
        let text = fs::read_to_string(&path).unwrap().replace("1/1", "2/1");
        fs::write(&path, text).unwrap();
        assert_eq!(cache.get(&key).unwrap(), (None, CacheOutcome::Evicted));
        assert!(!path.exists());
        let (t2, o) = cache.get_or_compute(&key, || Ok(table())).unwrap();
        assert_eq!((t2.to_json() == t.to_json(), o), (true, CacheOutcome::Miss));
        assert_eq!(cache.entries().unwrap().len(), 1);
        assert_eq!(cache.clear().unwrap(), 1);
    }
}
