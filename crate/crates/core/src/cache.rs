//! On-disk memo of expensive intermediate results.
//!
//! One file per record. A record carries the engine version, its key, a
//! SHA-256 checksum of the payload and the payload itself. Records are
//! published by writing a temporary file in the same directory and renaming
//! it into place, so a killed run never leaves a truncated record under a
//! valid name. Records that fail validation are discarded and recomputed.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::serial;
use crate::symfunc::SymmetricFunction;

/// Bumped whenever a payload format or the meaning of a key changes.
pub const ENGINE_VERSION: &str = "spchain-1";

const MAGIC: &str = "SPCHAIN-CACHE v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CacheKind {
    Lie,
    Derivation,
    ExtPleth,
    Littlewood,
    /// Invariant dimension of one chain summand.
    Term,
}

impl CacheKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CacheKind::Lie => "lie",
            CacheKind::Derivation => "derivation",
            CacheKind::ExtPleth => "extpleth",
            CacheKind::Littlewood => "littlewood",
            CacheKind::Term => "term",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub kind: CacheKind,
    /// Filename-safe identifier, e.g. `3-2` for `e_2[h(3)]`.
    pub label: String,
}

impl CacheKey {
    pub fn lie(k: u32) -> Self {
        Self { kind: CacheKind::Lie, label: k.to_string() }
    }

    pub fn derivation(k: u32) -> Self {
        Self { kind: CacheKind::Derivation, label: k.to_string() }
    }

    pub fn ext_pleth(k: u32, m: u32) -> Self {
        Self { kind: CacheKind::ExtPleth, label: format!("{k}-{m}") }
    }

    pub fn littlewood(max_degree: u32) -> Self {
        Self { kind: CacheKind::Littlewood, label: max_degree.to_string() }
    }

    pub fn term(label: impl Into<String>) -> Self {
        Self { kind: CacheKind::Term, label: label.into() }
    }

    fn file_name(&self) -> String {
        format!("{}-{}.rec", self.kind.as_str(), self.label)
    }
}

impl fmt::Display for CacheKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind.as_str(), self.label)
    }
}

/// A validated record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheRecord {
    pub key: CacheKey,
    pub payload: String,
}

impl CacheRecord {
    pub fn checksum(&self) -> String {
        hex::encode(Sha256::digest(self.payload.as_bytes()))
    }

    pub fn encode(&self) -> String {
        format!(
            "{MAGIC}\nengine={ENGINE_VERSION}\nkey={}\nsha256={}\nbytes={}\n{}",
            self.key,
            self.checksum(),
            self.payload.len(),
            self.payload
        )
    }

    /// Parses and validates a record; any mismatch is an error.
    pub fn decode(expected: &CacheKey, text: &str) -> std::result::Result<Self, String> {
        let mut header = Vec::with_capacity(5);
        let mut rest = text;
        for _ in 0..5 {
            let (line, tail) = rest.split_once('\n').ok_or("truncated header")?;
            header.push(line);
            rest = tail;
        }
        if header[0] != MAGIC {
            return Err("bad magic".into());
        }
        if header[1] != format!("engine={ENGINE_VERSION}") {
            return Err(format!("stale engine tag '{}'", header[1]));
        }
        if header[2] != format!("key={expected}") {
            return Err(format!("key mismatch '{}'", header[2]));
        }
        let bytes: usize = header[4]
            .strip_prefix("bytes=")
            .and_then(|b| b.parse().ok())
            .ok_or("bad length field")?;
        if rest.len() != bytes {
            return Err(format!("payload has {} bytes, expected {bytes}", rest.len()));
        }
        let record = CacheRecord { key: expected.clone(), payload: rest.to_string() };
        if header[3] != format!("sha256={}", record.checksum()) {
            return Err("checksum mismatch".into());
        }
        Ok(record)
    }
}

#[derive(Debug, Default)]
pub struct CacheStats {
    pub hits: AtomicU64,
    pub misses: AtomicU64,
    pub discarded: AtomicU64,
    pub writes: AtomicU64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheCounts {
    pub hits: u64,
    pub misses: u64,
    pub discarded: u64,
    pub writes: u64,
}

/// Directory-backed record store. Safe to share between threads: readers
/// never observe partial writes, and concurrent writers of the same key
/// publish identical bytes.
#[derive(Debug)]
pub struct DiskCache {
    dir: PathBuf,
    stats: CacheStats,
}

impl DiskCache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir, stats: CacheStats::default() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    pub fn counts(&self) -> CacheCounts {
        CacheCounts {
            hits: self.stats.hits.load(Ordering::Relaxed),
            misses: self.stats.misses.load(Ordering::Relaxed),
            discarded: self.stats.discarded.load(Ordering::Relaxed),
            writes: self.stats.writes.load(Ordering::Relaxed),
        }
    }

    /// Loads a record; corrupt or stale files are removed and reported as a
    /// miss.
    pub fn load(&self, key: &CacheKey) -> Option<CacheRecord> {
        let path = self.path_for(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(_) => {
                self.stats.misses.fetch_add(1, Ordering::Relaxed);
                return None;
            }
        };
        match CacheRecord::decode(key, &text) {
            Ok(rec) => {
                self.stats.hits.fetch_add(1, Ordering::Relaxed);
                Some(rec)
            }
            Err(reason) => {
                log::warn!("discarding cache record {}: {reason}", path.display());
                let _ = fs::remove_file(&path);
                self.stats.discarded.fetch_add(1, Ordering::Relaxed);
                self.stats.misses.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }

    pub fn store(&self, record: &CacheRecord) -> Result<()> {
        let path = self.path_for(&record.key);
        let tmp = self.dir.join(format!(
            ".{}.{}.{:?}.tmp",
            record.key.file_name(),
            std::process::id(),
            std::thread::current().id()
        ));
        {
            let mut file = fs::File::create(&tmp)?;
            file.write_all(record.encode().as_bytes())?;
            file.sync_all()?;
        }
        fs::rename(&tmp, &path).map_err(|e| Error::Cache(format!("publishing {}: {e}", path.display())))?;
        self.stats.writes.fetch_add(1, Ordering::Relaxed);
        Ok(())
    }

    pub fn load_symfunc(&self, key: &CacheKey) -> Option<SymmetricFunction> {
        let rec = self.load(key)?;
        match serial::from_text(&rec.payload) {
            Ok(f) => Some(f),
            Err(e) => {
                log::warn!("discarding cache record {key}: {e}");
                let _ = fs::remove_file(self.path_for(key));
                self.stats.discarded.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }

    pub fn store_symfunc(&self, key: CacheKey, f: &SymmetricFunction) -> Result<()> {
        self.store(&CacheRecord { key, payload: serial::to_text(f) })
    }
}
