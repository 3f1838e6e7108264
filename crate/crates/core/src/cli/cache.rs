//! Line-oriented result cache.
//!
//! ```text
//! genericity-cache <format version>
//! library <version>
//! spec <sha-256 of the normalised run spec>
//! checksum <sha-256 of the payload>
//! <payload lines>
//! ```

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::Result;

pub const CACHE_FORMAT_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "GENERICITY_CACHE";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub format_version: u32,
    pub library_version: String,
    pub spec_hash: String,
    pub payload: Vec<String>,
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

fn payload_checksum(payload: &[String]) -> String {
    let mut h = Sha256::new();
    for line in payload {
        h.update(line.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

impl CacheEntry {
    pub fn new(spec_hash: impl Into<String>, payload: Vec<String>) -> Self {
        CacheEntry {
            format_version: CACHE_FORMAT_VERSION,
            library_version: crate::VERSION.to_string(),
            spec_hash: spec_hash.into(),
            payload,
        }
    }

    pub fn path(dir: &Path, spec_hash: &str) -> PathBuf {
        dir.join(format!("{spec_hash}.cache"))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "genericity-cache {}\nlibrary {}\nspec {}\nchecksum {}\n",
            self.format_version,
            self.library_version,
            self.spec_hash,
            payload_checksum(&self.payload)
        );
        for line in &self.payload {
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    /// `None` for anything that is not a current, intact entry.
    pub fn from_text(text: &str) -> Option<Self> {
        let mut lines = text.split('\n');
        let field = |line: Option<&str>, key: &str| line?.strip_prefix(key)?.strip_prefix(' ').map(str::to_string);
        let format_version: u32 = field(lines.next(), "genericity-cache")?.parse().ok()?;
        let library_version = field(lines.next(), "library")?;
        let spec_hash = field(lines.next(), "spec")?;
        let checksum = field(lines.next(), "checksum")?;
        let mut payload: Vec<String> = lines.map(str::to_string).collect();
        // The text ends with a newline, leaving one empty piece.
        if payload.pop().as_deref() != Some("") {
            return None;
        }
        if payload_checksum(&payload) != checksum {
            return None;
        }
        Some(CacheEntry { format_version, library_version, spec_hash, payload })
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let path = Self::path(dir, &self.spec_hash);
        let tmp = path.with_extension("tmp");
        let mut f = fs::File::create(&tmp)?;
        f.write_all(self.to_text().as_bytes())?;
        f.sync_all()?;
        fs::rename(tmp, path)?;
        Ok(())
    }

    /// The stored entry for `spec_hash`, if present, intact and written by
    /// this version.
    pub fn read(dir: &Path, spec_hash: &str) -> Option<Self> {
        let text = fs::read_to_string(Self::path(dir, spec_hash)).ok()?;
        let e = Self::from_text(&text)?;
        (e.format_version == CACHE_FORMAT_VERSION && e.library_version == crate::VERSION && e.spec_hash == spec_hash)
            .then_some(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_payload_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let e = CacheEntry::new("abc", Vec::new());
        e.write(dir.path()).unwrap();
        assert_eq!(CacheEntry::read(dir.path(), "abc"), Some(e));
    }

    #[test]
    fn large_payload_round_trips_byte_identically() {
        let dir = tempfile::tempdir().unwrap();
        let payload: Vec<String> = (0..100_000).map(|i| format!("{i},{},{},{}", i * 7 % 13, -i, i % 2 == 0)).collect();
        let e = CacheEntry::new("big", payload);
        e.write(dir.path()).unwrap();
        let text = fs::read_to_string(CacheEntry::path(dir.path(), "big")).unwrap();
        assert_eq!(text, e.to_text());
        assert_eq!(CacheEntry::read(dir.path(), "big").unwrap(), e);
    }

    #[test]
    fn corruption_and_stale_headers_miss() {
        let dir = tempfile::tempdir().unwrap();
        let e = CacheEntry::new("h", vec!["1,2".into(), "3,4".into()]);
        e.write(dir.path()).unwrap();
        let path = CacheEntry::path(dir.path(), "h");
        let good = fs::read_to_string(&path).unwrap();
        fs::write(&path, good.replace("3,4", "3,5")).unwrap();
        assert_eq!(CacheEntry::read(dir.path(), "h"), None);
        fs::write(&path, good.replace(crate::VERSION, "0.0.0-old")).unwrap();
        assert_eq!(CacheEntry::read(dir.path(), "h"), None);
        fs::write(&path, good.replace("genericity-cache 1", "genericity-cache 99")).unwrap();
        assert_eq!(CacheEntry::read(dir.path(), "h"), None);
        assert_eq!(CacheEntry::read(dir.path(), "missing"), None);
    }
}
