use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{CertJson, Certificate, IdentityError};

/// Bumped whenever certificate construction changes, which invalidates
/// every cached entry.
pub const ENGINE_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+cert1");

/// Content-addressed certificate store: one JSON file per identity, keyed
/// by `sha256(name ‖ engine version)`. Cached entries are data, not trust;
/// callers still verify what they load.
#[derive(Clone, Debug)]
pub struct CertCache {
    dir: PathBuf,
}

impl CertCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(name: &str) -> String {
        let mut h = Sha256::new();
        h.update(name.as_bytes());
        h.update([0u8]);
        h.update(ENGINE_VERSION.as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(name)))
    }

    /// The cached certificate, if present and readable. Corrupt entries are
    /// treated as misses.
    pub fn load(&self, name: &str) -> Option<Certificate> {
        let text = fs::read_to_string(self.path(name)).ok()?;
        let j: CertJson = serde_json::from_str(&text).ok()?;
        let cert = Certificate::from_json(&j).ok()?;
        (cert.name == name).then_some(cert)
    }

    pub fn store(&self, cert: &Certificate) -> Result<(), IdentityError> {
        fs::create_dir_all(&self.dir)?;
        let text = serde_json::to_string_pretty(&cert.to_json())?;
        // write-then-rename keeps concurrent readers from seeing half a file
        let tmp = self.dir.join(format!(".{}.tmp", Self::key(&cert.name)));
        fs::write(&tmp, text)?;
        fs::rename(tmp, self.path(&cert.name))?;
        Ok(())
    }

    pub fn get_or_insert_with<F>(&self, name: &str, build: F) -> Result<(Certificate, bool), IdentityError>
    where
        F: FnOnce() -> Result<Certificate, IdentityError>,
    {
        if let Some(c) = self.load(name) {
            return Ok((c, true));
        }
        let c = build()?;
        self.store(&c)?;
        Ok((c, false))
    }
}
