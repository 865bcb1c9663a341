//! The manifest: everything needed to rebuild the codec and interpret the
//! share files, serialized as UTF-8 JSON. No timestamps — two encodes of the
//! same input are byte-identical, and the manifest digest binds shares to
//! their manifest.

use super::{io_err, StorageError};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodeKind {
    #[serde(rename = "nmbr")]
    Nmbr,
    #[serde(rename = "nmbr-systematic")]
    NmbrSystematic,
    #[serde(rename = "nmsr")]
    Nmsr,
    #[serde(rename = "nmsr-punctured")]
    NmsrPunctured,
}

impl CodeKind {
    /// Accepts both the manifest spelling and the CLI short form.
    pub fn parse(s: &str) -> Result<Self, StorageError> {
        match s {
            "nmbr" => Ok(CodeKind::Nmbr),
            "nmbr-sys" | "nmbr-systematic" => Ok(CodeKind::NmbrSystematic),
            "nmsr" => Ok(CodeKind::Nmsr),
            "nmsr-punct" | "nmsr-punctured" => Ok(CodeKind::NmsrPunctured),
            other => Err(StorageError::BadArgument(format!(
                "unknown code kind {other:?} (expected nmbr | nmbr-sys | nmsr | nmsr-punct)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CodeKind::Nmbr => "nmbr",
            CodeKind::NmbrSystematic => "nmbr-systematic",
            CodeKind::Nmsr => "nmsr",
            CodeKind::NmsrPunctured => "nmsr-punctured",
        }
    }
}

impl std::fmt::Display for CodeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub code_kind: CodeKind,
    pub q: u64,
    pub n: u64,
    pub k: u64,
    pub d: u64,
    pub b: u64,
    /// Primitive polynomial, ascending coefficients including the monic lead.
    pub poly: Vec<u16>,
    /// Node exponents / coset indices; for punctured codes, the parent's.
    pub exponents: Vec<u64>,
    pub file_len_bytes: u64,
    pub pad_symbols: u64,
    /// Symbols per stripe (the code's B).
    pub stripe_symbols: u64,
    pub stripe_count: u64,
    /// SHA-256 of the original file bytes, hex.
    pub content_digest: String,
}

impl Manifest {
    /// The canonical serialized form: field order fixed by this struct.
    pub fn canonical_json(&self) -> Vec<u8> {
        let mut v = serde_json::to_vec_pretty(self).expect("manifest serializes");
        v.push(b'\n');
        v
    }

    /// SHA-256 over the canonical JSON; stamped into every share header.
    pub fn digest(&self) -> [u8; 32] {
        Sha256::digest(self.canonical_json()).into()
    }

    pub fn save(&self, path: &Path) -> Result<(), StorageError> {
        super::sharefile::atomic_write(path, &self.canonical_json())
    }

    pub fn load(path: &Path) -> Result<Self, StorageError> {
        let bytes = std::fs::read(path).map_err(|e| io_err(path, e))?;
        let m: Manifest = serde_json::from_slice(&bytes)?;
        if m.format_version != FORMAT_VERSION {
            return Err(StorageError::ManifestMismatch(format!(
                "format_version {} unsupported (expected {FORMAT_VERSION})",
                m.format_version
            )));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Manifest {
        Manifest {
            format_version: FORMAT_VERSION,
            code_kind: CodeKind::Nmbr,
            q: 2,
            n: 4,
            k: 2,
            d: 3,
            b: 4,
            poly: vec![1, 1, 1],
            exponents: vec![0, 1, 2, 3],
            file_len_bytes: 1024,
            pad_symbols: 16,
            stripe_symbols: 18,
            stripe_count: 456,
            content_digest: "ab".repeat(32),
        }
    }

    #[test]
    fn canonical_json_is_stable() {
        let m = sample();
        assert_eq!(m.canonical_json(), m.canonical_json());
        assert_eq!(m.digest(), m.digest());
        let parsed: Manifest = serde_json::from_slice(&m.canonical_json()).unwrap();
        assert_eq!(parsed, m);
    }

    #[test]
    fn kind_spellings() {
        assert_eq!(CodeKind::parse("nmbr-sys").unwrap(), CodeKind::NmbrSystematic);
        assert_eq!(CodeKind::parse("nmsr-punctured").unwrap(), CodeKind::NmsrPunctured);
        assert!(CodeKind::parse("rs").is_err());
        assert_eq!(CodeKind::NmsrPunctured.as_str(), "nmsr-punctured");
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.json");
        let m = sample();
        m.save(&path).unwrap();
        assert_eq!(Manifest::load(&path).unwrap(), m);
    }
}
