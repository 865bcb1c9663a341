//! File-level sharding on top of the codecs: byte↔symbol mapping, stripe
//! splitting, manifests and share files on disk, repair/reconstruct
//! operations with bandwidth accounting, a failure simulator, and the
//! rate-comparison tables.

pub mod codec;
pub mod ledger;
pub mod manifest;
pub mod ops;
pub mod sharefile;
pub mod simulate;
pub mod symbols;
pub mod tables;

use crate::share::{CodecError, ParamError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StorageError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Codec(CodecError),
    #[error("byte value {value} cannot be a symbol over F_{q} (input must be pre-mapped)")]
    SymbolOverflow { value: u32, q: u32 },
    #[error("manifest does not re-derive from its own parameters: {0}")]
    ManifestMismatch(String),
    #[error("share file {path}: {detail}")]
    ShareHeader { path: String, detail: String },
    #[error("reconstructed content digest {actual} does not match manifest digest {expected}")]
    DigestMismatch { expected: String, actual: String },
    #[error("bad argument: {0}")]
    BadArgument(String),
    #[error("script error: {0}")]
    BadScript(String),
}

impl From<CodecError> for StorageError {
    fn from(e: CodecError) -> Self {
        match e {
            CodecError::Param(p) => StorageError::Param(p),
            other => StorageError::Codec(other),
        }
    }
}

impl StorageError {
    /// CLI contract: 0 success, 2 parameter error, 3 io error, 4 protocol
    /// error (singularity, corruption, digest mismatch).
    pub fn exit_code(&self) -> u8 {
        match self {
            StorageError::Io { .. } | StorageError::Json(_) => 3,
            StorageError::Param(_)
            | StorageError::SymbolOverflow { .. }
            | StorageError::BadArgument(_)
            | StorageError::BadScript(_) => 2,
            StorageError::Codec(_)
            | StorageError::ManifestMismatch(_)
            | StorageError::ShareHeader { .. }
            | StorageError::DigestMismatch { .. } => 4,
        }
    }
}

pub(crate) fn io_err(path: &std::path::Path, source: std::io::Error) -> StorageError {
    StorageError::Io { path: path.display().to_string(), source }
}
