//! Share files on disk: a 32-byte manifest digest, the node id as 4 bytes
//! little-endian, then the raw symbol payload in the byte↔symbol mapping.
//! Writes go through a temp file and an atomic rename.

use super::symbols::{byte_len_for_symbols, bytes_from_symbols, symbols_from_bytes};
use super::{io_err, StorageError};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const HEADER_LEN: usize = 36;

/// Canonical share file name for a node.
pub fn share_path(dir: &Path, node_id: u32) -> PathBuf {
    dir.join(format!("share_{node_id:04}.bin"))
}

pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), StorageError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(dir, e))?;
    tmp.write_all(bytes).map_err(|e| io_err(path, e))?;
    tmp.persist(path)
        .map_err(|e| io_err(path, e.error))?;
    Ok(())
}

pub fn write_share(
    path: &Path,
    manifest_digest: &[u8; 32],
    node_id: u32,
    q: u32,
    payload: &[u16],
) -> Result<(), StorageError> {
    let mut bytes = Vec::with_capacity(HEADER_LEN + byte_len_for_symbols(q, payload.len()));
    bytes.extend_from_slice(manifest_digest);
    bytes.extend_from_slice(&node_id.to_le_bytes());
    bytes.extend_from_slice(&share_payload_bytes(q, payload));
    atomic_write(path, &bytes)
}

/// Payload symbols serialized with the same byte↔symbol mapping as file
/// content (for q = 2 the trailing partial byte is zero-padded).
fn share_payload_bytes(q: u32, payload: &[u16]) -> Vec<u8> {
    match q {
        2 => {
            let mut out = vec![0u8; payload.len().div_ceil(8)];
            for (i, &s) in payload.iter().enumerate() {
                if s != 0 {
                    out[i / 8] |= 1 << (7 - (i % 8));
                }
            }
            out
        }
        _ => bytes_from_symbols(q, payload, byte_len_for_symbols(q, payload.len())),
    }
}

/// Reads and validates a share file; `expect_symbols` is stripe_count·α.
pub fn read_share(
    path: &Path,
    manifest_digest: &[u8; 32],
    q: u32,
    expect_symbols: usize,
) -> Result<(u32, Vec<u16>), StorageError> {
    let bytes = std::fs::read(path).map_err(|e| io_err(path, e))?;
    if bytes.len() < HEADER_LEN {
        return Err(StorageError::ShareHeader {
            path: path.display().to_string(),
            detail: format!("file too short ({} bytes)", bytes.len()),
        });
    }
    if &bytes[..32] != manifest_digest {
        return Err(StorageError::ShareHeader {
            path: path.display().to_string(),
            detail: "manifest digest mismatch (share belongs to a different manifest)".into(),
        });
    }
    let node_id = u32::from_le_bytes(bytes[32..36].try_into().unwrap());
    let body = &bytes[HEADER_LEN..];
    let want = byte_len_for_symbols(q, expect_symbols);
    if body.len() != want {
        return Err(StorageError::ShareHeader {
            path: path.display().to_string(),
            detail: format!("payload is {} bytes, expected {want}", body.len()),
        });
    }
    let symbols = match q {
        2 => {
            let mut out = Vec::with_capacity(expect_symbols);
            for i in 0..expect_symbols {
                out.push(u16::from((body[i / 8] >> (7 - (i % 8))) & 1));
            }
            out
        }
        _ => {
            let mut s = symbols_from_bytes(q, body)?;
            s.truncate(expect_symbols);
            s
        }
    };
    Ok((node_id, symbols))
}
