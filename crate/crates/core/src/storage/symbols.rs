//! Byte↔symbol mapping. q = 2 packs 8 symbols per byte MSB first; primes up
//! to 251 take one byte per symbol (larger byte values are rejected — the
//! input must be pre-mapped); larger primes take two bytes per symbol,
//! little-endian. Bit-packing for 2 < q is deliberately out of scope.

use super::StorageError;

/// Symbols a file of `byte_len` bytes maps to.
pub fn symbol_count_for_bytes(q: u32, byte_len: usize) -> usize {
    match q {
        2 => byte_len * 8,
        3..=251 => byte_len,
        _ => byte_len.div_ceil(2),
    }
}

/// Bytes a payload of `symbol_count` symbols occupies on disk.
pub fn byte_len_for_symbols(q: u32, symbol_count: usize) -> usize {
    match q {
        2 => symbol_count.div_ceil(8),
        3..=251 => symbol_count,
        _ => symbol_count * 2,
    }
}

pub fn symbols_from_bytes(q: u32, bytes: &[u8]) -> Result<Vec<u16>, StorageError> {
    match q {
        2 => {
            let mut out = Vec::with_capacity(bytes.len() * 8);
            for &byte in bytes {
                for bit in (0..8).rev() {
                    out.push((byte >> bit) & 1);
                }
            }
            Ok(out.into_iter().map(u16::from).collect())
        }
        3..=251 => {
            for &byte in bytes {
                if u32::from(byte) >= q {
                    return Err(StorageError::SymbolOverflow { value: byte.into(), q });
                }
            }
            Ok(bytes.iter().map(|&b| u16::from(b)).collect())
        }
        _ => {
            let mut out = Vec::with_capacity(bytes.len().div_ceil(2));
            for pair in bytes.chunks(2) {
                let lo = pair[0] as u32;
                let hi = pair.get(1).copied().unwrap_or(0) as u32;
                let v = lo | (hi << 8);
                if v >= q {
                    return Err(StorageError::SymbolOverflow { value: v, q });
                }
                out.push(v as u16);
            }
            Ok(out)
        }
    }
}

/// Inverse mapping; `byte_len` trims the trailing pad.
pub fn bytes_from_symbols(q: u32, symbols: &[u16], byte_len: usize) -> Vec<u8> {
    match q {
        2 => {
            let mut out = vec![0u8; byte_len];
            for (i, &s) in symbols.iter().take(byte_len * 8).enumerate() {
                if s != 0 {
                    out[i / 8] |= 1 << (7 - (i % 8));
                }
            }
            out
        }
        3..=251 => symbols.iter().take(byte_len).map(|&s| s as u8).collect(),
        _ => {
            let mut out = Vec::with_capacity(byte_len);
            for &s in symbols {
                out.push((s & 0xff) as u8);
                out.push((s >> 8) as u8);
                if out.len() >= byte_len {
                    break;
                }
            }
            out.truncate(byte_len);
            out
        }
    }
}
