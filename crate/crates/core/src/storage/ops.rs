//! The file-level operations behind the CLI: encode a file into a manifest
//! plus n share files, repair a lost share from d helpers, reconstruct the
//! file from k shares. Stripes are independent: each B-symbol stripe is
//! encoded and recovered on its own.

use super::codec::StripeCodec;
use super::ledger::{BandwidthLedger, Operation};
use super::manifest::{CodeKind, Manifest, FORMAT_VERSION};
use super::sharefile::{read_share, share_path, write_share};
use super::symbols::{bytes_from_symbols, symbol_count_for_bytes, symbols_from_bytes};
use super::{io_err, StorageError};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

pub fn hex_digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug)]
pub struct EncodeReport {
    pub manifest: Manifest,
    pub manifest_path: PathBuf,
    pub share_paths: Vec<PathBuf>,
    pub stripe_count: u64,
    pub pad_symbols: u64,
    pub symbols_per_share: u128,
}

/// Splits `input` into stripes of B symbols (zero-padded), encodes each, and
/// writes the manifest plus one share file per node into `out_dir`.
pub fn cmd_encode(
    input: &Path,
    kind: CodeKind,
    n: u64,
    k: u64,
    d: Option<u64>,
    q: u64,
    b: u64,
    out_dir: &Path,
) -> Result<EncodeReport, StorageError> {
    let codec = StripeCodec::from_spec(kind, n, k, d, q, b)?;
    let bytes = std::fs::read(input).map_err(|e| io_err(input, e))?;
    let digest = hex_digest(&bytes);
    let mut symbols = symbols_from_bytes(codec.q(), &bytes)?;
    let stripe_len = usize::try_from(codec.stripe_symbols())
        .map_err(|_| StorageError::BadArgument("stripe too large for this host".into()))?;
    let stripe_count = symbols.len().div_ceil(stripe_len).max(1) as u64;
    let padded = stripe_count as usize * stripe_len;
    let pad_symbols = (padded - symbols.len()) as u64;
    symbols.resize(padded, 0);

    let mut per_node: Vec<Vec<u16>> =
        vec![Vec::with_capacity(padded / stripe_len); codec.n() as usize];
    for stripe in symbols.chunks(stripe_len) {
        for (node, payload) in codec.encode_stripe(stripe)?.into_iter().enumerate() {
            per_node[node].extend_from_slice(&payload);
        }
    }

    let manifest = Manifest {
        format_version: FORMAT_VERSION,
        code_kind: codec.kind(),
        q: codec.q() as u64,
        n: codec.n(),
        k: codec.k(),
        d: codec.d(),
        b: codec.b(),
        poly: codec.poly(),
        exponents: codec.exponents(),
        file_len_bytes: bytes.len() as u64,
        pad_symbols,
        stripe_symbols: codec.stripe_symbols() as u64,
        stripe_count,
        content_digest: digest,
    };
    let manifest_path = out_dir.join("manifest.json");
    manifest.save(&manifest_path)?;
    let mdigest = manifest.digest();
    let mut share_paths = Vec::with_capacity(per_node.len());
    for (i, payload) in per_node.iter().enumerate() {
        let node_id = i as u32 + 1;
        let path = share_path(out_dir, node_id);
        write_share(&path, &mdigest, node_id, codec.q(), payload)?;
        share_paths.push(path);
    }
    Ok(EncodeReport {
        symbols_per_share: codec.alpha() * stripe_count as u128,
        manifest,
        manifest_path,
        share_paths,
        stripe_count,
        pad_symbols,
    })
}

fn load_codec_and_share_len(m: &Manifest) -> Result<(StripeCodec, usize), StorageError> {
    let codec = StripeCodec::from_manifest(m)?;
    let per_share =
        usize::try_from(codec.alpha() * m.stripe_count as u128).expect("share fits memory");
    Ok((codec, per_share))
}

fn read_node_share(
    m: &Manifest,
    codec: &StripeCodec,
    shares_dir: &Path,
    node: u32,
    expect: usize,
) -> Result<Vec<u16>, StorageError> {
    let path = share_path(shares_dir, node);
    let (id, symbols) = read_share(&path, &m.digest(), codec.q(), expect)?;
    if id != node {
        return Err(StorageError::ShareHeader {
            path: path.display().to_string(),
            detail: format!("header says node {id}, expected {node}"),
        });
    }
    Ok(symbols)
}

#[derive(Debug)]
pub struct RepairReport {
    pub node: u32,
    pub helpers: Vec<u32>,
    pub share_path: PathBuf,
    pub stripe_count: u64,
    pub symbols_transferred: u128,
    pub ledger: BandwidthLedger,
}

/// Rebuilds `failed_node`'s share file from d helper share files,
/// byte-identical to the lost original.
pub fn cmd_repair(
    manifest_path: &Path,
    failed_node: u32,
    helpers: &[u32],
    shares_dir: &Path,
    out_dir: &Path,
) -> Result<RepairReport, StorageError> {
    let m = Manifest::load(manifest_path)?;
    let (codec, per_share) = load_codec_and_share_len(&m)?;
    let d = codec.d() as usize;
    if helpers.len() != d {
        return Err(StorageError::BadArgument(format!(
            "need exactly d = {d} helpers, got {}",
            helpers.len()
        )));
    }
    if helpers.contains(&failed_node) {
        return Err(StorageError::BadArgument(format!(
            "helper set contains the failed node {failed_node}"
        )));
    }
    let mut sorted = helpers.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != d {
        return Err(StorageError::BadArgument("duplicate helper ids".into()));
    }

    let alpha = usize::try_from(codec.alpha()).expect("alpha fits");
    let beta = usize::try_from(codec.beta()).expect("beta fits");
    let mut helper_payloads = Vec::with_capacity(d);
    for &h in &sorted {
        helper_payloads.push(read_node_share(&m, &codec, shares_dir, h, per_share)?);
    }

    let mut rebuilt = Vec::with_capacity(per_share);
    let mut transferred: u128 = 0;
    for s in 0..m.stripe_count as usize {
        let mut packets = Vec::with_capacity(d);
        for (hi, &h) in sorted.iter().enumerate() {
            let stripe = &helper_payloads[hi][s * alpha..(s + 1) * alpha];
            let pkt = codec.packet_for(h, stripe, failed_node)?;
            debug_assert_eq!(pkt.len(), beta);
            transferred += pkt.len() as u128;
            packets.push((h, pkt));
        }
        rebuilt.extend_from_slice(&codec.assemble(failed_node, &packets)?);
    }

    let out_path = share_path(out_dir, failed_node);
    write_share(&out_path, &m.digest(), failed_node, codec.q(), &rebuilt)?;
    let mut ledger = BandwidthLedger::default();
    ledger.record(Operation::Repair, sorted.clone(), transferred);
    Ok(RepairReport {
        node: failed_node,
        helpers: sorted,
        share_path: out_path,
        stripe_count: m.stripe_count,
        symbols_transferred: transferred,
        ledger,
    })
}

#[derive(Debug)]
pub struct ReconstructReport {
    pub nodes: Vec<u32>,
    pub out_path: PathBuf,
    pub stripe_count: u64,
    pub symbols_transferred: u128,
    pub ledger: BandwidthLedger,
}

/// Rebuilds the original file from k share files; verifies the content
/// digest recorded in the manifest (a mismatch means a tampered or corrupt
/// share and is reported as a protocol error after the output is written).
pub fn cmd_reconstruct(
    manifest_path: &Path,
    nodes: &[u32],
    shares_dir: &Path,
    out_path: &Path,
) -> Result<ReconstructReport, StorageError> {
    let m = Manifest::load(manifest_path)?;
    let (codec, per_share) = load_codec_and_share_len(&m)?;
    let k = codec.k() as usize;
    if nodes.len() != k {
        return Err(StorageError::BadArgument(format!(
            "need exactly k = {k} nodes, got {}",
            nodes.len()
        )));
    }
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != k {
        return Err(StorageError::BadArgument("duplicate node ids".into()));
    }
    let alpha = usize::try_from(codec.alpha()).expect("alpha fits");
    let mut payloads = Vec::with_capacity(k);
    for &node in &sorted {
        payloads.push(read_node_share(&m, &codec, shares_dir, node, per_share)?);
    }

    let stripe_len = m.stripe_symbols as usize;
    let mut symbols = Vec::with_capacity(m.stripe_count as usize * stripe_len);
    let mut transferred: u128 = 0;
    for s in 0..m.stripe_count as usize {
        let shares: Vec<(u32, Vec<u16>)> = sorted
            .iter()
            .enumerate()
            .map(|(i, &node)| (node, payloads[i][s * alpha..(s + 1) * alpha].to_vec()))
            .collect();
        transferred += (k * alpha) as u128;
        symbols.extend_from_slice(&codec.reconstruct_stripe(&shares)?);
    }

    let file_symbols = symbol_count_for_bytes(codec.q(), m.file_len_bytes as usize);
    let bytes = bytes_from_symbols(codec.q(), &symbols[..file_symbols], m.file_len_bytes as usize);
    super::sharefile::atomic_write(out_path, &bytes)?;
    let mut ledger = BandwidthLedger::default();
    ledger.record(Operation::Reconstruct, sorted.clone(), transferred);
    let actual = hex_digest(&bytes);
    if actual != m.content_digest {
        return Err(StorageError::DigestMismatch {
            expected: m.content_digest.clone(),
            actual,
        });
    }
    Ok(ReconstructReport {
        nodes: sorted,
        out_path: out_path.to_path_buf(),
        stripe_count: m.stripe_count,
        symbols_transferred: transferred,
        ledger,
    })
}
