//! Per-node share and per-helper repair payloads plus the error vocabulary
//! shared by both code families. Node ids are 1-based everywhere a user sees
//! them.

use crate::extfield::ExtFieldError;
use crate::gf::GfError;
use crate::linalg::{GfMatrix, LinalgError};
use thiserror::Error;

/// A parameter set that fails one of the admission conditions. Each variant
/// names the violated condition so operators can see what to change.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("condition A1 violated: q^(b/k) = {qm} supports at most {qm} nodes, need {need} (n={n}, k={k}, b={b}, q={q})")]
    A1Violation { q: u64, n: u64, k: u64, b: u64, qm: String, need: u64 },
    #[error("condition A2 violated: k = {k} does not divide b = {b}")]
    A2Violation { k: u64, b: u64 },
    #[error("condition B1 violated: n = {n} exceeds (q^(b/k)-1)/(g·b/k) = {bound} (g = {g})")]
    B1Violation { n: u64, g: u64, bound: String },
    #[error("condition B2 violated: k = {k} does not divide b = {b}")]
    B2Violation { k: u64, b: u64 },
    #[error("degree order violated: need k ≤ d ≤ n−1, got n={n}, k={k}, d={d}")]
    DegreeOrderViolation { n: u64, k: u64, d: u64 },
    #[error("d must equal {expected} for this code family, got {d}")]
    WrongRepairDegree { d: u64, expected: u64 },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    ExtField(#[from] ExtFieldError),
}

/// Runtime failures of encode/repair/reconstruct.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("expected {expected} file symbols, got {got}")]
    WrongSymbolCount { expected: usize, got: usize },
    #[error("expected {expected} {what}, got {got}")]
    WrongCount { what: &'static str, expected: usize, got: usize },
    #[error("duplicate node id {node}")]
    DuplicateNodes { node: u32 },
    #[error("node id {node} outside 1..={n}")]
    UnknownNode { node: u32, n: u64 },
    #[error("helper {node} cannot repair itself")]
    HelperIsTarget { node: u32 },
    #[error("packets disagree on the repair target")]
    MixedTargets,
    #[error("share payload has shape {got_rows}x{got_cols}, expected {rows}x{cols}")]
    BadShareShape { rows: usize, cols: usize, got_rows: usize, got_cols: usize },
    #[error("assembled helper matrix is singular — share data is corrupt or params are inconsistent")]
    SingularAssembly,
    #[error("node indices {a} and {b} share a q-cyclotomic coset; reconstruction system is singular")]
    CosetCollision { a: u64, b: u64 },
    #[error("reconstruction consistency check failed: {0}")]
    Inconsistent(String),
    #[error("parameters too large to materialize a codec: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    ExtField(#[from] ExtFieldError),
}

/// What storage node `node_id` holds for one stripe: the (b/k)×(db/k) or
/// (b/k)×(b(k−1)/k) matrix M_j·X, α symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeShare {
    pub node_id: u32,
    pub payload: GfMatrix,
}

impl NodeShare {
    pub fn symbol_count(&self) -> usize {
        self.payload.rows() * self.payload.cols()
    }
}

/// Compact rendering for condition-check reports: huge powers q^(b/k) print
/// as an order of magnitude instead of thousands of digits.
pub(crate) fn render_biguint(v: &num_bigint::BigUint) -> String {
    let s = v.to_string();
    if s.len() <= 20 {
        s
    } else {
        format!("~10^{}", s.len() - 1)
    }
}

/// The β-symbol message a helper sends a newcomer: a (b/k)×(b/k) matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairPacket {
    pub helper_id: u32,
    pub target_id: u32,
    pub payload: GfMatrix,
}

impl RepairPacket {
    pub fn symbol_count(&self) -> usize {
        self.payload.rows() * self.payload.cols()
    }
}
