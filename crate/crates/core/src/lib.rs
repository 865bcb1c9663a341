//! Exact-repair regenerating codes over small prime fields.
//!
//! A file of B symbols over F_q is spread across n storage nodes so that any
//! k nodes reconstruct it and any d nodes repair a lost node, with the repair
//! traffic β per helper far below a full share. Two code families are
//! provided — a minimum-bandwidth construction (`nmbr`) and a
//! minimum-storage construction for d = 2k−2 (`nmsr`, plus puncturing to
//! higher repair degrees) — both built from powers of a companion matrix so
//! the whole codec runs on base-field matrix arithmetic, q = 2 included.
//!
//! `storage` layers file sharding, manifests, bandwidth accounting, a failure
//! simulator and the comparison tables on top of the codecs.

pub mod extfield;
pub mod gf;
pub mod linalg;
pub mod nmbr;
pub mod nmsr;
pub mod share;
pub mod storage;

pub use gf::{FieldElement, GfError, PrimeField};
pub use linalg::{solve_stein, GfMatrix, LinalgError};
pub use share::{NodeShare, RepairPacket};
