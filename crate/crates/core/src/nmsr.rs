//! The minimum-storage family for d = 2k−2: the file fills two symmetric
//! matrices S₁, S₂, node j stores Φ_j·S₁ + P^{i_j(k−1)}·Φ_j·S₂ with
//! Φ_j = (I P^{i_j} … P^{i_j(k−2)}), and the node indices i_1..i_n are drawn
//! from distinct q-cyclotomic cosets modulo (q^{b/k}−1)/g, g = gcd(k−1, q^{b/k}−1).
//!
//! Repair mirrors the bandwidth-optimal family; reconstruction right-
//! multiplies the stacked shares by Φ_Kᵀ and peels the symmetric parts out of
//! Γ = W + Λ_K·Q one off-diagonal block pair at a time, each pair a Stein
//! equation A·Z·B − Z = C whose solvability is exactly the distinct-coset
//! condition — a singular system surfaces as `CosetCollision`.
//!
//! Puncturing converts an (n, k, d) instance into (n−1, k−1, d−1) by
//! zero-forcing node 1: the child file is pre-coded into the nullspace of
//! node 1's encoder, so every party can simulate that node as all-zero.

use crate::extfield::{self, ExtFieldRep};
use crate::gf::{self, PrimeField};
use crate::linalg::{solve_stein, GfMatrix, LinalgError};
use crate::share::{render_biguint, CodecError, NodeShare, ParamError, RepairPacket};
use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::ToPrimitive;

/// Validated (n, k, q, b) with d = 2k−2 and the coset-distinct node indices.
/// Indices are materialized whenever the coset modulus fits in u64 — i.e.
/// whenever a codec could actually be built; parameter sets beyond that
/// still validate and report metrics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NmsrParams {
    pub n: u64,
    pub k: u64,
    pub d: u64,
    pub b: u64,
    pub field: PrimeField,
    /// gcd(k−1, q^{b/k}−1)
    pub g: u64,
    /// (q^{b/k}−1)/g when it fits u64
    pub modulus: Option<u64>,
    pub indices: Option<Vec<u64>>,
}

impl NmsrParams {
    pub fn validate(n: u64, k: u64, q: u64, b: u64) -> Result<Self, ParamError> {
        let field = PrimeField::new(q)?;
        if k < 2 {
            return Err(ParamError::DegreeOrderViolation { n, k, d: 0 });
        }
        let d = 2 * k - 2;
        if n < d + 1 {
            return Err(ParamError::DegreeOrderViolation { n, k, d });
        }
        if b == 0 || b % k != 0 {
            return Err(ParamError::B2Violation { k, b });
        }
        let m = b / k;
        let qm = BigUint::from(q).pow(u32::try_from(m).expect("b/k fits u32"));
        let order = &qm - 1u32;
        let g = if k == 2 {
            1
        } else {
            let r = (&order % (k - 1)).to_u64().expect("residue fits");
            gf::gcd(k - 1, r)
        };
        // B1: n ≤ (q^(b/k)−1)/(g·(b/k))
        if BigUint::from(n) * g * m > order {
            return Err(ParamError::B1Violation {
                n,
                g,
                bound: format!("{}/{}", render_biguint(&order), g * m),
            });
        }
        let modulus_big = &order / g;
        let modulus = modulus_big.to_u64();
        let indices = match modulus {
            Some(md) => Some(extfield::canonical_representatives(q, md, n as usize)?),
            None => None,
        };
        Ok(NmsrParams { n, k, d, b, field, g, modulus, indices })
    }

    #[inline]
    pub fn m(&self) -> u64 {
        self.b / self.k
    }

    /// Side of S₁ and S₂: b(k−1)/k.
    #[inline]
    pub fn s_dim(&self) -> u64 {
        self.m() * (self.k - 1)
    }

    pub fn beta(&self) -> u128 {
        (self.m() as u128) * (self.m() as u128)
    }

    pub fn alpha(&self) -> u128 {
        self.beta() * (self.k - 1) as u128
    }

    /// B = (b(k−1)/k)·(b(k−1)/k + 1), symbols per stripe.
    pub fn file_symbols(&self) -> u128 {
        let s = self.s_dim() as u128;
        s * (s + 1)
    }

    pub fn metrics(&self) -> NmsrMetrics {
        let b_sym = self.file_symbols();
        let alpha = self.alpha();
        NmsrMetrics {
            file_symbols: b_sym,
            alpha,
            beta: self.beta(),
            rate: Ratio::new(b_sym as i128, alpha as i128 * self.n as i128),
            b_over_alpha_k: Ratio::new(b_sym as i128, alpha as i128 * self.k as i128),
        }
    }

    /// Table-form rate (k/n)·(1 − 1/k + 1/b); equals B/(αn).
    pub fn rate_closed_form(&self) -> Ratio<i128> {
        let (n, k, b) = (self.n as i128, self.k as i128, self.b as i128);
        Ratio::new(k, n) * (Ratio::from_integer(1) - Ratio::new(1, k) + Ratio::new(1, b))
    }

    /// 1 − 1/k + 1/b; equals B/(αk).
    pub fn b_over_alpha_k_closed_form(&self) -> Ratio<i128> {
        let (k, b) = (self.k as i128, self.b as i128);
        Ratio::from_integer(1) - Ratio::new(1, k) + Ratio::new(1, b)
    }

    /// Stacks X = (S₁; S₂): S₁'s upper triangle row-major, then S₂'s.
    pub fn build_data_matrix(&self, symbols: &[u16]) -> Result<GfMatrix, CodecError> {
        let b_sym = usize::try_from(self.file_symbols()).expect("desk-scale stripe");
        if symbols.len() != b_sym {
            return Err(CodecError::WrongSymbolCount { expected: b_sym, got: symbols.len() });
        }
        let s = self.s_dim() as usize;
        let mut x = GfMatrix::zeros(self.field, 2 * s, s);
        let mut idx = 0;
        for half in 0..2 {
            let r0 = half * s;
            for i in 0..s {
                for j in i..s {
                    x.set(r0 + i, j, symbols[idx]);
                    x.set(r0 + j, i, symbols[idx]);
                    idx += 1;
                }
            }
        }
        debug_assert_eq!(idx, b_sym);
        Ok(x)
    }

    pub fn extract_file(&self, s1: &GfMatrix, s2: &GfMatrix) -> Vec<u16> {
        let s = self.s_dim() as usize;
        let mut out = Vec::with_capacity(usize::try_from(self.file_symbols()).unwrap());
        for mat in [s1, s2] {
            for i in 0..s {
                for j in i..s {
                    out.push(mat.get(i, j));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NmsrMetrics {
    pub file_symbols: u128,
    pub alpha: u128,
    pub beta: u128,
    pub rate: Ratio<i128>,
    pub b_over_alpha_k: Ratio<i128>,
}

/// An executable codec: Φ and Λ blocks per node plus the combined encoder
/// rows M_j = (Φ_j | Λ_j·Φ_j).
#[derive(Debug, Clone)]
pub struct NmsrCode {
    params: NmsrParams,
    indices: Vec<u64>,
    rep: ExtFieldRep,
    phi: Vec<GfMatrix>,
    lambda: Vec<GfMatrix>,
    rows: Vec<GfMatrix>,
}

impl NmsrCode {
    /// Builds the codec and re-verifies that the indices are pairwise
    /// coset-distinct (checked, not assumed, even for indices the validator
    /// itself selected).
    pub fn new(params: NmsrParams) -> Result<Self, CodecError> {
        let indices = params
            .indices
            .clone()
            .ok_or_else(|| CodecError::TooLarge("coset modulus exceeds u64".into()))?;
        let modulus = params.modulus.expect("modulus present with indices");
        let q = params.field.modulus() as u64;
        for a in 0..indices.len() {
            for b in a + 1..indices.len() {
                if extfield::same_coset(q, modulus, indices[a], indices[b]) {
                    return Err(CodecError::CosetCollision { a: indices[a], b: indices[b] });
                }
            }
        }
        Self::build(params, indices)
    }

    /// Builds without the coset-distinctness check. Exists to let tests and
    /// fault injection drive the singular-reconstruction path; production
    /// callers want `new`.
    pub fn with_indices_unchecked(params: NmsrParams, indices: Vec<u64>) -> Result<Self, CodecError> {
        if indices.len() != params.n as usize {
            return Err(CodecError::WrongCount {
                what: "node indices",
                expected: params.n as usize,
                got: indices.len(),
            });
        }
        Self::build(params, indices)
    }

    fn build(params: NmsrParams, indices: Vec<u64>) -> Result<Self, CodecError> {
        let m = usize::try_from(params.m()).expect("b/k fits usize");
        let k = params.k as usize;
        let max_index = indices.iter().copied().max().unwrap_or(0);
        let rep = ExtFieldRep::new(params.field, m, (params.k - 1).saturating_mul(max_index))?;
        let mut phi = Vec::with_capacity(indices.len());
        let mut lambda = Vec::with_capacity(indices.len());
        let mut rows = Vec::with_capacity(indices.len());
        for &i_j in &indices {
            let blocks: Vec<GfMatrix> = (0..k - 1).map(|t| rep.power(i_j * t as u64)).collect();
            let phi_j = GfMatrix::hstack(&blocks.iter().collect::<Vec<_>>())?;
            let lambda_j = rep.power(i_j * (params.k - 1));
            let row = GfMatrix::hstack(&[&phi_j, &lambda_j.matmul(&phi_j)?])?;
            phi.push(phi_j);
            lambda.push(lambda_j);
            rows.push(row);
        }
        Ok(NmsrCode { params, indices, rep, phi, lambda, rows })
    }

    pub fn params(&self) -> &NmsrParams {
        &self.params
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn rep(&self) -> &ExtFieldRep {
        &self.rep
    }

    fn node_index(&self, node_id: u32) -> Result<usize, CodecError> {
        if node_id < 1 || node_id as u64 > self.params.n {
            return Err(CodecError::UnknownNode { node: node_id, n: self.params.n });
        }
        Ok(node_id as usize - 1)
    }

    /// Φ_j for a 1-based node id.
    pub fn phi_row(&self, node_id: u32) -> Result<&GfMatrix, CodecError> {
        Ok(&self.phi[self.node_index(node_id)?])
    }

    /// Λ block P^{i_j(k−1)} for a 1-based node id.
    pub fn lambda_block(&self, node_id: u32) -> Result<&GfMatrix, CodecError> {
        Ok(&self.lambda[self.node_index(node_id)?])
    }

    /// M_j = (Φ_j | Λ_j·Φ_j) for a 1-based node id.
    pub fn node_row(&self, node_id: u32) -> Result<&GfMatrix, CodecError> {
        Ok(&self.rows[self.node_index(node_id)?])
    }

    /// The full bn/k × bd/k encoding matrix M = (Φ | ΛΦ).
    pub fn encoding_matrix(&self) -> GfMatrix {
        GfMatrix::vstack(&self.rows.iter().collect::<Vec<_>>()).expect("uniform rows")
    }

    pub fn encode(&self, symbols: &[u16]) -> Result<Vec<NodeShare>, CodecError> {
        let x = self.params.build_data_matrix(symbols)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(j, row)| {
                Ok(NodeShare {
                    node_id: j as u32 + 1,
                    payload: row.matmul(&x)?,
                })
            })
            .collect()
    }

    fn check_share_shape(&self, share: &NodeShare) -> Result<(), CodecError> {
        let rows = self.params.m() as usize;
        let cols = self.params.s_dim() as usize;
        if share.payload.rows() != rows || share.payload.cols() != cols {
            return Err(CodecError::BadShareShape {
                rows,
                cols,
                got_rows: share.payload.rows(),
                got_cols: share.payload.cols(),
            });
        }
        self.node_index(share.node_id).map(|_| ())
    }

    /// Helper message M_j·X·Φ_ℓᵀ: β symbols toward rebuilding node ℓ.
    pub fn repair_helper(&self, share: &NodeShare, target_id: u32) -> Result<RepairPacket, CodecError> {
        self.check_share_shape(share)?;
        if share.node_id == target_id {
            return Err(CodecError::HelperIsTarget { node: target_id });
        }
        let phi_t = self.phi_row(target_id)?;
        Ok(RepairPacket {
            helper_id: share.node_id,
            target_id,
            payload: share.payload.matmul(&phi_t.transpose())?,
        })
    }

    /// Inverts the stacked helper rows to expose Φ_ℓ·(S₁ S₂), then recombines
    /// the two halves with P^{i_ℓ(k−1)} into the lost share.
    pub fn repair_assemble(&self, packets: &[RepairPacket]) -> Result<NodeShare, CodecError> {
        let d = self.params.d as usize;
        if packets.len() != d {
            return Err(CodecError::WrongCount { what: "repair packets", expected: d, got: packets.len() });
        }
        let target = packets[0].target_id;
        if packets.iter().any(|p| p.target_id != target) {
            return Err(CodecError::MixedTargets);
        }
        let mut sorted: Vec<&RepairPacket> = packets.iter().collect();
        sorted.sort_by_key(|p| p.helper_id);
        for w in sorted.windows(2) {
            if w[0].helper_id == w[1].helper_id {
                return Err(CodecError::DuplicateNodes { node: w[0].helper_id });
            }
        }
        if sorted.iter().any(|p| p.helper_id == target) {
            return Err(CodecError::HelperIsTarget { node: target });
        }
        let rows: Vec<&GfMatrix> = sorted
            .iter()
            .map(|p| self.node_row(p.helper_id))
            .collect::<Result<_, _>>()?;
        let m_d = GfMatrix::vstack(&rows)?;
        let payloads: Vec<&GfMatrix> = sorted.iter().map(|p| &p.payload).collect();
        let stacked = GfMatrix::vstack(&payloads)?;
        let x_phit = m_d.solve(&stacked).map_err(|e| match e {
            LinalgError::Singular { .. } => CodecError::SingularAssembly,
            other => CodecError::Linalg(other),
        })?;
        let both = x_phit.transpose(); // Φ_ℓ·(S₁ S₂)
        let s = self.params.s_dim() as usize;
        let phi_s1 = both.block(0, 0, both.rows(), s);
        let phi_s2 = both.block(0, s, both.rows(), s);
        let payload = phi_s1.add(&self.lambda_block(target)?.matmul(&phi_s2)?)?;
        Ok(NodeShare { node_id: target, payload })
    }

    /// File from any k shares via Γ = Φ_K·S₁·Φ_Kᵀ + Λ_K·Φ_K·S₂·Φ_Kᵀ: each
    /// off-diagonal block pair pins ⟦Q⟧ through a Stein solve, the block rows
    /// of Q and W then release Φ_i·S₂ and Φ_i·S₁, and any k−1 of those invert
    /// to S₂ and S₁ (we take the first k−1 in ascending node order).
    pub fn reconstruct(&self, shares: &[NodeShare]) -> Result<Vec<u16>, CodecError> {
        let k = self.params.k as usize;
        if shares.len() != k {
            return Err(CodecError::WrongCount { what: "shares", expected: k, got: shares.len() });
        }
        let mut sorted: Vec<&NodeShare> = shares.iter().collect();
        sorted.sort_by_key(|s| s.node_id);
        for w in sorted.windows(2) {
            if w[0].node_id == w[1].node_id {
                return Err(CodecError::DuplicateNodes { node: w[0].node_id });
            }
        }
        for s in &sorted {
            self.check_share_shape(s)?;
        }
        let m = self.params.m() as usize;
        let node_ids: Vec<u32> = sorted.iter().map(|s| s.node_id).collect();
        let sel_phi: Vec<&GfMatrix> = node_ids
            .iter()
            .map(|&id| self.phi_row(id))
            .collect::<Result<_, _>>()?;
        let phi_k = GfMatrix::vstack(&sel_phi)?;
        let payloads: Vec<&GfMatrix> = sorted.iter().map(|s| &s.payload).collect();
        let gamma = GfMatrix::vstack(&payloads)?.matmul(&phi_k.transpose())?;

        let blk = |s_idx: usize, t_idx: usize| gamma.block(s_idx * m, t_idx * m, m, m);
        let mut q_blocks: Vec<Vec<Option<GfMatrix>>> = vec![vec![None; k]; k];
        let mut w_blocks: Vec<Vec<Option<GfMatrix>>> = vec![vec![None; k]; k];
        for s_idx in 0..k {
            for t_idx in s_idx + 1..k {
                let ell_s = self.indices[node_ids[s_idx] as usize - 1];
                let ell_t = self.indices[node_ids[t_idx] as usize - 1];
                let a = self.lambda[node_ids[s_idx] as usize - 1].clone();
                let p_neg_t = self.rep.power_neg(ell_t * (self.params.k - 1));
                let b_mat = p_neg_t.transpose();
                let c = blk(s_idx, t_idx)
                    .sub(&blk(t_idx, s_idx).transpose())?
                    .matmul(&b_mat)?;
                let q_st = solve_stein(&a, &b_mat, &c).map_err(|e| match e {
                    LinalgError::SingularStein => CodecError::CosetCollision { a: ell_s, b: ell_t },
                    other => CodecError::Linalg(other),
                })?;
                let w_st = blk(s_idx, t_idx).sub(&a.matmul(&q_st)?)?;
                let q_ts = q_st.transpose();
                // the transposed block must satisfy the (t,s) relation it was
                // never solved against; a mismatch means corrupt shares
                let lam_t = &self.lambda[node_ids[t_idx] as usize - 1];
                let lhs = blk(t_idx, s_idx).sub(&blk(s_idx, t_idx).transpose())?;
                let rhs = lam_t.matmul(&q_ts)?.sub(&q_ts.matmul(&a.transpose())?)?;
                if lhs != rhs {
                    return Err(CodecError::Inconsistent(format!(
                        "block pair ({s_idx},{t_idx}) violates its symmetric relation"
                    )));
                }
                w_blocks[t_idx][s_idx] = Some(w_st.transpose());
                q_blocks[t_idx][s_idx] = Some(q_ts);
                q_blocks[s_idx][t_idx] = Some(q_st);
                w_blocks[s_idx][t_idx] = Some(w_st);
            }
        }

        let recover = |blocks: &Vec<Vec<Option<GfMatrix>>>| -> Result<GfMatrix, CodecError> {
            // per selected node i: its block row (diagonal excluded) equals
            // Φ_i·S·(stack of the other Φ)ᵀ
            let mut phi_s_rows = Vec::with_capacity(k);
            for i in 0..k {
                let row_parts: Vec<&GfMatrix> = (0..k)
                    .filter(|&j| j != i)
                    .map(|j| blocks[i][j].as_ref().expect("off-diagonal block"))
                    .collect();
                let r_i = GfMatrix::hstack(&row_parts)?;
                let rest: Vec<&GfMatrix> = (0..k).filter(|&j| j != i).map(|j| sel_phi[j]).collect();
                let phi_rest = GfMatrix::vstack(&rest)?;
                // Z·Φ_restᵀ = R_i  ⇔  Φ_rest·Zᵀ = R_iᵀ
                let z_t = phi_rest.solve(&r_i.transpose()).map_err(|e| match e {
                    LinalgError::Singular { .. } => CodecError::SingularAssembly,
                    other => CodecError::Linalg(other),
                })?;
                phi_s_rows.push(z_t.transpose());
            }
            let top: Vec<&GfMatrix> = phi_s_rows[..k - 1].iter().collect();
            let phi_first = GfMatrix::vstack(&sel_phi[..k - 1])?;
            let stacked = GfMatrix::vstack(&top)?;
            phi_first.solve(&stacked).map_err(|e| match e {
                LinalgError::Singular { .. } => CodecError::SingularAssembly,
                other => CodecError::Linalg(other),
            })
        };
        let s2 = recover(&q_blocks)?;
        let s1 = recover(&w_blocks)?;
        if !s1.is_symmetric() || !s2.is_symmetric() {
            return Err(CodecError::Inconsistent("recovered S₁/S₂ not symmetric".into()));
        }
        Ok(self.params.extract_file(&s1, &s2))
    }
}

/// The α×B matrix of the linear map from structured file symbols to one
/// node's share, column e = vect(M_node·X_e) for the e-th unit symbol.
fn share_map_matrix(code: &NmsrCode, node_id: u32) -> Result<GfMatrix, CodecError> {
    let b_sym = usize::try_from(code.params().file_symbols()).expect("desk-scale");
    let alpha = usize::try_from(code.params().alpha()).expect("desk-scale");
    let row = code.node_row(node_id)?;
    let mut map = GfMatrix::zeros(code.params().field, alpha, b_sym);
    let mut unit = vec![0u16; b_sym];
    for e in 0..b_sym {
        unit[e] = 1;
        let x_e = code.params().build_data_matrix(&unit)?;
        unit[e] = 0;
        let col = row.matmul(&x_e)?.vect();
        for r in 0..alpha {
            map.set(r, e, col.get(r, 0));
        }
    }
    Ok(map)
}

/// An (n−1, k−1, d−1) code carved out of a parent by zero-forcing one node:
/// the child file is pre-coded into the nullspace of that node's share map,
/// so its share is identically zero and every party simulates it for free.
///
/// The punctured node is the lowest-id node whose share map has full rank α
/// on the structured symbols — node 1 (index 0) folds S₁ and S₂ through the
/// same map and its constraint drops rank, which would inflate the child
/// file size past B′ − α.
#[derive(Debug, Clone)]
pub struct PuncturedNmsr {
    parent: NmsrCode,
    punctured: u32,
    /// B_parent × B_child basis of {X structured : M_punctured·X = 0}.
    precode: GfMatrix,
    pivot_rows: Vec<usize>,
    pivot_inv: GfMatrix,
}

impl PuncturedNmsr {
    pub fn new(parent: NmsrCode) -> Result<Self, CodecError> {
        if parent.params().k < 3 {
            return Err(CodecError::TooLarge(
                "puncturing needs parent k ≥ 3 so the child keeps k ≥ 2".into(),
            ));
        }
        let b_parent = usize::try_from(parent.params().file_symbols()).expect("desk-scale");
        let alpha = usize::try_from(parent.params().alpha()).expect("desk-scale");
        let mut chosen: Option<(u32, GfMatrix)> = None;
        for node in 1..=parent.params().n as u32 {
            let constraint = share_map_matrix(&parent, node)?;
            let precode = constraint.nullspace();
            if precode.cols() == b_parent - alpha {
                chosen = Some((node, precode));
                break;
            }
        }
        let Some((punctured, precode)) = chosen else {
            return Err(CodecError::Inconsistent(
                "no node's zero-forcing constraint has rank α; parameters degenerate".into(),
            ));
        };
        let pivot_rows = precode.transpose().pivot_columns();
        let mut square = GfMatrix::zeros(parent.params().field, precode.cols(), precode.cols());
        for (ri, &r) in pivot_rows.iter().enumerate() {
            for c in 0..precode.cols() {
                square.set(ri, c, precode.get(r, c));
            }
        }
        let pivot_inv = square.invert()?;
        Ok(PuncturedNmsr { parent, punctured, precode, pivot_rows, pivot_inv })
    }

    /// The parent node that the child simulates as all-zero.
    pub fn punctured_node(&self) -> u32 {
        self.punctured
    }

    pub fn parent(&self) -> &NmsrCode {
        &self.parent
    }

    pub fn precode_matrix(&self) -> &GfMatrix {
        &self.precode
    }

    pub fn n(&self) -> u64 {
        self.parent.params().n - 1
    }

    pub fn k(&self) -> u64 {
        self.parent.params().k - 1
    }

    pub fn d(&self) -> u64 {
        self.parent.params().d - 1
    }

    /// B = B_parent − α.
    pub fn file_symbols(&self) -> u128 {
        self.parent.params().file_symbols() - self.parent.params().alpha()
    }

    pub fn alpha(&self) -> u128 {
        self.parent.params().alpha()
    }

    pub fn beta(&self) -> u128 {
        self.parent.params().beta()
    }

    pub fn b_over_alpha_k(&self) -> Ratio<i128> {
        Ratio::new(self.file_symbols() as i128, self.alpha() as i128 * self.k() as i128)
    }

    pub fn metrics(&self) -> NmsrMetrics {
        NmsrMetrics {
            file_symbols: self.file_symbols(),
            alpha: self.alpha(),
            beta: self.beta(),
            rate: Ratio::new(self.file_symbols() as i128, self.alpha() as i128 * self.n() as i128),
            b_over_alpha_k: self.b_over_alpha_k(),
        }
    }

    fn to_parent_id(&self, child: u32) -> Result<u32, CodecError> {
        if child < 1 || child as u64 > self.n() {
            return Err(CodecError::UnknownNode { node: child, n: self.n() });
        }
        Ok(if child < self.punctured { child } else { child + 1 })
    }

    fn to_child_id(&self, parent: u32) -> u32 {
        debug_assert_ne!(parent, self.punctured);
        if parent < self.punctured {
            parent
        } else {
            parent - 1
        }
    }

    fn virtual_share(&self) -> NodeShare {
        NodeShare {
            node_id: self.punctured,
            payload: GfMatrix::zeros(
                self.parent.params().field,
                self.parent.params().m() as usize,
                self.parent.params().s_dim() as usize,
            ),
        }
    }

    /// Parent-encodes the pre-coded file and drops the zero-forced node.
    pub fn encode(&self, symbols: &[u16]) -> Result<Vec<NodeShare>, CodecError> {
        let b_child = usize::try_from(self.file_symbols()).expect("desk-scale");
        if symbols.len() != b_child {
            return Err(CodecError::WrongSymbolCount { expected: b_child, got: symbols.len() });
        }
        let f = GfMatrix::from_symbols(self.parent.params().field, b_child, 1, symbols)?;
        let y = self.precode.matmul(&f)?;
        let parent_syms: Vec<u16> = y.symbols().to_vec();
        let mut shares = self.parent.encode(&parent_syms)?;
        debug_assert!(
            shares[self.punctured as usize - 1].payload.is_zero(),
            "punctured node must be zero-forced"
        );
        shares.remove(self.punctured as usize - 1);
        for s in &mut shares {
            s.node_id = self.to_child_id(s.node_id);
        }
        Ok(shares)
    }

    pub fn repair_helper(&self, share: &NodeShare, target_id: u32) -> Result<RepairPacket, CodecError> {
        if share.node_id == target_id {
            return Err(CodecError::HelperIsTarget { node: target_id });
        }
        let parent_share = NodeShare {
            node_id: self.to_parent_id(share.node_id)?,
            payload: share.payload.clone(),
        };
        let mut pkt = self
            .parent
            .repair_helper(&parent_share, self.to_parent_id(target_id)?)?;
        pkt.helper_id = self.to_child_id(pkt.helper_id);
        pkt.target_id = self.to_child_id(pkt.target_id);
        Ok(pkt)
    }

    /// d = d′−1 real packets plus the simulated zero packet from node 1.
    pub fn repair_assemble(&self, packets: &[RepairPacket]) -> Result<NodeShare, CodecError> {
        let d = self.d() as usize;
        if packets.len() != d {
            return Err(CodecError::WrongCount { what: "repair packets", expected: d, got: packets.len() });
        }
        let target = packets[0].target_id;
        let parent_target = self.to_parent_id(target)?;
        let mut parent_packets = Vec::with_capacity(d + 1);
        for p in packets {
            parent_packets.push(RepairPacket {
                helper_id: self.to_parent_id(p.helper_id)?,
                target_id: self.to_parent_id(p.target_id)?,
                payload: p.payload.clone(),
            });
        }
        let virtual_pkt = self.parent.repair_helper(&self.virtual_share(), parent_target)?;
        debug_assert!(virtual_pkt.payload.is_zero());
        parent_packets.push(virtual_pkt);
        let mut share = self.parent.repair_assemble(&parent_packets)?;
        share.node_id = self.to_child_id(share.node_id);
        Ok(share)
    }

    /// k = k′−1 real shares plus the virtual zero share of node 1.
    pub fn reconstruct(&self, shares: &[NodeShare]) -> Result<Vec<u16>, CodecError> {
        let k = self.k() as usize;
        if shares.len() != k {
            return Err(CodecError::WrongCount { what: "shares", expected: k, got: shares.len() });
        }
        let mut parent_shares = vec![self.virtual_share()];
        for s in shares {
            parent_shares.push(NodeShare {
                node_id: self.to_parent_id(s.node_id)?,
                payload: s.payload.clone(),
            });
        }
        let y = self.parent.reconstruct(&parent_shares)?;
        // y = precode·f; the pivot rows of the precode basis invert to f
        let mut picked = GfMatrix::zeros(self.parent.params().field, self.pivot_rows.len(), 1);
        for (ri, &r) in self.pivot_rows.iter().enumerate() {
            picked.set(ri, 0, y[r]);
        }
        let f = self.pivot_inv.matmul(&picked)?;
        Ok(f.symbols().to_vec())
    }
}
