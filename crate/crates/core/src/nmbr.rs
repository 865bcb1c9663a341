//! The minimum-bandwidth family: each node stores M_j·X for a symmetric data
//! matrix X and a block row M_j = (I  P^{i_j}  P^{2i_j} … P^{(d−1)i_j}) built
//! from powers of a companion matrix P over F_q. Any d nodes repair a failed
//! node with β = (b/k)² symbols each (α = dβ exactly), and any k nodes
//! reconstruct the file.
//!
//! Node j's evaluation point is the i_j-th element of [1, γ, γ², …, γ^{q^m−2}, 0]:
//! for i_j < q^m−1 that is the pure power P^{i_j} and the block row matches
//! the display above; the one extra index q^m−1 denotes the zero element
//! (block row (I 0 … 0)), which keeps the points distinct for every n up to
//! q^{b/k} as condition A1 promises.
//!
//! A systematic variant swaps the Vandermonde-style rows for the columns of
//! (I_k E; 0 F) with (E; F) a Cauchy matrix over F_{q^m}; the first k nodes
//! then hold the raw data rows. Repair and reconstruction are unchanged.

use crate::extfield::ExtFieldRep;
use crate::gf::PrimeField;
use crate::linalg::{GfMatrix, LinalgError};
use crate::share::{render_biguint, CodecError, NodeShare, ParamError, RepairPacket};
use num_bigint::BigUint;
use num_rational::Ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NmbrEncoding {
    Plain,
    SystematicCauchy,
}

/// Validated (n, k, d, q, b) with the derived sizes and node exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NmbrParams {
    pub n: u64,
    pub k: u64,
    pub d: u64,
    pub b: u64,
    pub field: PrimeField,
    pub encoding: NmbrEncoding,
    /// i_1..i_n, smallest distinct values: j−1 for node j.
    pub exponents: Vec<u64>,
}

impl NmbrParams {
    pub fn validate(
        n: u64,
        k: u64,
        d: u64,
        q: u64,
        b: u64,
        encoding: NmbrEncoding,
    ) -> Result<Self, ParamError> {
        let field = PrimeField::new(q)?;
        if k < 1 || k > d || d + 1 > n {
            return Err(ParamError::DegreeOrderViolation { n, k, d });
        }
        if b == 0 || b % k != 0 {
            return Err(ParamError::A2Violation { k, b });
        }
        let m = b / k;
        // A1: q^(b/k) ≥ n, i.e. enough distinct evaluation points; the
        // systematic variant consumes d + (n−k) distinct elements instead.
        let qm = BigUint::from(q).pow(u32::try_from(m).expect("b/k fits u32"));
        let need = match encoding {
            NmbrEncoding::Plain => n,
            NmbrEncoding::SystematicCauchy => n + d - k,
        };
        if qm < BigUint::from(need) {
            return Err(ParamError::A1Violation {
                q,
                n,
                k,
                b,
                qm: render_biguint(&qm),
                need,
            });
        }
        let exponents = (0..n).collect();
        Ok(NmbrParams { n, k, d, b, field, encoding, exponents })
    }

    #[inline]
    pub fn m(&self) -> u64 {
        self.b / self.k
    }

    /// β = (b/k)², symbols per helper packet.
    pub fn beta(&self) -> u128 {
        (self.m() as u128) * (self.m() as u128)
    }

    /// α = dβ, symbols stored per node.
    pub fn alpha(&self) -> u128 {
        self.beta() * self.d as u128
    }

    /// B = b(b+1)/2 + b²(d/k − 1), symbols per stripe.
    pub fn file_symbols(&self) -> u128 {
        let b = self.b as u128;
        b * (b + 1) / 2 + b * (b / self.k as u128) * (self.d - self.k) as u128
    }

    /// The cut-set value C = β(dk − k(k−1)/2) this family approaches.
    pub fn cutset(&self) -> u128 {
        let (k, d) = (self.k as u128, self.d as u128);
        self.beta() * (d * k - k * (k - 1) / 2)
    }

    pub fn metrics(&self) -> NmbrMetrics {
        let b_sym = self.file_symbols();
        let alpha = self.alpha();
        NmbrMetrics {
            file_symbols: b_sym,
            cutset: self.cutset(),
            alpha,
            beta: self.beta(),
            rate: Ratio::new(b_sym as i128, alpha as i128 * self.n as i128),
            b_over_c: Ratio::new(b_sym as i128, self.cutset() as i128),
        }
    }

    /// Table-form rate k²/(dn) · (d/k − 1/2 + 1/(2b)); equals B/(αn).
    pub fn rate_closed_form(&self) -> Ratio<i128> {
        let (n, k, d, b) = (self.n as i128, self.k as i128, self.d as i128, self.b as i128);
        Ratio::new(k * k, d * n) * (Ratio::new(d, k) - Ratio::new(1, 2) + Ratio::new(1, 2 * b))
    }

    /// Closed form of B/C: (2 − (k/d)·(b−1)/b) / (2 − k/d + 1/d).
    pub fn b_over_c_closed_form(&self) -> Ratio<i128> {
        let (k, d, b) = (self.k as i128, self.d as i128, self.b as i128);
        let num = Ratio::from_integer(2) - Ratio::new(k, d) * Ratio::new(b - 1, b);
        let den = Ratio::from_integer(2) - Ratio::new(k, d) + Ratio::new(1, d);
        num / den
    }

    /// Lays the B file symbols into X = (S T; Tᵀ 0): S's upper triangle
    /// row-major, then T row-major.
    pub fn build_data_matrix(&self, symbols: &[u16]) -> Result<GfMatrix, CodecError> {
        let b_sym = usize::try_from(self.file_symbols()).expect("desk-scale stripe");
        if symbols.len() != b_sym {
            return Err(CodecError::WrongSymbolCount { expected: b_sym, got: symbols.len() });
        }
        let b = self.b as usize;
        let x_dim = (self.d * self.m()) as usize;
        let t_cols = x_dim - b;
        let mut x = GfMatrix::zeros(self.field, x_dim, x_dim);
        let mut idx = 0;
        for i in 0..b {
            for j in i..b {
                x.set(i, j, symbols[idx]);
                x.set(j, i, symbols[idx]);
                idx += 1;
            }
        }
        for i in 0..b {
            for j in 0..t_cols {
                x.set(i, b + j, symbols[idx]);
                x.set(b + j, i, symbols[idx]);
                idx += 1;
            }
        }
        debug_assert_eq!(idx, b_sym);
        Ok(x)
    }

    /// Reads the file symbols back out of S and T.
    pub fn extract_file(&self, s: &GfMatrix, t: &GfMatrix) -> Vec<u16> {
        let b = self.b as usize;
        let mut out = Vec::with_capacity(usize::try_from(self.file_symbols()).unwrap());
        for i in 0..b {
            for j in i..b {
                out.push(s.get(i, j));
            }
        }
        for i in 0..t.rows() {
            for j in 0..t.cols() {
                out.push(t.get(i, j));
            }
        }
        out
    }
}

/// Rate and size figures, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NmbrMetrics {
    pub file_symbols: u128,
    pub cutset: u128,
    pub alpha: u128,
    pub beta: u128,
    pub rate: Ratio<i128>,
    pub b_over_c: Ratio<i128>,
}

/// An executable NMBR codec: the extension-field representation plus the n
/// per-node encoder rows.
#[derive(Debug, Clone)]
pub struct NmbrCode {
    params: NmbrParams,
    rep: ExtFieldRep,
    node_rows: Vec<GfMatrix>,
}

impl NmbrCode {
    pub fn new(params: NmbrParams) -> Result<Self, CodecError> {
        let m = usize::try_from(params.m()).expect("b/k fits usize");
        let cache_bound = (params.d - 1).saturating_mul(params.n - 1);
        let rep = ExtFieldRep::new(params.field, m, cache_bound)?;
        let node_rows = match params.encoding {
            NmbrEncoding::Plain => plain_rows(&params, &rep),
            NmbrEncoding::SystematicCauchy => cauchy_rows(&params, &rep)?,
        };
        Ok(NmbrCode { params, rep, node_rows })
    }

    pub fn params(&self) -> &NmbrParams {
        &self.params
    }

    pub fn rep(&self) -> &ExtFieldRep {
        &self.rep
    }

    /// M_j for a 1-based node id.
    pub fn node_row(&self, node_id: u32) -> Result<&GfMatrix, CodecError> {
        if node_id < 1 || node_id as u64 > self.params.n {
            return Err(CodecError::UnknownNode { node: node_id, n: self.params.n });
        }
        Ok(&self.node_rows[node_id as usize - 1])
    }

    /// The full nb/k × db/k encoding matrix (stack of M_1..M_n).
    pub fn encoding_matrix(&self) -> GfMatrix {
        GfMatrix::vstack(&self.node_rows.iter().collect::<Vec<_>>()).expect("uniform rows")
    }

    /// Share j = M_j·X for every node.
    pub fn encode(&self, symbols: &[u16]) -> Result<Vec<NodeShare>, CodecError> {
        let x = self.params.build_data_matrix(symbols)?;
        self.node_rows
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
        let cols = (self.params.d * self.params.m()) as usize;
        if share.payload.rows() != rows || share.payload.cols() != cols {
            return Err(CodecError::BadShareShape {
                rows,
                cols,
                got_rows: share.payload.rows(),
                got_cols: share.payload.cols(),
            });
        }
        self.node_row(share.node_id).map(|_| ())
    }

    /// What a helper sends the newcomer: its own share times M_targetᵀ,
    /// a (b/k)×(b/k) packet of β symbols.
    pub fn repair_helper(&self, share: &NodeShare, target_id: u32) -> Result<RepairPacket, CodecError> {
        self.check_share_shape(share)?;
        if share.node_id == target_id {
            return Err(CodecError::HelperIsTarget { node: target_id });
        }
        let target_row = self.node_row(target_id)?;
        Ok(RepairPacket {
            helper_id: share.node_id,
            target_id,
            payload: share.payload.matmul(&target_row.transpose())?,
        })
    }

    /// Stacks d packets into M_D·X·M_iᵀ, strips M_D, and transposes the
    /// symmetric remainder back into M_i·X.
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
        self.node_row(target)?;
        let m_d = GfMatrix::vstack(&rows)?;
        let payloads: Vec<&GfMatrix> = sorted.iter().map(|p| &p.payload).collect();
        let stacked = GfMatrix::vstack(&payloads)?;
        let x_mt = m_d.solve(&stacked).map_err(|e| match e {
            LinalgError::Singular { .. } => CodecError::SingularAssembly,
            other => CodecError::Linalg(other),
        })?;
        Ok(NodeShare {
            node_id: target,
            payload: x_mt.transpose(),
        })
    }

    /// File from any k shares: T comes off the rightmost columns through
    /// (M_K′)⁻¹, then S after removing M_K″·Tᵀ. For d = k the single solve
    /// yields X = S directly.
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
        let b = self.params.b as usize;
        let x_dim = (self.params.d * self.params.m()) as usize;
        let payloads: Vec<&GfMatrix> = sorted.iter().map(|s| &s.payload).collect();
        let g = GfMatrix::vstack(&payloads)?; // M_K · X, b × x_dim
        let row_refs: Vec<&GfMatrix> = sorted
            .iter()
            .map(|s| self.node_row(s.node_id))
            .collect::<Result<_, _>>()?;
        let mk_prime = GfMatrix::vstack(
            &row_refs.iter().map(|r| r.block(0, 0, r.rows(), b)).collect::<Vec<_>>().iter().collect::<Vec<_>>(),
        )?;
        let solve = |rhs: &GfMatrix| {
            mk_prime.solve(rhs).map_err(|e| match e {
                LinalgError::Singular { .. } => CodecError::SingularAssembly,
                other => CodecError::Linalg(other),
            })
        };
        if self.params.d == self.params.k {
            let s = solve(&g)?;
            let t = GfMatrix::zeros(self.params.field, b, 0);
            return Ok(self.params.extract_file(&s, &t));
        }
        let t_cols = x_dim - b;
        let t = solve(&g.block(0, b, b, t_cols))?;
        let mk_second = GfMatrix::vstack(
            &row_refs
                .iter()
                .map(|r| r.block(0, b, r.rows(), t_cols))
                .collect::<Vec<_>>()
                .iter()
                .collect::<Vec<_>>(),
        )?;
        let left = g.block(0, 0, b, b).sub(&mk_second.matmul(&t.transpose())?)?;
        let s = solve(&left)?;
        Ok(self.params.extract_file(&s, &t))
    }
}

/// Block row per node from powers of P; the one index equal to q^m−1 maps to
/// the zero element instead of the aliasing power γ^{q^m−1} = 1.
fn plain_rows(params: &NmbrParams, rep: &ExtFieldRep) -> Vec<GfMatrix> {
    let m = rep.degree();
    let d = params.d as usize;
    params
        .exponents
        .iter()
        .map(|&e| {
            let mut row = GfMatrix::zeros(params.field, m, d * m);
            if e == rep.order() {
                row.set_block(0, 0, &GfMatrix::identity(params.field, m));
            } else {
                for t in 0..d {
                    row.set_block(0, t * m, &rep.power(e * t as u64));
                }
            }
            row
        })
        .collect()
}

/// Block rows from the columns of A″ = (I_k E; 0 F), (E; F) a d×(n−k)
/// Cauchy matrix with cells 1/(u_i − v_j) over F_{q^m}: nodes 1..k carry
/// plain identity rows (systematic), the rest carry Θ-images of Cauchy
/// columns.
fn cauchy_rows(params: &NmbrParams, rep: &ExtFieldRep) -> Result<Vec<GfMatrix>, CodecError> {
    let m = rep.degree();
    let (n, k, d) = (params.n as usize, params.k as usize, params.d as usize);
    let u: Vec<_> = (0..d).map(|i| rep.element_from_index(i as u64)).collect();
    let v: Vec<_> = (0..n - k).map(|j| rep.element_from_index((d + j) as u64)).collect();
    let mut rows = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = GfMatrix::zeros(params.field, m, d * m);
        if j < k {
            row.set_block(0, j * m, &GfMatrix::identity(params.field, m));
        } else {
            for (t, u_t) in u.iter().enumerate() {
                let cell = rep.ext_inv(&rep.ext_sub(u_t, &v[j - k]))?;
                row.set_block(0, t * m, &rep.theta(&cell)?);
            }
        }
        rows.push(row);
    }
    Ok(rows)
}
