//! Dense matrix algebra over F_q: products, Gauss–Jordan inversion, rank and
//! nullspace, Kronecker products, column-stacking, and the Stein-equation
//! solver (AXB − X = C) that reconstruction relies on.
//!
//! Everything is exact; pivoting picks the first nonzero entry since there is
//! no rounding to worry about. Matrices are immutable values — operations
//! return fresh matrices.

use crate::gf::{FieldElement, GfError, PrimeField};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("matrices belong to different fields")]
    FieldMismatch,
    #[error("singular matrix (rank {rank} of {size})")]
    Singular { rank: usize, size: usize },
    #[error("Stein system matrix B^T⊗A − I is singular (1 is an eigenvalue of B^T⊗A)")]
    SingularStein,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A dense rows×cols matrix over F_q, row-major canonical residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl GfMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        GfMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row slices of canonical residues.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(field, nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(LinalgError::DimMismatch("ragged rows".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                m.data[i * ncols + j] = field.elem(v)?.value();
            }
        }
        Ok(m)
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u16,
    ) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j) % field.modulus() as u16;
            }
        }
        m
    }

    /// Reassembles a matrix from a row-major symbol slice.
    pub fn from_symbols(
        field: PrimeField,
        rows: usize,
        cols: usize,
        symbols: &[u16],
    ) -> Result<Self, LinalgError> {
        if symbols.len() != rows * cols {
            return Err(LinalgError::DimMismatch(format!(
                "expected {} symbols for a {rows}x{cols} matrix, got {}",
                rows * cols,
                symbols.len()
            )));
        }
        let q = field.modulus() as u16;
        if let Some(&bad) = symbols.iter().find(|&&s| s >= q) {
            return Err(GfError::NotAResidue { value: bad as u64, q: field.modulus() }.into());
        }
        Ok(GfMatrix {
            field,
            rows,
            cols,
            data: symbols.to_vec(),
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.data[r * self.cols + c]
    }

    /// Entry as a tagged field element.
    pub fn at(&self, r: usize, c: usize) -> FieldElement {
        self.field.reduce(self.get(r, c) as u64)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u16) {
        debug_assert!((v as u32) < self.field.modulus());
        self.data[r * self.cols + c] = v;
    }

    /// Row-major residues, the wire representation of a share payload.
    pub fn symbols(&self) -> &[u16] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    fn check_same_field(&self, other: &GfMatrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &GfMatrix) -> Result<GfMatrix, LinalgError> {
        self.check_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(&other.data) {
            *o = self.field.add_raw(*o, b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GfMatrix) -> Result<GfMatrix, LinalgError> {
        self.check_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimMismatch(format!(
                "{}x{} - {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(&other.data) {
            *o = self.field.sub_raw(*o, b);
        }
        Ok(out)
    }

    pub fn neg(&self) -> GfMatrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = self.field.neg_raw(*v);
        }
        out
    }

    pub fn scale(&self, s: u16) -> GfMatrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = self.field.mul_raw(*v, s);
        }
        out
    }

    pub fn transpose(&self) -> GfMatrix {
        let mut out = GfMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    /// Standard product over F_q.
    pub fn matmul(&self, other: &GfMatrix) -> Result<GfMatrix, LinalgError> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimMismatch(format!(
                "{}x{} · {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let q = self.field.modulus() as u64;
        let mut out = GfMatrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.data[i * self.cols + t] as u64;
                if a == 0 {
                    continue;
                }
                let orow = i * other.cols;
                let brow = t * other.cols;
                for j in 0..other.cols {
                    let acc = out.data[orow + j] as u64 + a * other.data[brow + j] as u64;
                    out.data[orow + j] = (acc % q) as u16;
                }
            }
        }
        Ok(out)
    }

    /// Gauss–Jordan inverse, pivoting on the first nonzero entry per column.
    pub fn invert(&self) -> Result<GfMatrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = GfMatrix::identity(self.field, n);
        let f = self.field;
        let mut rank = 0;
        for col in 0..n {
            let pivot = (rank..n).find(|&r| work.get(r, col) != 0);
            let Some(pivot) = pivot else {
                // column with no pivot: matrix is singular; finish the rank count
                continue;
            };
            work.swap_rows(rank, pivot);
            inv.swap_rows(rank, pivot);
            let p_inv = f.inv_raw(work.get(rank, col)).expect("pivot nonzero");
            work.scale_row(rank, p_inv);
            inv.scale_row(rank, p_inv);
            for r in 0..n {
                if r != rank {
                    let factor = work.get(r, col);
                    if factor != 0 {
                        work.row_axpy(r, rank, f.neg_raw(factor));
                        inv.row_axpy(r, rank, f.neg_raw(factor));
                    }
                }
            }
            rank += 1;
        }
        if rank < n {
            return Err(LinalgError::Singular { rank, size: n });
        }
        Ok(inv)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().1.len()
    }

    /// Column indices that carry pivots after row reduction; for a matrix of
    /// stacked basis vectors this picks a maximal independent subset.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.clone().rref().1
    }

    /// Basis of {x : self·x = 0} as matrix columns; cols − rank of them.
    pub fn nullspace(&self) -> GfMatrix {
        let (rref, pivots) = self.clone().rref();
        let f = self.field;
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut basis = GfMatrix::zeros(f, n, free.len());
        for (bi, &fc) in free.iter().enumerate() {
            basis.set(fc, bi, 1);
            // pivot variable p (row r) satisfies x_p = −Σ rref[r][free]·x_free
            for (r, &pc) in pivots.iter().enumerate() {
                let coeff = rref.get(r, fc);
                if coeff != 0 {
                    basis.set(pc, bi, f.neg_raw(coeff));
                }
            }
        }
        basis
    }

    /// Solves self·X = rhs for square invertible self.
    pub fn solve(&self, rhs: &GfMatrix) -> Result<GfMatrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if rhs.rows != self.rows {
            return Err(LinalgError::DimMismatch(format!(
                "solve: {}x{} vs rhs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        self.check_same_field(rhs)?;
        let n = self.rows;
        let f = self.field;
        let mut work = self.clone();
        let mut out = rhs.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| work.get(r, col) != 0) else {
                continue;
            };
            work.swap_rows(rank, pivot);
            out.swap_rows(rank, pivot);
            let p_inv = f.inv_raw(work.get(rank, col)).expect("pivot nonzero");
            work.scale_row(rank, p_inv);
            out.scale_row(rank, p_inv);
            for r in 0..n {
                if r != rank {
                    let factor = work.get(r, col);
                    if factor != 0 {
                        work.row_axpy(r, rank, f.neg_raw(factor));
                        out.row_axpy(r, rank, f.neg_raw(factor));
                    }
                }
            }
            rank += 1;
        }
        if rank < n {
            return Err(LinalgError::Singular { rank, size: n });
        }
        Ok(out)
    }

    /// Kronecker product: block (i,j) equals self[i,j]·other.
    pub fn kron(&self, other: &GfMatrix) -> Result<GfMatrix, LinalgError> {
        self.check_same_field(other)?;
        let mut out = GfMatrix::zeros(self.field, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for r in 0..other.rows {
                    for c in 0..other.cols {
                        let v = self.field.mul_raw(a, other.get(r, c));
                        out.set(i * other.rows + r, j * other.cols + c, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Columns stacked top-to-bottom into an (rows·cols)×1 vector.
    pub fn vect(&self) -> GfMatrix {
        let mut out = GfMatrix::zeros(self.field, self.rows * self.cols, 1);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    /// Inverse of `vect` for a known shape.
    pub fn unvect(&self, rows: usize, cols: usize) -> Result<GfMatrix, LinalgError> {
        if self.cols != 1 || self.rows != rows * cols {
            return Err(LinalgError::DimMismatch(format!(
                "unvect {}x{} into {rows}x{cols}",
                self.rows, self.cols
            )));
        }
        let mut out = GfMatrix::zeros(self.field, rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                out.set(i, j, self.data[j * rows + i]);
            }
        }
        Ok(out)
    }

    /// Copies the h×w submatrix anchored at (r0, c0).
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> GfMatrix {
        assert!(r0 + h <= self.rows && c0 + w <= self.cols, "block out of range");
        let mut out = GfMatrix::zeros(self.field, h, w);
        for i in 0..h {
            for j in 0..w {
                out.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, m: &GfMatrix) {
        assert!(r0 + m.rows <= self.rows && c0 + m.cols <= self.cols, "block out of range");
        for i in 0..m.rows {
            for j in 0..m.cols {
                self.set(r0 + i, c0 + j, m.get(i, j));
            }
        }
    }

    pub fn hstack(parts: &[&GfMatrix]) -> Result<GfMatrix, LinalgError> {
        let rows = parts.first().map_or(0, |m| m.rows);
        if parts.iter().any(|m| m.rows != rows) {
            return Err(LinalgError::DimMismatch("hstack row mismatch".into()));
        }
        let field = parts.first().expect("hstack of nothing").field;
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = GfMatrix::zeros(field, rows, cols);
        let mut c0 = 0;
        for m in parts {
            out.set_block(0, c0, m);
            c0 += m.cols;
        }
        Ok(out)
    }

    pub fn vstack(parts: &[&GfMatrix]) -> Result<GfMatrix, LinalgError> {
        let cols = parts.first().map_or(0, |m| m.cols);
        if parts.iter().any(|m| m.cols != cols) {
            return Err(LinalgError::DimMismatch("vstack col mismatch".into()));
        }
        let field = parts.first().expect("vstack of nothing").field;
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = GfMatrix::zeros(field, rows, cols);
        let mut r0 = 0;
        for m in parts {
            out.set_block(r0, 0, m);
            r0 += m.rows;
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, s: u16) {
        if s == 1 {
            return;
        }
        for j in 0..self.cols {
            let v = self.field.mul_raw(self.data[r * self.cols + j], s);
            self.data[r * self.cols + j] = v;
        }
    }

    /// row[dst] += s · row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, s: u16) {
        for j in 0..self.cols {
            let add = self.field.mul_raw(self.data[src * self.cols + j], s);
            let v = self.field.add_raw(self.data[dst * self.cols + j], add);
            self.data[dst * self.cols + j] = v;
        }
    }

    /// Reduced row echelon form; returns (rref, pivot column indices).
    fn rref(mut self) -> (GfMatrix, Vec<usize>) {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pivot) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            self.swap_rows(row, pivot);
            let p_inv = f.inv_raw(self.get(row, col)).expect("pivot nonzero");
            self.scale_row(row, p_inv);
            for r in 0..self.rows {
                if r != row {
                    let factor = self.get(r, col);
                    if factor != 0 {
                        self.row_axpy(r, row, f.neg_raw(factor));
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (self, pivots)
    }
}

impl std::fmt::Display for GfMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Solves the Stein equation A·X·B − X = C for square m×m inputs by
/// assembling (Bᵀ⊗A − I)·vect(X) = vect(C) and eliminating. A singular
/// system means 1 is an eigenvalue of Bᵀ⊗A — upstream that signals an
/// invalid node-index selection, so it is reported, never patched over.
pub fn solve_stein(a: &GfMatrix, b: &GfMatrix, c: &GfMatrix) -> Result<GfMatrix, LinalgError> {
    let m = a.rows();
    for (name, mat) in [("A", a), ("B", b), ("C", c)] {
        if mat.rows() != m || mat.cols() != m {
            return Err(LinalgError::DimMismatch(format!(
                "stein operand {name} is {}x{}, expected {m}x{m}",
                mat.rows(),
                mat.cols()
            )));
        }
    }
    a.check_same_field(b)?;
    a.check_same_field(c)?;
    let system = b
        .transpose()
        .kron(a)?
        .sub(&GfMatrix::identity(a.field(), m * m))?;
    let x = system.solve(&c.vect()).map_err(|e| match e {
        LinalgError::Singular { .. } => LinalgError::SingularStein,
        other => other,
    })?;
    x.unvect(m, m)
}
