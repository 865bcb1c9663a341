//! F_{q^m} realized inside F_q^{m×m}: companion matrices of primitive
//! polynomials, the θ/Θ maps from extension-field entries to base-field
//! blocks, coefficient-vector arithmetic in F_{q^m}, and q-cyclotomic cosets.
//!
//! The polynomial search is deterministic (ascending integer encoding of the
//! coefficient vector), so any two runs — or any two implementations following
//! the same rule — produce identical codes for identical parameters.

use crate::gf::{self, PrimeField};
use crate::linalg::{GfMatrix, LinalgError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtFieldError {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("coefficient vector has length {got}, expected {want}")]
    WrongLength { want: usize, got: usize },
    #[error("ragged matrix of extension-field entries")]
    RaggedInput,
    #[error("gcd(q, modulus) must be 1 (q={q}, modulus={modulus})")]
    NotCoprime { q: u64, modulus: u64 },
    #[error("need {need} cyclotomic cosets but only {have} exist")]
    NotEnoughCosets { have: usize, need: usize },
    #[error("q^m = {q}^{m} exceeds the supported extension size")]
    ExtensionTooLarge { q: u64, m: u64 },
    #[error("zero element has no inverse in F_{{q^m}}")]
    ZeroInverse,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Largest q^m the desk-scale machinery will materialize. Binary
/// exponentiation keeps matrix powers cheap well past this; the cap protects
/// the order factorization and coset enumeration.
pub const MAX_EXTENSION: u128 = 1 << 48;

// ---------------------------------------------------------------------------
// Polynomial arithmetic over F_q (ascending coefficients, trailing zeros
// stripped; the zero polynomial is the empty vector).
// ---------------------------------------------------------------------------
mod poly {
    use crate::gf::PrimeField;

    pub fn normalize(mut v: Vec<u16>) -> Vec<u16> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn is_zero(v: &[u16]) -> bool {
        v.iter().all(|&c| c == 0)
    }

    pub fn is_one(v: &[u16]) -> bool {
        let v = normalize(v.to_vec());
        v == [1]
    }

    pub fn sub(f: PrimeField, a: &[u16], b: &[u16]) -> Vec<u16> {
        let n = a.len().max(b.len());
        let mut out = vec![0u16; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            out[i] = f.sub_raw(x, y);
        }
        normalize(out)
    }

    pub fn mul(f: PrimeField, a: &[u16], b: &[u16]) -> Vec<u16> {
        if is_zero(a) || is_zero(b) {
            return Vec::new();
        }
        let mut out = vec![0u16; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add_raw(out[i + j], f.mul_raw(x, y));
            }
        }
        normalize(out)
    }

    /// Remainder of a modulo m (m nonzero).
    pub fn rem(f: PrimeField, a: &[u16], m: &[u16]) -> Vec<u16> {
        let m = normalize(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = f.inv_raw(m[dm]).expect("modulus leading coeff nonzero");
        let mut r = normalize(a.to_vec());
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let factor = f.mul_raw(*r.last().unwrap(), lead_inv);
            for i in 0..=dm {
                let sub = f.mul_raw(m[i], factor);
                r[shift + i] = f.sub_raw(r[shift + i], sub);
            }
            r = normalize(r);
            if r.is_empty() {
                break;
            }
        }
        r
    }

    pub fn mulmod(f: PrimeField, a: &[u16], b: &[u16], m: &[u16]) -> Vec<u16> {
        rem(f, &mul(f, a, b), m)
    }

    pub fn powmod(f: PrimeField, base: &[u16], mut exp: u64, m: &[u16]) -> Vec<u16> {
        let mut acc = vec![1u16];
        let mut sq = rem(f, base, m);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(f, &acc, &sq, m);
            }
            sq = mulmod(f, &sq, &sq, m);
            exp >>= 1;
        }
        acc
    }

    pub fn gcd(f: PrimeField, a: &[u16], b: &[u16]) -> Vec<u16> {
        let mut a = normalize(a.to_vec());
        let mut b = normalize(b.to_vec());
        while !b.is_empty() {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        a
    }

    /// Returns s with s·a ≡ gcd(a, m) (mod m); used for inversion mod a
    /// primitive polynomial where the gcd is a nonzero constant.
    pub fn inverse_mod(f: PrimeField, a: &[u16], m: &[u16]) -> Option<Vec<u16>> {
        let (mut r0, mut r1) = (normalize(m.to_vec()), rem(f, a, m));
        let (mut s0, mut s1) = (Vec::new(), vec![1u16]);
        while !r1.is_empty() {
            // divide r0 by r1
            let (q, r) = divrem(f, &r0, &r1);
            let qs1 = mul(f, &q, &s1);
            let s_next = sub(f, &s0, &qs1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s_next;
        }
        if r0.len() != 1 {
            return None; // gcd not a unit
        }
        let c_inv = f.inv_raw(r0[0]).ok()?;
        Some(rem(f, &mul(f, &s0, &[c_inv]), m))
    }

    pub fn divrem(f: PrimeField, a: &[u16], b: &[u16]) -> (Vec<u16>, Vec<u16>) {
        let b = normalize(b.to_vec());
        let db = b.len() - 1;
        let lead_inv = f.inv_raw(b[db]).expect("divisor leading coeff nonzero");
        let mut r = normalize(a.to_vec());
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let mut q = vec![0u16; r.len() - db];
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let factor = f.mul_raw(*r.last().unwrap(), lead_inv);
            q[shift] = factor;
            for i in 0..=db {
                let sub_v = f.mul_raw(b[i], factor);
                r[shift + i] = f.sub_raw(r[shift + i], sub_v);
            }
            r = normalize(r);
            if r.is_empty() {
                break;
            }
        }
        (normalize(q), r)
    }
}

/// x^{q^j} mod f via repeated Frobenius powering.
fn frobenius_iterate(field: PrimeField, j: u64, f_poly: &[u16]) -> Vec<u16> {
    let x = vec![0u16, 1];
    let mut y = poly::rem(field, &x, f_poly);
    for _ in 0..j {
        y = poly::powmod(field, &y, field.modulus() as u64, f_poly);
    }
    y
}

/// Rabin's test: monic f of degree m over F_q is irreducible iff
/// x^{q^m} ≡ x (mod f) and gcd(x^{q^{m/p}} − x, f) = 1 for every prime p | m.
fn is_irreducible(field: PrimeField, f_poly: &[u16]) -> bool {
    let m = (f_poly.len() - 1) as u64;
    if m == 1 {
        return true;
    }
    let x = vec![0u16, 1];
    let frob_m = frobenius_iterate(field, m, f_poly);
    if poly::sub(field, &frob_m, &poly::rem(field, &x, f_poly)) != Vec::<u16>::new() {
        return false;
    }
    let mut prime_divs = gf::factorize(m);
    prime_divs.dedup();
    for p in prime_divs {
        let frob = frobenius_iterate(field, m / p, f_poly);
        let diff = poly::sub(field, &frob, &poly::rem(field, &x, f_poly));
        let g = poly::gcd(field, &diff, f_poly);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Root order check: x has order exactly q^m − 1 in F_q[x]/(f).
fn is_primitive(field: PrimeField, f_poly: &[u16], order: u64) -> bool {
    if f_poly[0] == 0 {
        return false; // x divides f, the root 0 is not a unit
    }
    let x = vec![0u16, 1];
    if !poly::is_one(&poly::powmod(field, &x, order, f_poly)) {
        return false;
    }
    let mut prime_divs = gf::factorize(order);
    prime_divs.dedup();
    for p in prime_divs {
        if poly::is_one(&poly::powmod(field, &x, order / p, f_poly)) {
            return false;
        }
    }
    true
}

/// Finds the monic primitive degree-m polynomial over F_q whose coefficient
/// vector (p_0 + p_1·q + p_2·q² + …) encodes the smallest integer. For q=2
/// this reproduces the familiar table entries: x+1, x²+x+1, x³+x+1, x⁴+x+1.
pub fn find_primitive_poly(field: PrimeField, m: usize) -> Result<Vec<u16>, ExtFieldError> {
    assert!(m >= 1, "extension degree must be at least 1");
    let q = field.modulus() as u64;
    let size = (q as u128).checked_pow(m as u32).filter(|&s| s <= MAX_EXTENSION);
    let Some(size) = size else {
        return Err(ExtFieldError::ExtensionTooLarge { q, m: m as u64 });
    };
    let order = (size - 1) as u64;
    for code in 0..size as u64 {
        let mut coeffs = Vec::with_capacity(m + 1);
        let mut c = code;
        for _ in 0..m {
            coeffs.push((c % q) as u16);
            c /= q;
        }
        coeffs.push(1); // monic
        if coeffs[0] == 0 {
            continue;
        }
        if is_irreducible(field, &coeffs) && is_primitive(field, &coeffs, order) {
            return Ok(coeffs);
        }
    }
    unreachable!("a primitive polynomial of degree {m} exists over F_{q}")
}

/// Companion matrix of a monic polynomial p_0 + p_1 x + … + x^m: ones on the
/// subdiagonal, last column −p_0 … −p_{m−1}.
pub fn companion(field: PrimeField, poly_coeffs: &[u16]) -> Result<GfMatrix, ExtFieldError> {
    if poly_coeffs.last() != Some(&1) || poly_coeffs.len() < 2 {
        return Err(ExtFieldError::NotMonic);
    }
    let m = poly_coeffs.len() - 1;
    let mut p = GfMatrix::zeros(field, m, m);
    for i in 0..m {
        if i + 1 < m {
            p.set(i + 1, i, 1);
        }
        p.set(i, m - 1, field.neg_raw(poly_coeffs[i] % field.modulus() as u16));
    }
    Ok(p)
}

/// F_{q^m} as powers of the companion matrix P of a primitive degree-m
/// polynomial. Immutable after construction; the power cache is built
/// eagerly to the bound the caller declares (at least P^0 … P^{m−1} so θ is
/// always served from cache), and larger exponents fall back to binary
/// exponentiation without touching shared state.
#[derive(Debug, Clone)]
pub struct ExtFieldRep {
    field: PrimeField,
    m: usize,
    poly: Vec<u16>,
    order: u64,
    p: GfMatrix,
    cache: Vec<GfMatrix>,
}

impl ExtFieldRep {
    pub fn new(field: PrimeField, m: usize, cache_bound: u64) -> Result<Self, ExtFieldError> {
        let poly = find_primitive_poly(field, m)?;
        Self::from_poly(field, poly, cache_bound)
    }

    fn from_poly(field: PrimeField, poly: Vec<u16>, cache_bound: u64) -> Result<Self, ExtFieldError> {
        let m = poly.len() - 1;
        let q = field.modulus() as u64;
        let size = (q as u128).pow(m as u32);
        let order = (size - 1) as u64;
        let p = companion(field, &poly)?;
        let top = cache_bound
            .max(m.saturating_sub(1) as u64)
            .min(order.saturating_sub(1));
        let mut cache = Vec::with_capacity(top as usize + 1);
        cache.push(GfMatrix::identity(field, m));
        for _ in 0..top {
            let next = cache.last().unwrap().matmul(&p)?;
            cache.push(next);
        }
        Ok(ExtFieldRep { field, m, poly, order, p, cache })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.m
    }

    /// Multiplicative order of P, i.e. q^m − 1.
    #[inline]
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn poly(&self) -> &[u16] {
        &self.poly
    }

    pub fn companion_matrix(&self) -> &GfMatrix {
        &self.p
    }

    /// P^e with e taken mod ord(P).
    pub fn power(&self, e: u64) -> GfMatrix {
        let e = e % self.order;
        if (e as usize) < self.cache.len() {
            return self.cache[e as usize].clone();
        }
        // binary exponentiation off P, leaving the cache untouched
        let mut acc = GfMatrix::identity(self.field, self.m);
        let mut sq = self.p.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&sq).expect("square sizes agree");
            }
            sq = sq.matmul(&sq).expect("square sizes agree");
            e >>= 1;
        }
        acc
    }

    /// P^{−e}, via the modular exponent ord(P) − (e mod ord(P)).
    pub fn power_neg(&self, e: u64) -> GfMatrix {
        let e = e % self.order;
        if e == 0 {
            return GfMatrix::identity(self.field, self.m);
        }
        self.power(self.order - e)
    }

    /// θ: a length-m coefficient vector over F_q maps to Σ coeffs[i]·P^i.
    pub fn theta(&self, coeffs: &[u16]) -> Result<GfMatrix, ExtFieldError> {
        if coeffs.len() != self.m {
            return Err(ExtFieldError::WrongLength { want: self.m, got: coeffs.len() });
        }
        let mut out = GfMatrix::zeros(self.field, self.m, self.m);
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                out = out.add(&self.cache[i].scale(c))?;
            }
        }
        Ok(out)
    }

    /// Θ: an s×t array of extension-field entries maps to the ms×mt block
    /// matrix with block (i,j) = θ(a[i][j]).
    pub fn theta_big(&self, a: &[Vec<ExtElem>]) -> Result<GfMatrix, ExtFieldError> {
        let s = a.len();
        let t = a.first().map_or(0, |r| r.len());
        if a.iter().any(|r| r.len() != t) {
            return Err(ExtFieldError::RaggedInput);
        }
        let mut out = GfMatrix::zeros(self.field, self.m * s, self.m * t);
        for (i, row) in a.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                out.set_block(i * self.m, j * self.m, &self.theta(entry)?);
            }
        }
        Ok(out)
    }

    // -- coefficient-vector arithmetic in F_{q^m} ---------------------------
    // Independent of the matrix representation: plain polynomial arithmetic
    // mod the primitive polynomial. This is what the Cauchy construction and
    // the θ-oracle tests run on.

    pub fn ext_zero(&self) -> ExtElem {
        vec![0; self.m]
    }

    pub fn ext_one(&self) -> ExtElem {
        let mut e = vec![0; self.m];
        e[0] = 1;
        e
    }

    pub fn ext_is_zero(&self, a: &[u16]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// The idx-th field element under base-q digit encoding; enumerates all
    /// q^m elements as idx runs over 0..q^m.
    pub fn element_from_index(&self, idx: u64) -> ExtElem {
        let q = self.field.modulus() as u64;
        let mut e = Vec::with_capacity(self.m);
        let mut c = idx;
        for _ in 0..self.m {
            e.push((c % q) as u16);
            c /= q;
        }
        e
    }

    fn pad(&self, v: Vec<u16>) -> ExtElem {
        let mut v = v;
        v.resize(self.m, 0);
        v
    }

    pub fn ext_add(&self, a: &[u16], b: &[u16]) -> ExtElem {
        (0..self.m)
            .map(|i| {
                self.field
                    .add_raw(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0))
            })
            .collect()
    }

    pub fn ext_sub(&self, a: &[u16], b: &[u16]) -> ExtElem {
        (0..self.m)
            .map(|i| {
                self.field
                    .sub_raw(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0))
            })
            .collect()
    }

    pub fn ext_mul(&self, a: &[u16], b: &[u16]) -> ExtElem {
        self.pad(poly::mulmod(self.field, a, b, &self.poly))
    }

    pub fn ext_inv(&self, a: &[u16]) -> Result<ExtElem, ExtFieldError> {
        if self.ext_is_zero(a) {
            return Err(ExtFieldError::ZeroInverse);
        }
        let inv = poly::inverse_mod(self.field, a, &self.poly).ok_or(ExtFieldError::ZeroInverse)?;
        Ok(self.pad(inv))
    }

    pub fn ext_pow(&self, a: &[u16], e: u64) -> ExtElem {
        self.pad(poly::powmod(self.field, a, e, &self.poly))
    }
}

/// An element of F_{q^m} as an ascending coefficient vector of length m.
pub type ExtElem = Vec<u16>;

// ---------------------------------------------------------------------------
// q-cyclotomic cosets
// ---------------------------------------------------------------------------

/// The partition of Z_modulus into q-cyclotomic cosets {s, sq, sq², …},
/// ordered by smallest element, each coset listed in orbit order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    pub modulus: u64,
    pub cosets: Vec<Vec<u64>>,
    pub representatives: Vec<u64>,
}

pub fn coset_partition(q: u64, modulus: u64) -> Result<CosetTable, ExtFieldError> {
    if modulus == 0 || gf::gcd(q, modulus) != 1 {
        return Err(ExtFieldError::NotCoprime { q, modulus });
    }
    let mut seen = vec![false; modulus as usize];
    let mut cosets = Vec::new();
    let mut representatives = Vec::new();
    for s in 0..modulus {
        if seen[s as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut t = s;
        loop {
            seen[t as usize] = true;
            orbit.push(t);
            t = gf::mul_mod(t, q, modulus);
            if t == s {
                break;
            }
        }
        representatives.push(s);
        cosets.push(orbit);
    }
    Ok(CosetTable { modulus, cosets, representatives })
}

impl CosetTable {
    /// The first n representatives in ascending-smallest-element order.
    pub fn select_representatives(&self, n: usize) -> Result<Vec<u64>, ExtFieldError> {
        if self.representatives.len() < n {
            return Err(ExtFieldError::NotEnoughCosets {
                have: self.representatives.len(),
                need: n,
            });
        }
        Ok(self.representatives[..n].to_vec())
    }
}

/// True iff a and b lie in the same q-cyclotomic coset mod `modulus`.
pub fn same_coset(q: u64, modulus: u64, a: u64, b: u64) -> bool {
    let (a, b) = (a % modulus, b % modulus);
    let mut t = a;
    loop {
        if t == b {
            return true;
        }
        t = gf::mul_mod(t, q, modulus);
        if t == a {
            return false;
        }
    }
}

/// The first n coset representatives without materializing the partition:
/// walks s upward keeping each s that is the smallest element of its own
/// orbit. Equivalent to `coset_partition(..).select_representatives(n)`.
pub fn canonical_representatives(q: u64, modulus: u64, n: usize) -> Result<Vec<u64>, ExtFieldError> {
    if modulus == 0 || gf::gcd(q, modulus) != 1 {
        return Err(ExtFieldError::NotCoprime { q, modulus });
    }
    let mut reps = Vec::with_capacity(n);
    let mut s = 0u64;
    while reps.len() < n && s < modulus {
        let mut canonical = true;
        let mut t = gf::mul_mod(s, q, modulus);
        while t != s {
            if t < s {
                canonical = false;
                break;
            }
            t = gf::mul_mod(t, q, modulus);
        }
        if canonical {
            reps.push(s);
        }
        s += 1;
    }
    if reps.len() < n {
        // count what exists for the error message
        let have = coset_partition(q, modulus)?.representatives.len();
        return Err(ExtFieldError::NotEnoughCosets { have, need: n });
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn primitive_poly_small_binary() {
        let f2 = f(2);
        assert_eq!(find_primitive_poly(f2, 1).unwrap(), vec![1, 1]); // x+1
        assert_eq!(find_primitive_poly(f2, 2).unwrap(), vec![1, 1, 1]); // x²+x+1
        assert_eq!(find_primitive_poly(f2, 3).unwrap(), vec![1, 1, 0, 1]); // x³+x+1
        assert_eq!(find_primitive_poly(f2, 4).unwrap(), vec![1, 1, 0, 0, 1]); // x⁴+x+1
        assert_eq!(find_primitive_poly(f2, 6).unwrap(), vec![1, 1, 0, 0, 0, 0, 1]); // x⁶+x+1
    }

    #[test]
    fn primitive_poly_rejects_non_primitive_irreducible() {
        // x²+1 over GF(3) is irreducible but its root has order 4 < 8,
        // so the search must skip past it.
        let f3 = f(3);
        let p = find_primitive_poly(f3, 2).unwrap();
        assert!(is_irreducible(f3, &p));
        assert!(is_primitive(f3, &p, 8));
        assert!(!is_primitive(f3, &[1, 0, 1], 8));
    }

    #[test]
    fn companion_examples() {
        let f2 = f(2);
        let c = companion(f2, &[1, 1, 0, 1]).unwrap(); // x³+x+1
        let expect = GfMatrix::from_rows(
            f2,
            &[vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 0]],
        )
        .unwrap();
        assert_eq!(c, expect);

        let c1 = companion(f2, &[1, 1]).unwrap(); // x+1 → [1]
        assert_eq!(c1, GfMatrix::from_rows(f2, &[vec![1]]).unwrap());

        let f3 = f(3);
        let c3 = companion(f3, &[1, 0, 1]).unwrap(); // x²+1 over GF(3)
        let expect3 = GfMatrix::from_rows(f3, &[vec![0, 2], vec![1, 0]]).unwrap();
        assert_eq!(c3, expect3);

        assert_eq!(companion(f2, &[1, 0]), Err(ExtFieldError::NotMonic));
    }

    #[test]
    fn power_order_exhaustive() {
        for (q, m) in [(2u64, 2usize), (2, 3), (2, 4), (2, 6), (3, 2), (5, 2)] {
            let rep = ExtFieldRep::new(f(q), m, 4).unwrap();
            let order = rep.order();
            let id = GfMatrix::identity(rep.field(), m);
            let p = rep.power(1);
            let mut acc = id.clone();
            for e in 1..order {
                acc = acc.matmul(&p).unwrap();
                assert_ne!(acc, id, "P^{e} = I before the full order for q={q}, m={m}");
                assert_eq!(acc, rep.power(e), "cache/fallback disagree at e={e}");
            }
            assert_eq!(acc.matmul(&p).unwrap(), id);
        }
    }

    #[test]
    fn powers_span_independently() {
        // {P^i} for i < m are linearly independent over F_q
        for (q, m) in [(2u64, 4usize), (3, 3), (5, 2)] {
            let rep = ExtFieldRep::new(f(q), m, m as u64).unwrap();
            let cols: Vec<GfMatrix> = (0..m).map(|i| rep.power(i as u64).vect()).collect();
            let stacked = GfMatrix::hstack(&cols.iter().collect::<Vec<_>>()).unwrap();
            assert_eq!(stacked.rank(), m);
        }
    }

    #[test]
    fn theta_basics() {
        let rep = ExtFieldRep::new(f(2), 3, 2).unwrap();
        let mut one = vec![0u16; 3];
        one[0] = 1;
        assert_eq!(rep.theta(&one).unwrap(), GfMatrix::identity(rep.field(), 3));
        assert!(rep.theta(&[0, 0, 0]).unwrap().is_zero());
        assert!(matches!(
            rep.theta(&[1, 0]),
            Err(ExtFieldError::WrongLength { want: 3, got: 2 })
        ));
    }

    #[test]
    fn theta_is_multiplicative() {
        // oracle: polynomial arithmetic mod the primitive polynomial
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (q, m) in [(2u64, 3usize), (2, 4), (5, 2)] {
            let rep = ExtFieldRep::new(f(q), m, m as u64).unwrap();
            for _ in 0..50 {
                let y1: ExtElem = (0..m).map(|_| (rng.gen::<u32>() % q as u32) as u16).collect();
                let y2: ExtElem = (0..m).map(|_| (rng.gen::<u32>() % q as u32) as u16).collect();
                let prod = rep.ext_mul(&y1, &y2);
                let lhs = rep.theta(&prod).unwrap();
                let rhs = rep.theta(&y1).unwrap().matmul(&rep.theta(&y2).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
                let sum = rep.ext_add(&y1, &y2);
                let lhs_add = rep.theta(&sum).unwrap();
                let rhs_add = rep.theta(&y1).unwrap().add(&rep.theta(&y2).unwrap()).unwrap();
                assert_eq!(lhs_add, rhs_add);
            }
        }
    }

    #[test]
    fn theta_big_blocks() {
        let rep = ExtFieldRep::new(f(2), 2, 2).unwrap();
        let one = rep.ext_one();
        let zero = rep.ext_zero();
        // identity over F_{q^m} maps to the big identity
        let ext_id = vec![
            vec![one.clone(), zero.clone()],
            vec![zero.clone(), one.clone()],
        ];
        assert_eq!(rep.theta_big(&ext_id).unwrap(), GfMatrix::identity(rep.field(), 4));
        let single = vec![vec![one.clone()]];
        assert_eq!(rep.theta_big(&single).unwrap(), GfMatrix::identity(rep.field(), 2));
        let ragged = vec![vec![one.clone(), zero.clone()], vec![one]];
        assert!(matches!(rep.theta_big(&ragged), Err(ExtFieldError::RaggedInput)));
    }

    #[test]
    fn ext_inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for (q, m) in [(2u64, 4usize), (3, 3)] {
            let rep = ExtFieldRep::new(f(q), m, 2).unwrap();
            assert!(rep.ext_inv(&rep.ext_zero()).is_err());
            for _ in 0..40 {
                let a: ExtElem = (0..m).map(|_| (rng.gen::<u32>() % q as u32) as u16).collect();
                if rep.ext_is_zero(&a) {
                    continue;
                }
                let inv = rep.ext_inv(&a).unwrap();
                assert_eq!(rep.ext_mul(&a, &inv), rep.ext_one());
            }
        }
    }

    #[test]
    fn coset_partition_examples() {
        let t = coset_partition(2, 7).unwrap();
        assert_eq!(t.cosets, vec![vec![0], vec![1, 2, 4], vec![3, 6, 5]]);
        assert_eq!(t.representatives, vec![0, 1, 3]);

        let t15 = coset_partition(2, 15).unwrap();
        assert_eq!(
            t15.cosets,
            vec![
                vec![0],
                vec![1, 2, 4, 8],
                vec![3, 6, 12, 9],
                vec![5, 10],
                vec![7, 14, 13, 11],
            ]
        );

        let t1 = coset_partition(7, 1).unwrap();
        assert_eq!(t1.cosets, vec![vec![0]]);

        assert!(matches!(
            coset_partition(3, 9),
            Err(ExtFieldError::NotCoprime { q: 3, modulus: 9 })
        ));
    }

    #[test]
    fn coset_partition_invariants() {
        for (q, modulus) in [(2u64, 63u64), (2, 255), (3, 26), (5, 31)] {
            let t = coset_partition(q, modulus).unwrap();
            let mut all: Vec<u64> = t.cosets.iter().flatten().copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..modulus).collect::<Vec<_>>(), "partition property");
            // order of q in Z_modulus
            let mut ord = 1u64;
            let mut acc = q % modulus;
            while acc != 1 {
                acc = gf::mul_mod(acc, q, modulus);
                ord += 1;
            }
            for coset in &t.cosets {
                for &s in coset {
                    assert!(coset.contains(&gf::mul_mod(s, q, modulus)), "closure under ·q");
                }
                if coset != &vec![0] {
                    assert_eq!(ord % coset.len() as u64, 0, "coset size divides ord(q)");
                }
            }
        }
    }

    #[test]
    fn representative_selection() {
        let t = coset_partition(2, 7).unwrap();
        assert_eq!(t.select_representatives(3).unwrap(), vec![0, 1, 3]);
        assert_eq!(t.select_representatives(t.cosets.len()).unwrap(), vec![0, 1, 3]);
        assert!(matches!(
            t.select_representatives(4),
            Err(ExtFieldError::NotEnoughCosets { have: 3, need: 4 })
        ));
        // orbit-walk shortcut agrees with the full partition
        for (q, modulus) in [(2u64, 63u64), (2, 255), (3, 26)] {
            let table = coset_partition(q, modulus).unwrap();
            let n = table.representatives.len();
            assert_eq!(canonical_representatives(q, modulus, n).unwrap(), table.representatives);
        }
    }

    #[test]
    fn same_coset_checks() {
        assert!(same_coset(2, 63, 1, 2));
        assert!(same_coset(2, 63, 1, 32));
        assert!(!same_coset(2, 63, 1, 3));
        assert!(same_coset(2, 63, 0, 0));
        assert!(!same_coset(2, 63, 0, 5));
    }
}
