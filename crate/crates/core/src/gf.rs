//! Arithmetic in a prime field F_q and the integer number theory that the
//! extension-field machinery leans on (primality, factorization).
//!
//! The base field is restricted to prime q in [2, 2^16]; extension fields
//! F_{q^m} are realized elsewhere as companion-matrix powers, so nothing here
//! ever needs a prime-power modulus. All values are canonical residues in
//! [0, q).

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("modulus {0} is not a prime in [2, 65536]")]
    BadModulus(u64),
    #[error("operands belong to different fields (q={0} vs q={1})")]
    FieldMismatch(u32, u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("value {value} is not a canonical residue mod {q}")]
    NotAResidue { value: u64, q: u32 },
}

/// The prime field F_q. Cheap to copy; two fields are the same iff their
/// moduli agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    /// Validates that `q` is prime and within the supported symbol width.
    pub fn new(q: u64) -> Result<Self, GfError> {
        if q < 2 || q > (1 << 16) || !is_prime(q) {
            return Err(GfError::BadModulus(q));
        }
        Ok(PrimeField { q: q as u32 })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.q
    }

    /// Wraps a canonical residue; rejects out-of-range values.
    pub fn elem(&self, value: u64) -> Result<FieldElement, GfError> {
        if value >= self.q as u64 {
            return Err(GfError::NotAResidue { value, q: self.q });
        }
        Ok(FieldElement {
            value: value as u16,
            field: *self,
        })
    }

    /// Reduces an arbitrary integer into the field.
    pub fn reduce(&self, value: u64) -> FieldElement {
        FieldElement {
            value: (value % self.q as u64) as u16,
            field: *self,
        }
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement { value: 0, field: *self }
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        // q >= 2, so 1 is always a residue
        FieldElement { value: 1, field: *self }
    }

    // Raw residue kernels. The dense linear algebra runs on these so it does
    // not pay for a field tag per entry; `FieldElement` wraps them for the
    // scalar API.

    #[inline]
    pub(crate) fn add_raw(&self, a: u16, b: u16) -> u16 {
        let s = a as u32 + b as u32;
        (if s >= self.q { s - self.q } else { s }) as u16
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u16, b: u16) -> u16 {
        let s = a as u32 + self.q - b as u32;
        (if s >= self.q { s - self.q } else { s }) as u16
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u16, b: u16) -> u16 {
        ((a as u64 * b as u64) % self.q as u64) as u16
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u16) -> u16 {
        if a == 0 {
            0
        } else {
            (self.q - a as u32) as u16
        }
    }

    pub(crate) fn inv_raw(&self, a: u16) -> Result<u16, GfError> {
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        // Extended Euclid on (a, q); q prime so gcd is 1.
        let (mut r0, mut r1) = (a as i64, self.q as i64);
        let (mut s0, mut s1) = (1i64, 0i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (s0, s1) = (s1, s0 - quot * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(s0.rem_euclid(self.q as i64) as u16)
    }
}

/// An element of F_q: a canonical residue tagged with its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldElement {
    value: u16,
    field: PrimeField,
}

impl FieldElement {
    #[inline]
    pub fn value(&self) -> u16 {
        self.value
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<(), GfError> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch(self.field.q, other.field.q));
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.same_field(other)?;
        Ok(FieldElement {
            value: self.field.add_raw(self.value, other.value),
            field: self.field,
        })
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.same_field(other)?;
        Ok(FieldElement {
            value: self.field.sub_raw(self.value, other.value),
            field: self.field,
        })
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.same_field(other)?;
        Ok(FieldElement {
            value: self.field.mul_raw(self.value, other.value),
            field: self.field,
        })
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            value: self.field.neg_raw(self.value),
            field: self.field,
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<FieldElement, GfError> {
        Ok(FieldElement {
            value: self.field.inv_raw(self.value)?,
            field: self.field,
        })
    }
}

/// b^e mod m without overflow (m < 2^63).
pub fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc: u64 = 1;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Deterministic Miller–Rabin; the witness set covers every u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Prime factorization with multiplicity, sorted ascending. n = 1 yields the
/// empty multiset. Trial division up to 10^6, then Pollard's rho (Brent).
pub fn factorize(n: u64) -> Vec<u64> {
    let mut factors = Vec::new();
    let mut n = n;
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_BOUND && p * p <= n {
        while n % p == 0 {
            factors.push(p);
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime(m) {
                factors.push(m);
                continue;
            }
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    factors.sort_unstable();
    factors
}

/// Brent-cycle Pollard rho; callers ensure `n` is composite and odd-ish
/// (trial division already stripped the small primes).
fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1..64u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!("pollard rho exhausted increments on composite {n}");
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
