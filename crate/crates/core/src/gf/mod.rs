//! Odd-characteristic finite fields `F_{p^d}` realized as flat extensions of
//! the prime field, plus the three-level towers `F_{q0} ⊂ F_q ⊂ F_{q^2}` the
//! code constructions live in.
//!
//! Elements are fixed-width coefficient vectors over `F_p` tagged with the id
//! of the context that created them. All arithmetic goes through a
//! [`FieldCtx`], which is immutable once built and can be shared between
//! threads.

mod factor;
pub(crate) mod linalg;
pub(crate) mod poly;
mod subgroup;
mod tower;

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use subgroup::SubgroupEnum;
pub use tower::{Embedding, Tower};

/// Largest supported extension degree over the prime field.
pub const MAX_DEGREE: usize = 24;

/// Characteristic bound. Products of two residues must fit comfortably in
/// `u64` accumulators together with the reduction terms.
pub const MAX_CHARACTERISTIC: u32 = 1 << 16;

/// Fields up to this many elements get a precomputed square-indicator bitset.
pub const DEFAULT_SQUARE_TABLE_LIMIT: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("characteristic {0} is not an odd prime below {MAX_CHARACTERISTIC}")]
    BadCharacteristic(u64),
    #[error("extension degree {0} outside 1..={MAX_DEGREE}")]
    BadDegree(u32),
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    BadModulus(u32),
    #[error("{0} is not a power of an odd prime")]
    NotPrimePower(u64),
    #[error("field order overflows 128 bits")]
    OrderOverflow,
    #[error("extension degree s = {0} must be odd and positive")]
    EvenExtension(u32),
    #[error("element belongs to a different field context")]
    ContextMismatch,
    #[error("coefficient vector has length {got}, expected {expected}")]
    BadLength { got: usize, expected: usize },
    #[error("{order} does not divide the group order {group}")]
    OrderNotDivisor { order: u128, group: u128 },
    #[error("2^{ell} does not divide the group order {group}")]
    NoRootOfUnity { ell: u32, group: u128 },
    #[error("element is not in the subfield")]
    NotInSubfield,
    #[error("division by zero")]
    DivisionByZero,
    #[error("factorization of {0} is out of range")]
    Factorization(u128),
}

/// Builds `F_{q0} ⊂ F_q ⊂ F_{q^2}` for `q = q0^s`.
pub fn make_tower(q0_spec: FieldSpec, s: u32) -> Result<Tower> {
    Tower::new(q0_spec, s)
}

pub type Result<T, E = GfError> = std::result::Result<T, E>;

/// Description of `F_{p^d}`: characteristic, degree and a monic irreducible
/// modulus stored with ascending coefficients (`d + 1` entries).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub d: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// Uses the smallest monic irreducible of degree `d` over `F_p`
    /// (see [`poly::smallest_irreducible`] for the ordering).
    pub fn new(p: u32, d: u32) -> Result<Self> {
        check_characteristic(p as u64)?;
        if d == 0 || d as usize > MAX_DEGREE {
            return Err(GfError::BadDegree(d));
        }
        let modulus = poly::smallest_irreducible(p, d as usize);
        Ok(Self { p, d, modulus })
    }

    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        let spec = Self {
            p,
            d: modulus.len().saturating_sub(1) as u32,
            modulus,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Prime-power constructor: `F_q` for `q = p^d` with the default modulus.
    pub fn for_order(q: u64) -> Result<Self> {
        let (p, d) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        if p == 2 {
            return Err(GfError::BadCharacteristic(2));
        }
        if p >= MAX_CHARACTERISTIC as u64 {
            return Err(GfError::BadCharacteristic(p));
        }
        Self::new(p as u32, d)
    }

    pub fn validate(&self) -> Result<()> {
        check_characteristic(self.p as u64)?;
        if self.d == 0 || self.d as usize > MAX_DEGREE {
            return Err(GfError::BadDegree(self.d));
        }
        let f = &self.modulus;
        if f.len() != self.d as usize + 1
            || f.last() != Some(&1)
            || f.iter().any(|&c| c >= self.p)
            || !poly::is_irreducible(self.p, f)
        {
            return Err(GfError::BadModulus(self.d));
        }
        self.order_checked().map(|_| ())
    }

    pub fn order(&self) -> u128 {
        self.order_checked().expect("validated spec")
    }

    fn order_checked(&self) -> Result<u128> {
        (self.p as u128)
            .checked_pow(self.d)
            .ok_or(GfError::OrderOverflow)
    }
}

fn check_characteristic(p: u64) -> Result<()> {
    if p < 3 || p % 2 == 0 || p >= MAX_CHARACTERISTIC as u64 || !num_prime::nt_funcs::is_prime64(p)
    {
        return Err(GfError::BadCharacteristic(p));
    }
    Ok(())
}

/// Returns `(p, d)` with `q = p^d`, `p` prime, or `None`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = num_prime::nt_funcs::factorize64(q);
    if f.len() != 1 {
        return None;
    }
    let (&p, &e) = f.iter().next()?;
    Some((p, e as u32))
}

/// An element of some [`FieldCtx`]: `d` residues mod `p`, ascending powers of
/// the generating root of the modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Elt {
    ctx: u32,
    deg: u8,
    c: [u32; MAX_DEGREE],
}

impl Elt {
    pub fn coeffs(&self) -> &[u32] {
        &self.c[..self.deg as usize]
    }

    pub fn ctx_id(&self) -> u32 {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elt{:?}", self.coeffs())
    }
}

static NEXT_CTX_ID: AtomicU32 = AtomicU32::new(1);

/// Arithmetic context for one field `F_{p^d}`.
pub struct FieldCtx {
    id: u32,
    spec: FieldSpec,
    p: u32,
    d: usize,
    order: u128,
    /// `p^i` for mixed-radix element indices (only meaningful when the order
    /// fits in 64 bits).
    radix: [u64; MAX_DEGREE],
    /// Prime factors of `order - 1`.
    group_factors: Vec<u128>,
    generator: Elt,
    square_limit: u64,
    squares: OnceLock<Option<Vec<u64>>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("d", &self.d)
            .field("modulus", &self.spec.modulus)
            .finish()
    }
}

impl FieldCtx {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        Self::with_square_limit(spec, DEFAULT_SQUARE_TABLE_LIMIT)
    }

    /// Like [`FieldCtx::new`] but with an explicit size cap for the
    /// square-indicator table; above the cap `eta` falls back to Euler's
    /// criterion.
    pub fn with_square_limit(spec: FieldSpec, square_limit: u64) -> Result<Self> {
        spec.validate()?;
        let order = spec.order();
        let group_factors = factor::prime_factors_of_pow_minus_one(spec.p as u64, spec.d)?;
        let mut radix = [0u64; MAX_DEGREE];
        let mut r: u64 = 1;
        for slot in radix.iter_mut().take(spec.d as usize) {
            *slot = r;
            r = r.wrapping_mul(spec.p as u64);
        }
        let mut ctx = Self {
            id: NEXT_CTX_ID.fetch_add(1, Ordering::Relaxed),
            p: spec.p,
            d: spec.d as usize,
            order,
            radix,
            group_factors,
            generator: Elt {
                ctx: 0,
                deg: 0,
                c: [0; MAX_DEGREE],
            },
            square_limit,
            squares: OnceLock::new(),
            spec,
        };
        ctx.generator = ctx.find_generator();
        Ok(ctx)
    }

    pub fn for_order(q: u64) -> Result<Self> {
        Self::new(FieldSpec::for_order(q)?)
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Number of elements.
    pub fn order(&self) -> u128 {
        self.order
    }

    /// Primitive element: multiplicative order `order - 1`.
    pub fn generator(&self) -> Elt {
        self.generator
    }

    pub fn group_order_factors(&self) -> &[u128] {
        &self.group_factors
    }

    fn raw(&self) -> Elt {
        Elt {
            ctx: self.id,
            deg: self.d as u8,
            c: [0; MAX_DEGREE],
        }
    }

    pub fn zero(&self) -> Elt {
        self.raw()
    }

    pub fn one(&self) -> Elt {
        self.from_int(1)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, v: i64) -> Elt {
        let mut e = self.raw();
        e.c[0] = v.rem_euclid(self.p as i64) as u32;
        e
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elt> {
        if coeffs.len() != self.d {
            return Err(GfError::BadLength {
                got: coeffs.len(),
                expected: self.d,
            });
        }
        let mut e = self.raw();
        for (slot, &c) in e.c.iter_mut().zip(coeffs) {
            *slot = c % self.p;
        }
        Ok(e)
    }

    /// The class of `X` modulo the defining polynomial.
    pub fn root(&self) -> Elt {
        let mut e = self.raw();
        if self.d == 1 {
            e.c[0] = (self.p - self.spec.modulus[0]) % self.p;
        } else {
            e.c[1] = 1;
        }
        e
    }

    pub fn contains(&self, x: &Elt) -> bool {
        x.ctx == self.id
    }

    pub fn check(&self, x: &Elt) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(GfError::ContextMismatch)
        }
    }

    /// Mixed-radix index `sum c_i p^i`; a bijection onto `0..order`.
    #[inline]
    pub fn index(&self, x: &Elt) -> u64 {
        debug_assert!(self.order <= u64::MAX as u128);
        let mut idx = 0u64;
        for i in 0..self.d {
            idx += x.c[i] as u64 * self.radix[i];
        }
        idx
    }

    pub fn element(&self, mut idx: u64) -> Elt {
        let mut e = self.raw();
        for i in 0..self.d {
            e.c[i] = (idx % self.p as u64) as u32;
            idx /= self.p as u64;
        }
        e
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Elt> + '_ {
        assert!(self.order <= u64::MAX as u128, "field too large to enumerate");
        (0..self.order as u64).map(move |i| self.element(i))
    }

    #[inline]
    pub fn add(&self, a: &Elt, b: &Elt) -> Elt {
        debug_assert!(a.ctx == self.id && b.ctx == self.id);
        let mut e = self.raw();
        for i in 0..self.d {
            let s = a.c[i] + b.c[i];
            e.c[i] = if s >= self.p { s - self.p } else { s };
        }
        e
    }

    #[inline]
    pub fn sub(&self, a: &Elt, b: &Elt) -> Elt {
        debug_assert!(a.ctx == self.id && b.ctx == self.id);
        let mut e = self.raw();
        for i in 0..self.d {
            e.c[i] = if a.c[i] >= b.c[i] {
                a.c[i] - b.c[i]
            } else {
                a.c[i] + self.p - b.c[i]
            };
        }
        e
    }

    #[inline]
    pub fn neg(&self, a: &Elt) -> Elt {
        self.sub(&self.zero(), a)
    }

    /// Multiplication by a prime-field scalar.
    pub fn scale(&self, a: &Elt, k: i64) -> Elt {
        let k = k.rem_euclid(self.p as i64) as u64;
        let mut e = self.raw();
        for i in 0..self.d {
            e.c[i] = ((a.c[i] as u64 * k) % self.p as u64) as u32;
        }
        e
    }

    #[inline]
    pub fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        debug_assert!(a.ctx == self.id && b.ctx == self.id);
        let d = self.d;
        let p = self.p as u64;
        let m = &self.spec.modulus;
        let mut acc = [0u64; 2 * MAX_DEGREE];
        for i in 0..d {
            let ai = a.c[i] as u64;
            if ai == 0 {
                continue;
            }
            for j in 0..d {
                acc[i + j] += ai * b.c[j] as u64;
            }
        }
        // X^d = -(m_0 + m_1 X + ... + m_{d-1} X^{d-1})
        for k in (d..2 * d - 1).rev() {
            let t = acc[k] % p;
            if t != 0 {
                let nt = p - t;
                for i in 0..d {
                    acc[k - d + i] += nt * m[i] as u64;
                }
            }
        }
        let mut e = self.raw();
        for i in 0..d {
            e.c[i] = (acc[i] % p) as u32;
        }
        e
    }

    #[inline]
    pub fn square(&self, a: &Elt) -> Elt {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &Elt, mut e: u128) -> Elt {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    pub fn inv(&self, a: &Elt) -> Result<Elt> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.pow(a, self.order - 2))
    }

    pub fn div(&self, a: &Elt, b: &Elt) -> Result<Elt> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: &Elt) -> Result<u128> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let mut n = self.order - 1;
        for &r in &self.group_factors {
            while n % r == 0 && self.pow(a, n / r) == self.one() {
                n /= r;
            }
        }
        Ok(n)
    }

    fn find_generator(&self) -> Elt {
        let group = self.order - 1;
        let one = self.one();
        let mut idx: u64 = 1;
        loop {
            let cand = self.element(idx);
            if !cand.is_zero()
                && self
                    .group_factors
                    .iter()
                    .all(|&r| self.pow(&cand, group / r) != one)
            {
                return cand;
            }
            idx += 1;
        }
    }

    /// Quadratic character: `0` at zero, `1` on nonzero squares, `-1` otherwise.
    pub fn eta(&self, x: &Elt) -> Result<i8> {
        self.check(x)?;
        Ok(self.eta_fast(x))
    }

    /// `eta` without the context check; uses the square table when present.
    #[inline]
    pub fn eta_fast(&self, x: &Elt) -> i8 {
        if x.is_zero() {
            return 0;
        }
        match self.square_table() {
            Some(bits) => {
                let i = self.index(x);
                if bits[(i >> 6) as usize] >> (i & 63) & 1 == 1 {
                    1
                } else {
                    -1
                }
            }
            None => self.eta_euler(x),
        }
    }

    /// Euler's criterion `x^((q-1)/2)`, never touching the square table.
    pub fn eta_euler(&self, x: &Elt) -> i8 {
        if x.is_zero() {
            return 0;
        }
        if self.pow(x, (self.order - 1) / 2) == self.one() {
            1
        } else {
            -1
        }
    }

    fn square_table(&self) -> Option<&Vec<u64>> {
        self.squares
            .get_or_init(|| {
                if self.order > self.square_limit as u128 {
                    return None;
                }
                let n = self.order as usize;
                let mut bits = vec![0u64; n.div_ceil(64)];
                let g2 = self.square(&self.generator);
                let mut x = self.one();
                for _ in 0..(n - 1) / 2 {
                    let i = self.index(&x);
                    bits[(i >> 6) as usize] |= 1 << (i & 63);
                    x = self.mul(&x, &g2);
                }
                Some(bits)
            })
            .as_ref()
    }

    /// Whether the square-indicator table is (or would be) used.
    pub fn has_square_table(&self) -> bool {
        self.square_table().is_some()
    }

    /// Deterministic non-square: the first odd power of the generator,
    /// i.e. the generator itself.
    pub fn nonsquare_rep(&self) -> Elt {
        self.generator
    }

    /// Some square root, or `None` for non-squares.
    pub fn sqrt(&self, a: &Elt) -> Option<Elt> {
        if a.is_zero() {
            return Some(*a);
        }
        if self.eta_fast(a) != 1 {
            return None;
        }
        let q = self.order;
        if q % 4 == 3 {
            return Some(self.pow(a, (q + 1) / 4));
        }
        // Tonelli-Shanks
        let mut t_exp = q - 1;
        let mut s2 = 0u32;
        while t_exp % 2 == 0 {
            t_exp /= 2;
            s2 += 1;
        }
        let z = self.nonsquare_rep();
        let mut m = s2;
        let mut c = self.pow(&z, t_exp);
        let mut t = self.pow(a, t_exp);
        let mut r = self.pow(a, t_exp.div_ceil(2));
        let one = self.one();
        while t != one {
            let mut i = 0;
            let mut tt = t;
            while tt != one {
                tt = self.square(&tt);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.square(&b);
            }
            m = i;
            c = self.square(&b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }

    /// An element of multiplicative order exactly `2^ell`.
    pub fn primitive_2l_root(&self, ell: u32) -> Result<Elt> {
        let group = self.order - 1;
        if ell >= 127 || group % (1u128 << ell) != 0 {
            return Err(GfError::NoRootOfUnity { ell, group });
        }
        Ok(self.pow(&self.generator, group >> ell))
    }

    /// The cyclic subgroup of `F^*` with the given order, enumerated as
    /// successive powers of `g^((order(F)-1)/order)`.
    pub fn subgroup(&self, order: u128) -> Result<SubgroupEnum<'_>> {
        let group = self.order - 1;
        if order == 0 || group % order != 0 {
            return Err(GfError::OrderNotDivisor { order, group });
        }
        let step = self.pow(&self.generator, group / order);
        Ok(SubgroupEnum::new(self, order, step))
    }
}

#[cfg(test)]
mod tests;
