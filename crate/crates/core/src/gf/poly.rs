//! Dense univariate polynomials (ascending coefficients) over a field given by
//! an [`Arith`] implementation. Only what modulus selection and subfield root
//! finding need.

use std::fmt::Debug;

use super::{Elt, FieldCtx};

pub(crate) trait Arith {
    type E: Copy + PartialEq + Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Panics on zero.
    fn inv(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool {
        *a == self.zero()
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub(crate) fn new(p: u32) -> Self {
        Self { p: p as u64 }
    }

    pub(crate) fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut b = a as u64 % self.p;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        acc as u32
    }
}

impl Arith for PrimeField {
    type E = u32;
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.p - *b as u64) % self.p) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        (*a as u64 * *b as u64 % self.p) as u32
    }
    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
}

impl Arith for FieldCtx {
    type E = Elt;
    fn zero(&self) -> Elt {
        FieldCtx::zero(self)
    }
    fn one(&self) -> Elt {
        FieldCtx::one(self)
    }
    fn add(&self, a: &Elt, b: &Elt) -> Elt {
        FieldCtx::add(self, a, b)
    }
    fn sub(&self, a: &Elt, b: &Elt) -> Elt {
        FieldCtx::sub(self, a, b)
    }
    fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        FieldCtx::mul(self, a, b)
    }
    fn inv(&self, a: &Elt) -> Elt {
        FieldCtx::inv(self, a).expect("inverse of zero")
    }
    fn is_zero(&self, a: &Elt) -> bool {
        a.is_zero()
    }
}

pub(crate) fn trim<F: Arith>(f: &F, mut a: Vec<F::E>) -> Vec<F::E> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

/// Degree, with `None` for the zero polynomial.
pub(crate) fn degree<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub(crate) fn sub<F: Arith>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(f, out)
}

pub(crate) fn mul<F: Arith>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem<F: Arith>(f: &F, a: &[F::E], b: &[F::E]) -> (Vec<F::E>, Vec<F::E>) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = f.inv(&b[db]);
    let mut r = trim(f, a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(&r[dr], &lead_inv);
        q[dr - db] = c;
        for (i, bi) in b.iter().enumerate() {
            let k = dr - db + i;
            r[k] = f.sub(&r[k], &f.mul(&c, bi));
        }
        r = trim(f, r);
    }
    (trim(f, q), r)
}

pub(crate) fn rem<F: Arith>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    divrem(f, a, b).1
}

pub(crate) fn monic<F: Arith>(f: &F, a: Vec<F::E>) -> Vec<F::E> {
    match a.last() {
        None => a,
        Some(lead) => {
            let li = f.inv(lead);
            a.iter().map(|c| f.mul(c, &li)).collect()
        }
    }
}

/// Monic gcd.
pub(crate) fn gcd<F: Arith>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let mut a = trim(f, a.to_vec());
    let mut b = trim(f, b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, a)
}

/// `base^e mod m`.
pub(crate) fn powmod<F: Arith>(f: &F, base: &[F::E], mut e: u128, m: &[F::E]) -> Vec<F::E> {
    let mut b = rem(f, base, m);
    let mut acc = rem(f, &[f.one()], m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), m);
        }
        e >>= 1;
        if e > 0 {
            b = rem(f, &mul(f, &b, &b), m);
        }
    }
    acc
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut r = 2;
    while r * r <= n {
        if n % r == 0 {
            out.push(r);
            while n % r == 0 {
                n /= r;
            }
        }
        r += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic `m` over `F_p`.
pub(crate) fn is_irreducible(p: u32, m: &[u32]) -> bool {
    let f = PrimeField::new(p);
    let m = trim(&f, m.to_vec());
    let Some(n) = degree(&m) else {
        return false;
    };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    // frob[k] = X^(p^k) mod m
    let mut frob = vec![rem(&f, &x, &m)];
    for k in 1..=n {
        let next = powmod(&f, &frob[k - 1], p as u128, &m);
        frob.push(next);
    }
    if !sub(&f, &frob[n], &x).is_empty() {
        return false;
    }
    prime_divisors(n).into_iter().all(|r| {
        let h = sub(&f, &frob[n / r], &x);
        gcd(&f, &h, &m).len() == 1
    })
}

/// The lexicographically smallest monic irreducible of degree `d` over `F_p`,
/// comparing the ascending coefficient list `(c_0, c_1, ..., c_{d-1})`
/// entry by entry.
pub(crate) fn smallest_irreducible(p: u32, d: usize) -> Vec<u32> {
    let mut tail = vec![0u32; d];
    if d >= 2 {
        // X divides anything with c_0 = 0
        tail[0] = 1;
    }
    loop {
        let mut cand = tail.clone();
        cand.push(1);
        if is_irreducible(p, &cand) {
            return cand;
        }
        // odometer with c_{d-1} fastest
        let mut i = d;
        loop {
            assert!(i > 0, "no irreducible polynomial of degree {d} over F_{p}");
            i -= 1;
            tail[i] += 1;
            if tail[i] < p {
                break;
            }
            tail[i] = 0;
        }
    }
}

/// All roots in `ctx` of a polynomial with coefficients in `ctx`, sorted by
/// element index. Equal-degree splitting with a deterministic sequence of
/// shifts.
pub(crate) fn roots_in(ctx: &FieldCtx, f: &[Elt]) -> Vec<Elt> {
    let f = monic(ctx, trim(ctx, f.to_vec()));
    if degree(&f).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let q = ctx.order();
    let x = vec![ctx.zero(), ctx.one()];
    // restrict to the product of the distinct linear factors
    let xq = powmod(ctx, &x, q, &f);
    let split = gcd(ctx, &f, &sub(ctx, &xq, &x));
    let mut out = Vec::new();
    split_linear(ctx, split, &mut out);
    out.sort_by_key(|e| ctx.index(e));
    out
}

fn split_linear(ctx: &FieldCtx, f: Vec<Elt>, out: &mut Vec<Elt>) {
    match degree(&f) {
        None | Some(0) => {}
        Some(1) => out.push(ctx.neg(&ctx.div(&f[0], &f[1]).expect("nonzero lead"))),
        Some(_) => {
            let e = (ctx.order() - 1) / 2;
            for shift in 0u64.. {
                let lin = vec![ctx.element(shift), ctx.one()];
                let h = sub(ctx, &powmod(ctx, &lin, e, &f), &[ctx.one()]);
                let g = gcd(ctx, &f, &h);
                let dg = degree(&g).unwrap_or(0);
                if dg > 0 && dg < f.len() - 1 {
                    let (cofactor, _) = divrem(ctx, &f, &g);
                    split_linear(ctx, g, out);
                    split_linear(ctx, monic(ctx, cofactor), out);
                    return;
                }
            }
        }
    }
}
