//! 2-adic classification of odd field sizes.
//!
//! Every odd `q` lies either in `S` (`q ≢ 7 mod 8`) or in exactly one `S_ℓ`,
//! `ℓ ≥ 3`, meaning `q ≡ 2^ℓ - 1 (mod 2^(ℓ+1))`. Here `ℓ` is the number of
//! trailing one bits of `q`, i.e. the position of its lowest zero bit.
//!
//! Functions are generic over the integer type so the same code runs on
//! machine words and on `BigUint` (`q0^s` overflows 64 bits quickly).

use std::fmt::Display;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("{0} is even")]
    Even(String),
    #[error("{0} is below 3")]
    TooSmall(String),
    #[error("ell = {0} is below 2")]
    SmallEll(u32),
    #[error("exponent s must be positive")]
    ZeroExponent,
}

/// Integer types the classification works over.
pub trait TwoAdicInt: Integer + Clone + From<u8> + Display {}

impl<T: Integer + Clone + From<u8> + Display> TwoAdicInt for T {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoAdicClass<T> {
    pub q: T,
    /// Present iff `q ≡ 7 (mod 8)`.
    pub ell: Option<u32>,
    pub in_s: bool,
}

impl<T> TwoAdicClass<T> {
    pub fn ell(&self) -> Option<u32> {
        self.ell
    }
}

fn two<T: TwoAdicInt>() -> T {
    T::from(2u8)
}

fn pow2<T: TwoAdicInt>(k: u32) -> T {
    let mut x = T::one();
    for _ in 0..k {
        x = x * two();
    }
    x
}

/// Number of trailing one bits.
fn trailing_ones<T: TwoAdicInt>(q: &T) -> u32 {
    let mut n = q.clone() + T::one();
    let mut count = 0;
    while !n.is_zero() && n.is_even() {
        n = n / two();
        count += 1;
    }
    count
}

pub fn classify<T: TwoAdicInt>(q: &T) -> Result<TwoAdicClass<T>, CongruenceError> {
    if q.is_even() {
        return Err(CongruenceError::Even(q.to_string()));
    }
    if *q < T::from(3u8) {
        return Err(CongruenceError::TooSmall(q.to_string()));
    }
    let ones = trailing_ones(q);
    let in_s = ones < 3;
    Ok(TwoAdicClass {
        q: q.clone(),
        ell: (!in_s).then_some(ones),
        in_s,
    })
}

/// `a^e mod m` by square-and-multiply.
pub fn pow_mod<T: TwoAdicInt>(a: &T, mut e: u64, m: &T) -> T {
    let mut base = a.mod_floor(m);
    let mut acc = T::one().mod_floor(m);
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc * base.clone()).mod_floor(m);
        }
        e >>= 1;
        if e > 0 {
            base = (base.clone() * base).mod_floor(m);
        }
    }
    acc
}

/// Evaluates `A^s ≡ 2^ℓ - 1` modulo `2^ℓ` and modulo `2^(ℓ+1)`.
pub fn power_residue_check<T: TwoAdicInt>(
    a: &T,
    s: u64,
    ell: u32,
) -> Result<(bool, bool), CongruenceError> {
    if a.is_even() {
        return Err(CongruenceError::Even(a.to_string()));
    }
    if ell < 2 {
        return Err(CongruenceError::SmallEll(ell));
    }
    if s == 0 {
        return Err(CongruenceError::ZeroExponent);
    }
    let m_lo: T = pow2(ell);
    let m_hi: T = pow2(ell + 1);
    let target = m_lo.clone() - T::one();
    let lo = pow_mod(a, s, &m_lo) == target.clone().mod_floor(&m_lo);
    let hi = pow_mod(a, s, &m_hi) == target;
    Ok((lo, hi))
}
