//! Point counts on the fiber product `y_i² = u² - t_i` over `F_q`, its genus
//! and the Hasse–Weil interval, and the threshold `s*`.
//!
//! With `t_i` the nonzero squares of `F_{q0}` this is the curve whose
//! `F_q`-points encode even-index NPi witnesses. Passing the non-squares
//! gives the odd-index analogue.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gf::{GfError, Tower};
use crate::properties::{targets, Parity};

/// Largest `q` scanned by `count_n`.
pub const COUNT_MAX_Q: u128 = 1 << 24;
/// Largest `q` for the square-root based `count_points_direct`.
pub const DIRECT_MAX_Q: u128 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("q = {q} exceeds the counting cap {cap}")]
    TooLarge { q: u128, cap: u128 },
    #[error("q0 = {0} must be odd and at least 3")]
    BadQ0(u64),
    #[error("no odd s ≤ {0} satisfies the threshold inequality")]
    NoThreshold(u32),
}

pub type Result<T, E = CurveError> = std::result::Result<T, E>;

fn decimal<S: Serializer, T: std::fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveCount {
    pub q0: u64,
    pub s: u32,
    pub m: u64,
    pub parity: Parity,
    /// `#{u ∈ F_q : every u² - t_i is a nonzero square}`.
    pub n_s: u64,
    /// The same count over `u ≠ 0`; differs from `n_s` only for the
    /// non-square branch set, where `u = 0` always qualifies.
    pub n_s_nonzero: u64,
    #[serde(serialize_with = "decimal")]
    pub n_chi: BigUint,
    #[serde(serialize_with = "decimal")]
    pub genus: BigUint,
    /// `q + 1 ∓ ⌊2g√q⌋`.
    #[serde(serialize_with = "decimal")]
    pub hw_low: BigInt,
    #[serde(serialize_with = "decimal")]
    pub hw_high: BigInt,
    pub hasse_weil: bool,
}

/// `1 + 2^(m-1)(m-2)`.
pub fn genus(m: u64) -> BigUint {
    if m < 2 {
        // m = 1 gives 1 + (1)(-1) = 0
        return BigUint::zero();
    }
    BigUint::one() + (BigUint::one() << (m - 1)) * BigUint::from(m - 2)
}

/// `(N - q - 1)² ≤ 4 g² q`.
pub fn hasse_weil(n: &BigUint, q: &BigUint, g: &BigUint) -> bool {
    let dev: BigInt = BigInt::from(n.clone()) - BigInt::from(q.clone()) - 1;
    let dev2 = dev.abs().to_biguint().expect("nonnegative").pow(2);
    dev2 <= BigUint::from(4u8) * g * g * q
}

fn hw_interval(q: &BigUint, g: &BigUint) -> (BigInt, BigInt) {
    let r = BigInt::from((BigUint::from(4u8) * g * g * q).sqrt());
    let centre: BigInt = BigInt::from(q.clone()) + 1;
    (&centre - &r, centre + r)
}

/// Exact `N_s` by scanning `F_q`, and `N_χ = 2^m (1 + N_s)`.
pub fn count_n(tower: &Tower, parity: Parity) -> Result<CurveCount> {
    let f = tower.fq();
    let q = f.order();
    if q > COUNT_MAX_Q {
        return Err(CurveError::TooLarge { q, cap: COUNT_MAX_Q });
    }
    let t = targets(tower, parity);
    let m = t.len() as u64;
    let mut n_s = 0u64;
    let mut at_zero = false;
    for u in f.elements() {
        let u2 = f.square(&u);
        if t.iter().all(|a| f.eta_fast(&f.sub(&u2, a)) == 1) {
            n_s += 1;
            at_zero |= u.is_zero();
        }
    }
    let qb = BigUint::from(q);
    let g = genus(m);
    let n_chi = (BigUint::one() << m) * (BigUint::one() + n_s);
    let (hw_low, hw_high) = hw_interval(&qb, &g);
    Ok(CurveCount {
        q0: tower.q0() as u64,
        s: tower.s(),
        m,
        parity,
        n_s,
        n_s_nonzero: n_s - at_zero as u64,
        hasse_weil: hasse_weil(&n_chi, &qb, &g),
        n_chi,
        genus: g,
        hw_low,
        hw_high,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectCount {
    /// Affine points `(u, y_1, ..., y_m)`.
    #[serde(serialize_with = "decimal")]
    pub affine: BigUint,
    /// Points over `u = ∞`: `2^m`.
    #[serde(serialize_with = "decimal")]
    pub at_infinity: BigUint,
    #[serde(serialize_with = "decimal")]
    pub total: BigUint,
    /// Points over `u = 0`.
    #[serde(serialize_with = "decimal")]
    pub over_zero: BigUint,
    /// Points over `u` with `u² = t_i` for some `i`.
    #[serde(serialize_with = "decimal")]
    pub over_branch: BigUint,
    /// Every other fibre has `0` or `2^m` points.
    pub fibres_all_or_nothing: bool,
}

/// Counts affine points by computing each `#{y : y² = v}` from an explicit
/// square root, independently of the character tables.
pub fn count_points_direct(tower: &Tower, parity: Parity) -> Result<DirectCount> {
    let f = tower.fq();
    let q = f.order();
    if q > DIRECT_MAX_Q {
        return Err(CurveError::TooLarge { q, cap: DIRECT_MAX_Q });
    }
    let t = targets(tower, parity);
    let m = t.len() as u64;
    let full = BigUint::one() << m;
    let mut affine = BigUint::zero();
    let mut over_zero = BigUint::zero();
    let mut over_branch = BigUint::zero();
    let mut all_or_nothing = true;
    for u in f.elements() {
        let u2 = f.square(&u);
        let mut fibre = BigUint::one();
        let mut branch = false;
        for a in &t {
            let v = f.sub(&u2, a);
            let roots: u32 = match f.sqrt(&v) {
                None => 0,
                Some(y) => {
                    assert_eq!(f.square(&y), v, "square root check");
                    if y.is_zero() {
                        branch = true;
                        1
                    } else {
                        2
                    }
                }
            };
            fibre *= roots;
        }
        if u.is_zero() {
            over_zero = fibre.clone();
        }
        if branch {
            over_branch += &fibre;
        } else if !fibre.is_zero() && fibre != full {
            all_or_nothing = false;
        }
        affine += fibre;
    }
    Ok(DirectCount {
        total: &affine + &full,
        affine,
        at_infinity: full,
        over_zero,
        over_branch,
        fibres_all_or_nothing: all_or_nothing,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SStarResult {
    pub q0: u64,
    pub m: u64,
    #[serde(serialize_with = "decimal")]
    pub genus: BigUint,
    pub s_star: u32,
}

/// `q0^s + 1 - 2g q0^(s/2) > 2^m`, decided as
/// `L = q0^s + 1 - 2^m > 0` and `L² > 4 g² q0^s`.
pub fn threshold_holds(q0: u64, s: u32) -> bool {
    let m = (q0 - 1) / 2;
    let g = genus(m);
    let q = BigUint::from(q0).pow(s);
    let lhs: BigInt = BigInt::from(q.clone()) + 1 - BigInt::from(BigUint::one() << m);
    match lhs.to_biguint() {
        Some(l) if !l.is_zero() => l.pow(2) > BigUint::from(4u8) * &g * &g * q,
        _ => false,
    }
}

pub const S_STAR_SEARCH_CAP: u32 = 10_001;

/// Smallest odd `s` satisfying the threshold inequality.
pub fn s_star(q0: u64) -> Result<SStarResult> {
    if q0 < 3 || q0 % 2 == 0 {
        return Err(CurveError::BadQ0(q0));
    }
    let m = (q0 - 1) / 2;
    let s = (1..=S_STAR_SEARCH_CAP)
        .step_by(2)
        .find(|&s| threshold_holds(q0, s))
        .ok_or(CurveError::NoThreshold(S_STAR_SEARCH_CAP))?;
    Ok(SStarResult {
        q0,
        m,
        genus: genus(m),
        s_star: s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;

    fn tower(q0: u64, s: u32) -> Tower {
        Tower::new(FieldSpec::for_order(q0).unwrap(), s).unwrap()
    }

    #[test]
    fn s_star_values() {
        for (q0, want) in [(7, 3), (23, 7), (31, 9), (47, 11)] {
            let r = s_star(q0).unwrap();
            assert_eq!(r.s_star, want, "q0 = {q0}");
            assert!(!threshold_holds(q0, want - 2));
        }
        assert!(s_star(8).is_err());
    }

    #[test]
    fn genus_values() {
        assert_eq!(genus(3), BigUint::from(5u8));
        assert_eq!(genus(11), BigUint::from(1 + 1024 * 9u32));
        assert_eq!(genus(2), BigUint::one());
    }

    #[test]
    fn counts_agree() {
        for (q0, s) in [(7, 1), (7, 3), (23, 1), (31, 1)] {
            let t = tower(q0, s);
            for parity in [Parity::Even, Parity::Odd] {
                let c = count_n(&t, parity).unwrap();
                let d = count_points_direct(&t, parity).unwrap();
                assert_eq!(c.n_chi, d.total, "({q0},{s}) {parity:?}");
                assert!(c.hasse_weil);
                assert!(d.over_branch.is_zero());
                assert!(d.fibres_all_or_nothing);
                if parity == Parity::Even {
                    assert!(d.over_zero.is_zero());
                    assert_eq!(c.n_s, c.n_s_nonzero);
                } else {
                    assert_eq!(c.n_s, c.n_s_nonzero + 1);
                }
                let low = BigInt::from(c.n_chi.clone());
                assert!(c.hw_low <= low && low <= c.hw_high);
            }
        }
    }

    #[test]
    fn examples() {
        assert_eq!(count_n(&tower(7, 1), Parity::Even).unwrap().n_s, 0);
        let c = count_n(&tower(7, 3), Parity::Even).unwrap();
        let odd = count_n(&tower(7, 3), Parity::Odd).unwrap();
        assert!(c.n_s > 0 || odd.n_s_nonzero > 0);
        assert_eq!(c.n_chi, BigUint::from(8u8) * (1 + c.n_s));
    }

    #[test]
    fn beyond_threshold_has_points() {
        // s* (7) = 3, so s = 3 and s = 5 must both have N_s > 0
        for s in [3, 5] {
            let c = count_n(&tower(7, s), Parity::Even).unwrap();
            assert!(c.n_s > 0, "s = {s}");
        }
    }

    #[test]
    fn hasse_weil_exact() {
        let q = BigUint::from(100u8);
        let g = BigUint::from(2u8);
        // 2g√q = 40
        assert!(hasse_weil(&BigUint::from(141u8), &q, &g));
        assert!(!hasse_weil(&BigUint::from(142u8), &q, &g));
        assert!(hasse_weil(&BigUint::from(61u8), &q, &g));
        assert!(!hasse_weil(&BigUint::from(60u8), &q, &g));
    }
}
