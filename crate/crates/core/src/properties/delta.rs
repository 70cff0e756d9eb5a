//! The quadratic `a(x1) x2² + b(x1) x2 + c(x1)` from the three-point circle
//! system and its discriminant `Δ = b² - 4ac`.

use serde::Serialize;

use super::{PropertyError, Result};
use crate::gf::poly;
use crate::gf::{Elt, FieldCtx};

/// Circles `x² + y² = 1` (even indices) or `x² + y² = D` (odd indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaCase {
    EvenUnit,
    OddD,
}

/// Polynomials over `F_q`, coefficients ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaPoly {
    pub alpha: Elt,
    pub case: DeltaCase,
    /// The circle constant: `1`, or the non-square `D`.
    pub k: Elt,
    pub a: Vec<Elt>,
    pub b: Vec<Elt>,
    pub c: Vec<Elt>,
    pub delta: Vec<Elt>,
}

fn eval(f: &FieldCtx, p: &[Elt], x: &Elt) -> Elt {
    p.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

impl DeltaPoly {
    pub fn a_at(&self, f: &FieldCtx, x: &Elt) -> Elt {
        eval(f, &self.a, x)
    }

    pub fn b_at(&self, f: &FieldCtx, x: &Elt) -> Elt {
        eval(f, &self.b, x)
    }

    pub fn c_at(&self, f: &FieldCtx, x: &Elt) -> Elt {
        eval(f, &self.c, x)
    }

    pub fn delta_at(&self, f: &FieldCtx, x: &Elt) -> Elt {
        eval(f, &self.delta, x)
    }
}

/// Builds `a, b, c, Δ` for circle constant `K` (`1` or `D`):
///
/// ```text
/// a = 2αx - α² - K
/// b = 2αx² + (-3α² - K)x + α³ + Kα
/// c = (-α² - K)x² + (α³ + Kα)x - α⁴/4 - Kα²/2 + 3K²/4
/// ```
pub fn delta_poly(f: &FieldCtx, alpha: &Elt, case: DeltaCase, d: Option<&Elt>) -> Result<DeltaPoly> {
    let k = match case {
        DeltaCase::EvenUnit => f.one(),
        DeltaCase::OddD => *d.ok_or(PropertyError::ExcludedAlpha)?,
    };
    let two = f.from_int(2);
    let half = f.inv(&two)?;
    let quarter = f.inv(&f.from_int(4))?;
    let a1 = *alpha;
    let a2 = f.square(&a1);
    let a3 = f.mul(&a2, &a1);
    let a4 = f.square(&a2);
    let k2 = f.square(&k);
    let two_a = f.mul(&two, &a1);
    let a3_plus_ka = f.add(&a3, &f.mul(&k, &a1));
    let neg_a2_k = f.neg(&f.add(&a2, &k));

    let a = vec![neg_a2_k, two_a];
    let b = vec![
        a3_plus_ka,
        f.neg(&f.add(&f.scale(&a2, 3), &k)),
        two_a,
    ];
    let c0 = f.add(
        &f.neg(&f.add(&f.mul(&a4, &quarter), &f.mul(&f.mul(&k, &a2), &half))),
        &f.mul(&f.scale(&k2, 3), &quarter),
    );
    let c = vec![c0, a3_plus_ka, neg_a2_k];
    let bb = poly::mul(f, &b, &b);
    let ac4: Vec<Elt> = poly::mul(f, &a, &c)
        .iter()
        .map(|x| f.scale(x, 4))
        .collect();
    let delta = poly::trim(f, poly::sub(f, &bb, &ac4));
    Ok(DeltaPoly {
        alpha: *alpha,
        case,
        k,
        a,
        b,
        c,
        delta,
    })
}

/// Evidence that `Δ` is not the square of a polynomial.
///
/// For monic `Δ/(4α²) = x⁴ + A3 x³ + A2 x² + A1 x + A0`, a square root
/// `x² + c1 x + c0` forces `c1 = A3/2`, `c0 = A1/A3` (when `A3 ≠ 0`) and
/// `A2 = (A3/2)² + 2A1/A3`. Any root over the closure therefore already lies
/// in `F_q`, so `A3 ≠ 0` plus a nonzero obstruction is a complete
/// certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaCertificate {
    pub case: DeltaCase,
    pub alpha: Vec<u32>,
    pub monic_coeffs: Vec<Vec<u32>>,
    pub degree: usize,
    pub leading_is_4_alpha2: bool,
    pub a3: Vec<u32>,
    /// `A2 - ((A3/2)² + 2A1/A3)`.
    pub obstruction: Vec<u32>,
    pub a3_nonzero: bool,
    pub obstruction_nonzero: bool,
    /// `A3` equals `(1 - α²)/α` (even) or `(D - α²)/α` (odd).
    pub a3_closed_form: bool,
    /// The obstruction equals `(α² - 1)/α²` (even) or `(Dα² - D²)/α²` (odd).
    pub obstruction_closed_form: bool,
    /// Exhaustive search over monic quadratics, run when `q ≤ 100`.
    pub brute_force_no_root: Option<bool>,
}

impl DeltaCertificate {
    pub fn holds(&self) -> bool {
        self.degree == 4
            && self.leading_is_4_alpha2
            && self.a3_nonzero
            && self.obstruction_nonzero
            && self.a3_closed_form
            && self.obstruction_closed_form
            && self.brute_force_no_root != Some(false)
    }
}

pub fn delta_not_square_certificate(
    f: &FieldCtx,
    alpha: &Elt,
    case: DeltaCase,
    d: Option<&Elt>,
) -> Result<DeltaCertificate> {
    let one = f.one();
    if alpha.is_zero()
        || (case == DeltaCase::EvenUnit && (*alpha == one || *alpha == f.neg(&one)))
    {
        return Err(PropertyError::ExcludedAlpha);
    }
    let dp = delta_poly(f, alpha, case, d)?;
    let a2 = f.square(alpha);
    let lead = f.scale(&a2, 4);
    let degree = dp.delta.len().saturating_sub(1);
    let leading_is_4_alpha2 = dp.delta.last() == Some(&lead);
    let inv_lead = f.inv(&lead)?;
    let monic: Vec<Elt> = dp.delta.iter().map(|c| f.mul(c, &inv_lead)).collect();
    let coeff = |i: usize| monic.get(i).copied().unwrap_or_else(|| f.zero());
    let (ca1, ca2, ca3) = (coeff(1), coeff(2), coeff(3));
    let half = f.inv(&f.from_int(2))?;

    let a3_nonzero = !ca3.is_zero();
    let obstruction = if a3_nonzero {
        let h = f.mul(&ca3, &half);
        let c0 = f.div(&ca1, &ca3)?;
        f.sub(&ca2, &f.add(&f.square(&h), &f.scale(&c0, 2)))
    } else {
        f.zero()
    };

    let k = dp.k;
    let inv_a = f.inv(alpha)?;
    let inv_a2 = f.inv(&a2)?;
    let (a3_expect, obs_expect) = match case {
        DeltaCase::EvenUnit => (
            f.mul(&f.sub(&one, &a2), &inv_a),
            f.mul(&f.sub(&a2, &one), &inv_a2),
        ),
        DeltaCase::OddD => (
            f.mul(&f.sub(&k, &a2), &inv_a),
            f.mul(&f.sub(&f.mul(&k, &a2), &f.square(&k)), &inv_a2),
        ),
    };

    let brute_force_no_root = (f.order() <= 100).then(|| {
        let elems: Vec<Elt> = f.elements().collect();
        !elems.iter().any(|c1| {
            elems.iter().any(|c0| {
                let sq = poly::mul(f, &[*c0, *c1, one], &[*c0, *c1, one]);
                sq == monic
            })
        })
    });

    Ok(DeltaCertificate {
        case,
        alpha: alpha.coeffs().to_vec(),
        monic_coeffs: monic.iter().map(|c| c.coeffs().to_vec()).collect(),
        degree,
        leading_is_4_alpha2,
        a3: ca3.coeffs().to_vec(),
        obstruction: obstruction.coeffs().to_vec(),
        a3_nonzero,
        obstruction_nonzero: !obstruction.is_zero(),
        a3_closed_form: ca3 == a3_expect,
        obstruction_closed_form: obstruction == obs_expect,
        brute_force_no_root,
    })
}
