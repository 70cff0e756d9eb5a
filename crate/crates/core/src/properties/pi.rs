//! Direct search for Property Pi: for every `α ∈ F_q^*`, three points on the
//! circle `x² + y² = K` with `x1 + x2 + x3 = α` and `y1 + y2 + y3 = 0`.

use serde::Serialize;

use super::delta::{delta_poly, DeltaCase, DeltaPoly};
use super::{require_ell, Parity, PropertyError, Result};
use crate::gf::{Elt, FieldCtx, Tower};

pub const PI_SEARCH_MAX_Q: u128 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PiMethod {
    /// `α = ±1`: `(1, ±1, -1, 0, 0, 0)`.
    Explicit,
    /// `x1` with `K - x1²` a nonzero square, `a(x1) ≠ 0`, `Δ(x1)` a nonzero
    /// square; the rest reconstructed.
    Reduction,
    /// Search over pairs of circle points.
    Pairs,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sextuple {
    pub alpha: Vec<u32>,
    pub x: [Vec<u32>; 3],
    pub y: [Vec<u32>; 3],
    pub method: PiMethod,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiParityReport {
    pub parity: Parity,
    /// The circle constant `K`.
    pub k: Vec<u32>,
    pub alphas: u64,
    pub explicit: u64,
    pub reduction: u64,
    pub pairs: u64,
    /// α for which no solution was found.
    pub unsolved: Vec<Vec<u32>>,
    pub solutions: Vec<Sextuple>,
}

impl PiParityReport {
    pub fn holds(&self) -> bool {
        self.unsolved.is_empty() && self.solutions.len() as u64 == self.alphas
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiReport {
    pub q: u64,
    pub ell: u32,
    pub even: PiParityReport,
    pub odd: PiParityReport,
}

impl PiReport {
    pub fn holds(&self) -> bool {
        self.even.holds() && self.odd.holds()
    }
}

type Six = ([Elt; 3], [Elt; 3]);

/// Exact check of the five defining equations.
pub fn check_sextuple(f: &FieldCtx, alpha: &Elt, k: &Elt, (x, y): &Six) -> bool {
    let on_circle = (0..3).all(|i| f.add(&f.square(&x[i]), &f.square(&y[i])) == *k);
    let sx = f.add(&f.add(&x[0], &x[1]), &x[2]);
    let sy = f.add(&f.add(&y[0], &y[1]), &y[2]);
    on_circle && sx == *alpha && sy.is_zero()
}

fn by_reduction(f: &FieldCtx, dp: &DeltaPoly, half: &Elt) -> Option<Six> {
    let alpha = dp.alpha;
    let k = dp.k;
    // (α² + K)/2
    let mid = f.mul(&f.add(&f.square(&alpha), &k), half);
    for x1 in f.elements() {
        let r = f.sub(&k, &f.square(&x1));
        if r.is_zero() {
            continue;
        }
        let Some(y1) = f.sqrt(&r) else { continue };
        let a = dp.a_at(f, &x1);
        if a.is_zero() {
            continue;
        }
        let disc = dp.delta_at(f, &x1);
        if disc.is_zero() {
            continue;
        }
        let Some(root) = f.sqrt(&disc) else { continue };
        let b = dp.b_at(f, &x1);
        let x2 = f.div(&f.sub(&root, &b), &f.scale(&a, 2)).ok()?;
        let num = f.sub(
            &f.sub(&f.add(&f.mul(&alpha, &x1), &f.mul(&alpha, &x2)), &f.mul(&x1, &x2)),
            &mid,
        );
        let y2 = f.div(&num, &y1).ok()?;
        let x3 = f.sub(&f.sub(&alpha, &x1), &x2);
        let y3 = f.neg(&f.add(&y1, &y2));
        return Some(([x1, x2, x3], [y1, y2, y3]));
    }
    None
}

fn circle_points(f: &FieldCtx, k: &Elt) -> Vec<(Elt, Elt)> {
    let mut pts = Vec::new();
    for x in f.elements() {
        let r = f.sub(k, &f.square(&x));
        if let Some(y) = f.sqrt(&r) {
            pts.push((x, y));
            if !y.is_zero() {
                pts.push((x, f.neg(&y)));
            }
        }
    }
    pts
}

fn by_pairs(f: &FieldCtx, alpha: &Elt, k: &Elt, pts: &[(Elt, Elt)]) -> Option<Six> {
    for (x1, y1) in pts {
        for (x2, y2) in pts {
            let x3 = f.sub(&f.sub(alpha, x1), x2);
            let y3 = f.neg(&f.add(y1, y2));
            if f.add(&f.square(&x3), &f.square(&y3)) == *k {
                return Some(([*x1, *x2, x3], [*y1, *y2, y3]));
            }
        }
    }
    None
}

fn coeffs(x: &Elt) -> Vec<u32> {
    x.coeffs().to_vec()
}

fn search_parity(tower: &Tower, parity: Parity) -> Result<PiParityReport> {
    let f = tower.fq();
    let one = f.one();
    let minus_one = f.neg(&one);
    let (case, k) = match parity {
        Parity::Even => (DeltaCase::EvenUnit, one),
        Parity::Odd => (DeltaCase::OddD, f.nonsquare_rep()),
    };
    let half = f.inv(&f.from_int(2))?;
    let mut pts: Option<Vec<(Elt, Elt)>> = None;
    let mut rep = PiParityReport {
        parity,
        k: coeffs(&k),
        alphas: 0,
        explicit: 0,
        reduction: 0,
        pairs: 0,
        unsolved: Vec::new(),
        solutions: Vec::new(),
    };
    for alpha in f.elements().skip(1) {
        rep.alphas += 1;
        let (six, method) = if case == DeltaCase::EvenUnit && (alpha == one || alpha == minus_one) {
            let x2 = if alpha == one { one } else { minus_one };
            let z = f.zero();
            (Some(([one, x2, minus_one], [z, z, z])), PiMethod::Explicit)
        } else {
            let dp = delta_poly(f, &alpha, case, Some(&k))?;
            match by_reduction(f, &dp, &half) {
                Some(s) => (Some(s), PiMethod::Reduction),
                None => {
                    let pts = pts.get_or_insert_with(|| circle_points(f, &k));
                    (by_pairs(f, &alpha, &k, pts), PiMethod::Pairs)
                }
            }
        };
        match six {
            Some(six) => {
                if !check_sextuple(f, &alpha, &k, &six) {
                    return Err(PropertyError::Reconstruction(format!(
                        "{method:?} solution for alpha {:?} fails the system",
                        alpha.coeffs()
                    )));
                }
                match method {
                    PiMethod::Explicit => rep.explicit += 1,
                    PiMethod::Reduction => rep.reduction += 1,
                    PiMethod::Pairs => rep.pairs += 1,
                }
                let (x, y) = six;
                rep.solutions.push(Sextuple {
                    alpha: coeffs(&alpha),
                    x: x.map(|e| coeffs(&e)),
                    y: y.map(|e| coeffs(&e)),
                    method,
                });
            }
            None => rep.unsolved.push(coeffs(&alpha)),
        }
    }
    Ok(rep)
}

/// Property Pi for both parities by exhaustive construction over `F_q^*`.
pub fn pi_direct_search(tower: &Tower, ell: u32) -> Result<PiReport> {
    let q = tower.q();
    if q > PI_SEARCH_MAX_Q {
        return Err(PropertyError::TooLarge {
            what: "q",
            size: q,
            cap: PI_SEARCH_MAX_Q,
        });
    }
    if require_ell(tower)? != ell {
        return Err(PropertyError::NotInSEll(q));
    }
    Ok(PiReport {
        q: q as u64,
        ell,
        even: search_parity(tower, Parity::Even)?,
        odd: search_parity(tower, Parity::Odd)?,
    })
}
