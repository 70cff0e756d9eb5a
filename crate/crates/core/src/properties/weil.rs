//! Exact character sums behind the Weil-bound argument for Property Pi.

use serde::Serialize;

use super::delta::{delta_not_square_certificate, delta_poly, DeltaCase, DeltaCertificate};
use super::{Parity, PropertyError, Result};
use crate::gf::{Elt, FieldCtx, Tower};

const WEIL_MAX_Q: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeilAlphaRow {
    pub alpha: Vec<u32>,
    /// `Σ η(Δ(x))`.
    pub sum_delta: i64,
    /// `Σ η((K - x²) Δ(x))`.
    pub sum_k_delta: i64,
    /// `N = Σ (1 + η(K - x²))(1 + η(Δ(x)))`.
    pub n: u64,
    /// Contribution of the exceptional set `T`.
    pub e: u64,
    pub n1: u64,
    pub roots_of_delta: u64,
    pub delta_bound: bool,
    pub k_delta_bound: bool,
    pub e_bound: bool,
    pub n1_bound: bool,
    /// `N = q + 1 + Σ η(Δ) + Σ η((K - x²)Δ)`.
    pub n_identity: bool,
    pub certificate: bool,
}

impl WeilAlphaRow {
    pub fn ok(&self) -> bool {
        self.delta_bound
            && self.k_delta_bound
            && self.e_bound
            && self.n1_bound
            && self.n_identity
            && self.certificate
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeilParityReport {
    pub parity: Parity,
    pub k: Vec<u32>,
    /// `Σ η(K - x²)`, expected to be exactly 1.
    pub sum_k_minus_x2: i64,
    pub rows: Vec<WeilAlphaRow>,
}

impl WeilParityReport {
    pub fn ok(&self) -> bool {
        self.sum_k_minus_x2 == 1 && self.rows.iter().all(WeilAlphaRow::ok)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeilReport {
    pub q: u64,
    /// Whether `q - 8√q - 15 > 0`, i.e. the counting argument alone suffices.
    pub counting_suffices: bool,
    pub even: WeilParityReport,
    pub odd: WeilParityReport,
}

impl WeilReport {
    pub fn ok(&self) -> bool {
        self.even.ok() && self.odd.ok()
    }
}

/// `|s| ≤ c √q` without floating point.
fn within(s: i64, c: u128, q: u128) -> bool {
    (s.unsigned_abs() as u128).pow(2) <= c * c * q
}

/// `n ≥ q - 8√q - c`.
fn n1_at_least(n1: u64, q: u128, c: u128) -> bool {
    let lhs = q as i128 - c as i128 - n1 as i128;
    lhs <= 0 || (lhs as u128).pow(2) <= 64 * q
}

/// Evenly spaced α in index order; all of them when fewer than `count`.
fn sample(candidates: Vec<Elt>, count: usize) -> Vec<Elt> {
    let len = candidates.len();
    if count == 0 || len <= count {
        return candidates;
    }
    (0..count).map(|j| candidates[j * len / count]).collect()
}

fn admissible(f: &FieldCtx, case: DeltaCase) -> Vec<Elt> {
    let one = f.one();
    let minus_one = f.neg(&one);
    f.elements()
        .skip(1)
        .filter(|a| case == DeltaCase::OddD || (*a != one && *a != minus_one))
        .collect()
}

fn audit_parity(f: &FieldCtx, parity: Parity, alpha_count: usize) -> Result<WeilParityReport> {
    let q = f.order();
    let one = f.one();
    let (case, k, e_cap, n1_c) = match parity {
        Parity::Even => (DeltaCase::EvenUnit, one, 16, 15),
        Parity::Odd => (DeltaCase::OddD, f.nonsquare_rep(), 12, 11),
    };
    let elems: Vec<Elt> = f.elements().collect();
    let kx: Vec<i8> = elems
        .iter()
        .map(|x| f.eta_fast(&f.sub(&k, &f.square(x))))
        .collect();
    let sum_k_minus_x2 = kx.iter().map(|&v| v as i64).sum();

    let candidates = admissible(f, case);
    let mut rows = Vec::new();
    for alpha in sample(candidates, alpha_count) {
        let dp = delta_poly(f, &alpha, case, Some(&k))?;
        let cert = delta_not_square_certificate(f, &alpha, case, Some(&k))?;
        let (mut sum_delta, mut sum_k_delta) = (0i64, 0i64);
        let (mut n, mut e, mut roots) = (0u64, 0u64, 0u64);
        for (x, &ek) in elems.iter().zip(&kx) {
            let ed = f.eta_fast(&dp.delta_at(f, x));
            sum_delta += ed as i64;
            sum_k_delta += (ek * ed) as i64;
            let term = ((1 + ek) * (1 + ed)) as u64;
            n += term;
            let in_t1 = ek == 0;
            let in_t2 = dp.a_at(f, x).is_zero();
            let in_t3 = ed == 0;
            roots += in_t3 as u64;
            if in_t1 || in_t2 || in_t3 {
                e += term;
            }
        }
        let n1 = n - e;
        rows.push(WeilAlphaRow {
            alpha: alpha.coeffs().to_vec(),
            sum_delta,
            sum_k_delta,
            n,
            e,
            n1,
            roots_of_delta: roots,
            delta_bound: within(sum_delta, 3, q),
            k_delta_bound: within(sum_k_delta, 5, q),
            e_bound: e <= e_cap && roots <= 4,
            n1_bound: n1_at_least(n1, q, n1_c),
            n_identity: n as i128 == q as i128 + 1 + sum_delta as i128 + sum_k_delta as i128,
            certificate: cert.holds(),
        });
    }
    Ok(WeilParityReport {
        parity,
        k: k.coeffs().to_vec(),
        sum_k_minus_x2,
        rows,
    })
}

/// Audits both parities over `F_q` for up to `alpha_count` values of α each
/// (every admissible α when there are fewer).
pub fn weil_sum_audit(tower: &Tower, alpha_count: usize) -> Result<WeilReport> {
    let f = tower.fq();
    let q = f.order();
    if q > WEIL_MAX_Q {
        return Err(PropertyError::TooLarge {
            what: "q",
            size: q,
            cap: WEIL_MAX_Q,
        });
    }
    // q - 8√q - 15 > 0  ⇔  q > 15 and (q - 15)² > 64q
    let counting_suffices = q > 15 && (q - 15).pow(2) > 64 * q;
    Ok(WeilReport {
        q: q as u64,
        counting_suffices,
        even: audit_parity(f, Parity::Even, alpha_count)?,
        odd: audit_parity(f, Parity::Odd, alpha_count)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaAudit {
    pub q: u64,
    pub even: Vec<DeltaCertificate>,
    pub odd: Vec<DeltaCertificate>,
}

impl DeltaAudit {
    pub fn holds(&self) -> bool {
        self.even.iter().chain(&self.odd).all(DeltaCertificate::holds)
    }
}

/// Non-square certificates for up to `alpha_count` α per case, sampled as
/// in `weil_sum_audit`.
pub fn delta_audit(f: &FieldCtx, alpha_count: usize) -> Result<DeltaAudit> {
    let run = |case: DeltaCase, k: Elt| -> Result<Vec<DeltaCertificate>> {
        sample(admissible(f, case), alpha_count)
            .iter()
            .map(|a| delta_not_square_certificate(f, a, case, Some(&k)))
            .collect()
    };
    Ok(DeltaAudit {
        q: f.order() as u64,
        even: run(DeltaCase::EvenUnit, f.one())?,
        odd: run(DeltaCase::OddD, f.nonsquare_rep())?,
    })
}
