//! Property NPi scans, membership in `I(q0)`, and the Property Pi machinery
//! (Δ polynomials, direct search, Weil-sum audit).
//!
//! NPi for an even index reduces to: some `x ∈ F_q^*` makes every `x² - α_j`
//! a nonzero square, `α_j` the nonzero squares of `F_{q0}`. Odd indices use
//! the non-squares `β_j` instead.

mod delta;
mod oracle;
mod pi;
mod scan;
mod weil;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::congruence::{classify, CongruenceError};
use crate::gf::{Elt, FieldCtx, FieldSpec, GfError, Tower};

pub use delta::{delta_not_square_certificate, delta_poly, DeltaCase, DeltaCertificate, DeltaPoly};
pub use oracle::{npi_oracle_bruteforce, OracleResult, ORACLE_MAX_Q};
pub use pi::{
    check_sextuple, pi_direct_search, PiMethod, PiParityReport, PiReport, Sextuple, PI_SEARCH_MAX_Q,
};
pub use scan::{merge_shard_reports, ScanOptions, Shard, DEFAULT_BLOCK};
pub use weil::{delta_audit, weil_sum_audit, DeltaAudit, WeilAlphaRow, WeilParityReport, WeilReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PropertyError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error("q = {0} is not ≡ 7 (mod 8)")]
    NotInSEll(u128),
    #[error("{what} = {size} exceeds cap {cap}")]
    TooLarge {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("scan stopped at exponent {watermark} before exhausting its range")]
    Interrupted { watermark: u64 },
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("bad shard: {0}")]
    Shard(String),
    #[error("witness failed re-verification: {0}")]
    InvalidWitness(String),
    #[error("alpha must be nonzero and, in the even case, not ±1")]
    ExcludedAlpha,
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
}

pub type Result<T, E = PropertyError> = std::result::Result<T, E>;

/// Index parity of Property NPi / Pi.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(i: u64) -> Self {
        if i % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// `x = g^exponent` together with `y_j` satisfying `y_j² = x² - t_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub exponent: u64,
    pub x: Vec<u32>,
    pub y: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub q0: u64,
    pub s: u32,
    pub parity: Parity,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub scanned: u64,
    pub elapsed_ms: u64,
    pub checkpoints: u64,
    pub shard: Shard,
    /// `F_q`, in which `x` and the `y_j` are written.
    pub field: FieldSpec,
    pub base_field: FieldSpec,
}

/// `I(q0)` membership with both parity reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InIReport {
    pub q0: u64,
    pub s: u32,
    pub ell: u32,
    pub in_i: bool,
    pub even: PropertyReport,
    pub odd: PropertyReport,
}

/// Checks that `q` has some `ℓ ≥ 3` and returns it.
pub fn require_ell(tower: &Tower) -> Result<u32> {
    let q = tower.q();
    classify(&q)?.ell.ok_or(PropertyError::NotInSEll(q))
}

/// The `m` character targets for a parity: nonzero squares (even) or
/// non-squares (odd) of `F_{q0}`, embedded in `F_q`.
pub fn targets(tower: &Tower, parity: Parity) -> Vec<Elt> {
    match parity {
        Parity::Even => tower.base_squares(),
        Parity::Odd => tower.base_nonsquares(),
    }
}

/// Whether every `x² - t` is a nonzero square.
#[inline]
pub(crate) fn all_squares(f: &FieldCtx, x2: &Elt, targets: &[Elt]) -> bool {
    targets.iter().all(|t| f.eta_fast(&f.sub(x2, t)) == 1)
}

/// Builds and checks a witness using Euler's criterion only.
pub fn make_witness(f: &FieldCtx, targets: &[Elt], exponent: u64) -> Result<Witness> {
    let x = f.pow(&f.generator(), exponent as u128);
    verify_point(f, targets, &x)?;
    let x2 = f.square(&x);
    let y = targets
        .iter()
        .map(|t| {
            let v = f.sub(&x2, t);
            let y = f
                .sqrt(&v)
                .ok_or_else(|| PropertyError::InvalidWitness("no square root".into()))?;
            if y.is_zero() || f.square(&y) != v {
                return Err(PropertyError::InvalidWitness("bad square root".into()));
            }
            Ok(y.coeffs().to_vec())
        })
        .collect::<Result<_>>()?;
    Ok(Witness {
        exponent,
        x: x.coeffs().to_vec(),
        y,
    })
}

fn verify_point(f: &FieldCtx, targets: &[Elt], x: &Elt) -> Result<()> {
    if x.is_zero() {
        return Err(PropertyError::InvalidWitness("x = 0".into()));
    }
    let x2 = f.square(x);
    for t in targets {
        if f.eta_euler(&f.sub(&x2, t)) != 1 {
            return Err(PropertyError::InvalidWitness(
                "some x² - t is not a nonzero square".into(),
            ));
        }
    }
    Ok(())
}

/// Re-verifies a stored witness from its coefficients alone.
pub fn verify_witness(tower: &Tower, parity: Parity, w: &Witness) -> Result<()> {
    let f = tower.fq();
    let t = targets(tower, parity);
    let x = f.from_coeffs(&w.x)?;
    if f.pow(&f.generator(), w.exponent as u128) != x {
        return Err(PropertyError::InvalidWitness("exponent does not match x".into()));
    }
    verify_point(f, &t, &x)?;
    if w.y.len() != t.len() {
        return Err(PropertyError::InvalidWitness("wrong number of y values".into()));
    }
    let x2 = f.square(&x);
    for (y, t) in w.y.iter().zip(&t) {
        let y = f.from_coeffs(y)?;
        if y.is_zero() || f.square(&y) != f.sub(&x2, t) {
            return Err(PropertyError::InvalidWitness("y² ≠ x² - t".into()));
        }
    }
    Ok(())
}

/// NPi for even indices.
pub fn npi_even(tower: &Tower, opts: &ScanOptions) -> Result<PropertyReport> {
    scan::npi_scan(tower, Parity::Even, opts)
}

/// NPi for odd indices.
pub fn npi_odd(tower: &Tower, opts: &ScanOptions) -> Result<PropertyReport> {
    scan::npi_scan(tower, Parity::Odd, opts)
}

pub fn npi(tower: &Tower, parity: Parity, opts: &ScanOptions) -> Result<PropertyReport> {
    scan::npi_scan(tower, parity, opts)
}

/// `s ∈ I(q0)` iff NPi holds for some parity. Both parities are always
/// scanned so the report is complete.
pub fn in_i(tower: &Tower, opts: &ScanOptions) -> Result<InIReport> {
    let ell = require_ell(tower)?;
    let even = npi_even(tower, opts)?;
    let odd = npi_odd(tower, opts)?;
    Ok(InIReport {
        q0: tower.q0() as u64,
        s: tower.s(),
        ell,
        in_i: even.holds || odd.holds,
        even,
        odd,
    })
}

#[cfg(test)]
mod tests;
