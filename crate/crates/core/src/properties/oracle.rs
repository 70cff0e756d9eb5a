//! Brute-force Property NPi straight from its definition in `F_{q^2}`.

use serde::Serialize;

use super::{require_ell, PropertyError, Result};
use crate::gf::Tower;

pub const ORACLE_MAX_Q: u128 = 400;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub index: u64,
    pub holds: bool,
    /// `|G_i|`, always `q - 1`.
    pub coset_size: u64,
    /// First `γ ∈ G_i` outside `H_m + H_m`, as coefficients.
    pub gamma: Option<Vec<u32>>,
}

/// NPi(i): some `γ` with `γ^q = θ^i γ` is not `h1 + h2` with `h1, h2 ∈ H_m`,
/// `|H_m| = m(q+1)`.
///
/// `G_i = {γ : γ^(q-1) = θ^i}` is the coset `g^(i(q+1)/2^ℓ) · F_q^*` for `θ`
/// the primitive `2^ℓ`-th root `g^((q²-1)/2^ℓ)`.
pub fn npi_oracle_bruteforce(tower: &Tower, ell: u32, i: u64) -> Result<OracleResult> {
    let q = tower.q();
    if q > ORACLE_MAX_Q {
        return Err(PropertyError::TooLarge {
            what: "q",
            size: q,
            cap: ORACLE_MAX_Q,
        });
    }
    let class_ell = require_ell(tower)?;
    if class_ell != ell || i >= 1 << ell {
        return Err(PropertyError::NotInSEll(q));
    }
    let f = tower.fq2();
    let m = (tower.q0() - 1) / 2;
    let hm: Vec<_> = f.subgroup(m * (q + 1))?.iter().collect();
    let size = f.order() as usize;
    let mut sums = vec![false; size];
    for (a, x) in hm.iter().enumerate() {
        for y in &hm[a..] {
            sums[f.index(&f.add(x, y)) as usize] = true;
        }
    }
    let g = f.generator();
    let step = f.pow(&g, q + 1);
    let mut gamma = f.pow(&g, i as u128 * ((q + 1) >> ell));
    let mut witness = None;
    for _ in 0..q - 1 {
        if !sums[f.index(&gamma) as usize] {
            witness = Some(gamma.coeffs().to_vec());
            break;
        }
        gamma = f.mul(&gamma, &step);
    }
    Ok(OracleResult {
        index: i,
        holds: witness.is_some(),
        coset_size: (q - 1) as u64,
        gamma: witness,
    })
}
