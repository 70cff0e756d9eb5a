//! Generalized Zetterberg codes `C_s(q0)` and twisted half codes `C^t_s(q0)`.
//!
//! A code is stored through its parity-check columns: each column is the
//! coordinate vector, over `F_{q0}`, of an element of `F_{q^2}` with respect
//! to the basis `{ r^j z^k }` (`z` the generating root of `F_{q^2}`, `r^j` the
//! embedded basis of `F_{q0}`). For prime `q0` this is just the coefficient
//! vector of the element.

mod distance;
mod scalars;
mod syndrome;

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::congruence::{classify, CongruenceError};
use crate::gf::linalg::{invert, mat_vec, rank};
use crate::gf::poly::PrimeField;
use crate::gf::{Elt, FieldSpec, GfError, Tower};

pub use distance::{min_distance_small, DEFAULT_DISTANCE_CAP};
pub use scalars::ScalarField;
pub use syndrome::{
    covering_radius_exact, express, syndrome_table_bytes, CRCertificate, CoverOptions,
    DEFAULT_MEMORY_BUDGET, DEFAULT_RHO_CAP,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error("q = {0} is not ≡ 7 (mod 8); the twisted half code needs some ℓ ≥ 3")]
    NotInSEll(u128),
    #[error("syndrome table needs {required} bytes, budget is {budget}")]
    MemoryBudget { required: u128, budget: u64 },
    #[error("covering radius exceeds cap {0}")]
    RhoCap(u32),
    #[error("length {n} exceeds the distance search cap {cap}")]
    DistanceCap { n: usize, cap: usize },
    #[error("parity-check rank {rank} differs from redundancy {r}")]
    RankDeficient { rank: usize, r: usize },
    #[error("zero column in parity-check matrix")]
    ZeroColumn,
    #[error("minimum distance could not be bounded by sphere packing")]
    DistanceUnresolved,
}

pub type Result<T, E = CodeError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeKind {
    Full,
    TwistedHalf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub q0: u64,
    pub s: u32,
    pub ell: Option<u32>,
    /// Column enumeration convention.
    pub order: &'static str,
    pub base_field: FieldSpec,
    pub ext_field: FieldSpec,
}

/// A linear code over `F_{q0}` given by its parity-check columns.
#[derive(Debug, Clone)]
pub struct LinearCode {
    kind: CodeKind,
    n: usize,
    r: usize,
    /// Column-major: `columns[j][i]` is row `i` of column `j`, as an index
    /// into `scalars`.
    columns: Vec<Vec<u32>>,
    scalars: ScalarField,
    provenance: Provenance,
}

impl LinearCode {
    fn new(
        kind: CodeKind,
        columns: Vec<Vec<u32>>,
        scalars: ScalarField,
        provenance: Provenance,
    ) -> Result<Self> {
        let r = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.iter().all(|&x| x == 0)) {
            return Err(CodeError::ZeroColumn);
        }
        let code = Self {
            kind,
            n: columns.len(),
            r,
            columns,
            scalars,
            provenance,
        };
        let rk = code.rank();
        if rk != r {
            return Err(CodeError::RankDeficient { rank: rk, r });
        }
        Ok(code)
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of parity checks, `2s`.
    pub fn redundancy(&self) -> usize {
        self.r
    }

    pub fn q0(&self) -> u64 {
        self.provenance.q0
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.columns
    }

    pub fn scalars(&self) -> &ScalarField {
        &self.scalars
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    fn rank(&self) -> usize {
        // rows of the parity-check matrix
        let rows: Vec<Vec<u32>> = (0..self.r)
            .map(|i| self.columns.iter().map(|c| c[i]).collect())
            .collect();
        rank(&self.scalars, rows)
    }

    /// Re-orders and rescales columns; used to check invariance of the
    /// covering radius.
    pub fn permuted_and_scaled(&self, perm: &[usize], scales: &[u32]) -> LinearCode {
        let columns = perm
            .iter()
            .zip(scales)
            .map(|(&j, &c)| {
                assert!(c != 0, "zero scale");
                self.columns[j]
                    .iter()
                    .map(|&x| self.scalars.mul(c, x))
                    .collect()
            })
            .collect();
        LinearCode {
            columns,
            ..self.clone()
        }
    }

    /// Parity-check matrix as CSV: `r` rows of `n` residues.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for i in 0..self.r {
            let row: Vec<String> = self.columns.iter().map(|c| c[i].to_string()).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// `n - rank(P)`; equals `n - 2s` for every code built here.
pub fn dimension(code: &LinearCode) -> usize {
    code.n - code.rank()
}

/// The coordinate map `F_{q^2} -> F_{q0}^{2s}`.
struct Coordinates<'a> {
    tower: &'a Tower,
    inverse: Vec<Vec<u32>>,
}

impl<'a> Coordinates<'a> {
    fn new(tower: &'a Tower) -> Result<Self> {
        let fq2 = tower.fq2();
        let d0 = tower.fq0().degree();
        let two_s = 2 * tower.s() as usize;
        let z = fq2.root();
        let basis_q0: Vec<Elt> = (0..d0)
            .map(|j| {
                let mut c = vec![0u32; d0];
                c[j] = 1;
                tower
                    .q0_in_q2()
                    .embed(&tower.fq0().from_coeffs(&c).expect("length d0"))
            })
            .collect::<Result<_, GfError>>()?;
        let mut cols = Vec::with_capacity(two_s * d0);
        let mut zk = fq2.one();
        for _ in 0..two_s {
            for b in &basis_q0 {
                cols.push(fq2.mul(b, &zk).coeffs().to_vec());
            }
            zk = fq2.mul(&zk, &z);
        }
        let rows = crate::gf::linalg::transpose(&cols);
        let fp = PrimeField::new(fq2.characteristic());
        let inverse = invert(&fp, &rows).ok_or(GfError::NotInSubfield)?;
        Ok(Self { tower, inverse })
    }

    fn column(&self, x: &Elt) -> Vec<u32> {
        let fq2 = self.tower.fq2();
        let fq0 = self.tower.fq0();
        let d0 = fq0.degree();
        let fp = PrimeField::new(fq2.characteristic());
        let c = mat_vec(&fp, &self.inverse, x.coeffs());
        c.chunks(d0)
            .map(|chunk| fq0.index(&fq0.from_coeffs(chunk).expect("length d0")) as u32)
            .collect()
    }
}

fn provenance(tower: &Tower, ell: Option<u32>, order: &'static str) -> Provenance {
    Provenance {
        q0: tower.q0() as u64,
        s: tower.s(),
        ell,
        order,
        base_field: tower.fq0().spec().clone(),
        ext_field: tower.fq2().spec().clone(),
    }
}

/// `C_s(q0)`: columns are the `q + 1` elements of `H ⊂ F_{q^2}^*`, in the
/// order `g^((q-1)k)`, `k = 0..q`.
pub fn build_full(q0_spec: FieldSpec, s: u32) -> Result<LinearCode> {
    let tower = Tower::new(q0_spec, s)?;
    build_full_in(&tower)
}

pub fn build_full_in(tower: &Tower) -> Result<LinearCode> {
    let coords = Coordinates::new(tower)?;
    let h = tower.fq2().subgroup(tower.q() + 1)?;
    let columns = h.iter().map(|x| coords.column(&x)).collect();
    let ell = classify(&tower.q())?.ell;
    LinearCode::new(
        CodeKind::Full,
        columns,
        ScalarField::from_ctx(tower.fq0()),
        provenance(tower, ell, "generator-powers"),
    )
}

/// The half set `⋃_{i < 2^(ℓ-1)} θ^i H_ℓ` with `|H_ℓ| = (q+1)/2^ℓ`,
/// coset-major. `H` is its disjoint union with its negative.
pub fn twisted_half_set(tower: &Tower) -> Result<(u32, Vec<Elt>)> {
    let q = tower.q();
    let ell = classify(&q)?.ell.ok_or(CodeError::NotInSEll(q))?;
    let fq2 = tower.fq2();
    let theta = fq2.primitive_2l_root(ell)?;
    let h_ell: Vec<Elt> = fq2.subgroup((q + 1) >> ell)?.iter().collect();
    let mut out = Vec::with_capacity(((q + 1) / 2) as usize);
    let mut shift = fq2.one();
    for _ in 0..1u64 << (ell - 1) {
        out.extend(h_ell.iter().map(|h| fq2.mul(&shift, h)));
        shift = fq2.mul(&shift, &theta);
    }
    Ok((ell, out))
}

/// `C^t_s(q0)`: columns are the elements of the twisted half set.
pub fn build_twisted_half(q0_spec: FieldSpec, s: u32) -> Result<LinearCode> {
    let tower = Tower::new(q0_spec, s)?;
    build_twisted_half_in(&tower)
}

pub fn build_twisted_half_in(tower: &Tower) -> Result<LinearCode> {
    let (ell, half) = twisted_half_set(tower)?;
    let coords = Coordinates::new(tower)?;
    let columns = half.iter().map(|x| coords.column(x)).collect();
    LinearCode::new(
        CodeKind::TwistedHalf,
        columns,
        ScalarField::from_ctx(tower.fq0()),
        provenance(tower, Some(ell), "theta-coset-major"),
    )
}

/// Quasi-perfect iff `⌊(d-1)/2⌋ + 1 = ρ`.
pub fn quasi_perfect_report(min_distance: u32, cr: &CRCertificate) -> bool {
    (min_distance.saturating_sub(1)) / 2 + 1 == cr.rho
}

/// Machine-readable summary of one code.
#[derive(Debug, Clone, Serialize)]
pub struct CodeReport {
    pub kind: CodeKind,
    pub q0: u64,
    pub s: u32,
    pub n: usize,
    pub dimension: usize,
    pub d_bounds: [u32; 2],
    pub rho: u32,
    pub histogram: Vec<u64>,
    pub quasi_perfect: bool,
    pub base_field: FieldSpec,
    pub ext_field: FieldSpec,
}

impl CodeReport {
    /// Computes dimension, minimum distance (exactly when the length is
    /// within `distance_cap`) and the exact covering radius.
    pub fn compute(code: &LinearCode, opts: &CoverOptions, distance_cap: usize) -> Result<Self> {
        let cr = covering_radius_exact(code, opts)?;
        let d_bounds = match min_distance_small(code, distance_cap) {
            Ok(d) => [d, d],
            Err(CodeError::DistanceCap { .. }) => match code.kind {
                // h and -h are both columns of the full code
                CodeKind::Full => [2, 2],
                CodeKind::TwistedHalf => [3, 4],
            },
            Err(e) => return Err(e),
        };
        let quasi_perfect = quasi_perfect_report(d_bounds[0], &cr)
            && quasi_perfect_report(d_bounds[1], &cr);
        Ok(Self {
            kind: code.kind,
            q0: code.q0(),
            s: code.provenance.s,
            n: code.n,
            dimension: dimension(code),
            d_bounds,
            rho: cr.rho,
            histogram: cr.histogram,
            quasi_perfect,
            base_field: code.provenance.base_field.clone(),
            ext_field: code.provenance.ext_field.clone(),
        })
    }
}

#[cfg(test)]
mod tests;
