use std::sync::Arc;

use super::linalg::{invert, row_reduce, transpose};
use super::poly::{roots_in, PrimeField};
use super::{Elt, FieldCtx, FieldSpec, GfError, Result, DEFAULT_SQUARE_TABLE_LIMIT};

/// Field homomorphism `F_{p^a} -> F_{p^b}` fixing `F_p`, determined by the
/// image of the generating root of the source modulus.
#[derive(Debug, Clone)]
pub struct Embedding {
    from: Arc<FieldCtx>,
    to: Arc<FieldCtx>,
    /// Images of `X^j`, `j < deg(from)`.
    images: Vec<Elt>,
    pivot_rows: Vec<usize>,
    pivot_inverse: Vec<Vec<u32>>,
}

impl Embedding {
    /// Sends `X` to the smallest-index root of the source modulus in the
    /// target field.
    pub fn new(from: Arc<FieldCtx>, to: Arc<FieldCtx>) -> Result<Self> {
        if from.characteristic() != to.characteristic() || to.degree() % from.degree() != 0 {
            return Err(GfError::NotInSubfield);
        }
        let r = if from.id() == to.id() {
            from.root()
        } else {
            let f: Vec<Elt> = from
                .spec()
                .modulus
                .iter()
                .map(|&c| to.from_int(c as i64))
                .collect();
            *roots_in(&to, &f).first().ok_or(GfError::NotInSubfield)?
        };
        let mut images = Vec::with_capacity(from.degree());
        let mut cur = to.one();
        for _ in 0..from.degree() {
            images.push(cur);
            cur = to.mul(&cur, &r);
        }
        Self::from_images(from, to, images)
    }

    fn from_images(from: Arc<FieldCtx>, to: Arc<FieldCtx>, images: Vec<Elt>) -> Result<Self> {
        let fp = PrimeField::new(to.characteristic());
        // columns of the embedding matrix are the image coordinate vectors
        let cols: Vec<Vec<u32>> = images.iter().map(|e| e.coeffs().to_vec()).collect();
        let mut work = cols.clone();
        let pivot_rows = row_reduce(&fp, &mut work);
        if pivot_rows.len() != from.degree() {
            return Err(GfError::NotInSubfield);
        }
        let rows = transpose(&cols);
        let square: Vec<Vec<u32>> = pivot_rows.iter().map(|&i| rows[i].clone()).collect();
        let pivot_inverse = invert(&fp, &square).ok_or(GfError::NotInSubfield)?;
        Ok(Self {
            from,
            to,
            images,
            pivot_rows,
            pivot_inverse,
        })
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &Embedding) -> Result<Embedding> {
        if self.to.id() != outer.from.id() {
            return Err(GfError::ContextMismatch);
        }
        let images = self
            .images
            .iter()
            .map(|x| outer.embed(x))
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(self.from.clone(), outer.to.clone(), images)
    }

    pub fn source(&self) -> &Arc<FieldCtx> {
        &self.from
    }

    pub fn target(&self) -> &Arc<FieldCtx> {
        &self.to
    }

    pub fn embed(&self, x: &Elt) -> Result<Elt> {
        self.from.check(x)?;
        let mut acc = self.to.zero();
        for (c, img) in x.coeffs().iter().zip(&self.images) {
            if *c != 0 {
                acc = self.to.add(&acc, &self.to.scale(img, *c as i64));
            }
        }
        Ok(acc)
    }

    /// Inverse of [`Embedding::embed`] on its image.
    pub fn project(&self, y: &Elt) -> Result<Elt> {
        self.to.check(y)?;
        let fp = PrimeField::new(self.to.characteristic());
        let rhs: Vec<u32> = self.pivot_rows.iter().map(|&i| y.coeffs()[i]).collect();
        let c = super::linalg::mat_vec(&fp, &self.pivot_inverse, &rhs);
        let x = self.from.from_coeffs(&c)?;
        if self.embed(&x)? != *y {
            return Err(GfError::NotInSubfield);
        }
        Ok(x)
    }
}

/// The tower `F_{q0} ⊂ F_q ⊂ F_{q^2}` with `q = q0^s`, `s` odd.
#[derive(Debug, Clone)]
pub struct Tower {
    s: u32,
    fq0: Arc<FieldCtx>,
    fq: Arc<FieldCtx>,
    fq2: Arc<FieldCtx>,
    q0_in_q: Embedding,
    q_in_q2: Embedding,
    q0_in_q2: Embedding,
}

impl Tower {
    pub fn new(q0_spec: FieldSpec, s: u32) -> Result<Self> {
        Self::with_square_limit(q0_spec, s, DEFAULT_SQUARE_TABLE_LIMIT)
    }

    pub fn with_square_limit(q0_spec: FieldSpec, s: u32, square_limit: u64) -> Result<Self> {
        if s == 0 || s % 2 == 0 {
            return Err(GfError::EvenExtension(s));
        }
        q0_spec.validate()?;
        let p = q0_spec.p;
        let d0 = q0_spec.d;
        let fq0 = Arc::new(FieldCtx::with_square_limit(q0_spec, square_limit)?);
        let fq = if s == 1 {
            fq0.clone()
        } else {
            Arc::new(FieldCtx::with_square_limit(
                FieldSpec::new(p, s * d0)?,
                square_limit,
            )?)
        };
        let fq2 = Arc::new(FieldCtx::with_square_limit(
            FieldSpec::new(p, 2 * s * d0)?,
            square_limit,
        )?);
        let q0_in_q = Embedding::new(fq0.clone(), fq.clone())?;
        let q_in_q2 = Embedding::new(fq.clone(), fq2.clone())?;
        let q0_in_q2 = q0_in_q.then(&q_in_q2)?;
        Ok(Self {
            s,
            fq0,
            fq,
            fq2,
            q0_in_q,
            q_in_q2,
            q0_in_q2,
        })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q0(&self) -> u128 {
        self.fq0.order()
    }

    pub fn q(&self) -> u128 {
        self.fq.order()
    }

    pub fn fq0(&self) -> &Arc<FieldCtx> {
        &self.fq0
    }

    pub fn fq(&self) -> &Arc<FieldCtx> {
        &self.fq
    }

    pub fn fq2(&self) -> &Arc<FieldCtx> {
        &self.fq2
    }

    pub fn q0_in_q(&self) -> &Embedding {
        &self.q0_in_q
    }

    pub fn q_in_q2(&self) -> &Embedding {
        &self.q_in_q2
    }

    pub fn q0_in_q2(&self) -> &Embedding {
        &self.q0_in_q2
    }

    /// `x^(q+1)` for `x` in `F_{q^2}`.
    pub fn norm(&self, x: &Elt) -> Elt {
        self.fq2.pow(x, self.q() + 1)
    }

    /// Whether an element of `F_{q^2}` lies in `F_q`.
    pub fn in_fq(&self, x: &Elt) -> bool {
        self.fq2.pow(x, self.q()) == *x
    }

    /// The `m = (q0-1)/2` nonzero squares of `F_{q0}` (in index order),
    /// embedded in `F_q`.
    pub fn base_squares(&self) -> Vec<Elt> {
        self.base_class(1)
    }

    /// The `m` non-squares of `F_{q0}`, embedded in `F_q`.
    pub fn base_nonsquares(&self) -> Vec<Elt> {
        self.base_class(-1)
    }

    fn base_class(&self, chi: i8) -> Vec<Elt> {
        self.fq0
            .elements()
            .filter(|x| self.fq0.eta_fast(x) == chi)
            .map(|x| self.q0_in_q.embed(&x).expect("same context"))
            .collect()
    }
}
