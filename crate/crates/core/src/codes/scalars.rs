use crate::gf::poly::Arith;
use crate::gf::{Elt, FieldCtx};

/// `F_{q0}` as lookup tables over element indices `0..q0`; index 0 is zero
/// and index 1 is one.
#[derive(Debug, Clone)]
pub struct ScalarField {
    q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl ScalarField {
    pub fn from_ctx(ctx: &FieldCtx) -> Self {
        let q = ctx.order() as u32;
        let elems: Vec<Elt> = ctx.elements().collect();
        let mut add = vec![0; (q * q) as usize];
        let mut mul = vec![0; (q * q) as usize];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let k = i * q as usize + j;
                add[k] = ctx.index(&ctx.add(a, b)) as u32;
                mul[k] = ctx.index(&ctx.mul(a, b)) as u32;
            }
        }
        let neg = elems.iter().map(|a| ctx.index(&ctx.neg(a)) as u32).collect();
        let inv = elems
            .iter()
            .map(|a| ctx.inv(a).map_or(0, |x| ctx.index(&x) as u32))
            .collect();
        Self {
            q,
            add,
            mul,
            neg,
            inv,
        }
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn nonzero(&self) -> impl Iterator<Item = u32> {
        1..self.q
    }
}

impl Arith for ScalarField {
    type E = u32;
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ScalarField::add(self, *a, *b)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ScalarField::add(self, *a, self.neg(*b))
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ScalarField::mul(self, *a, *b)
    }
    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero");
        ScalarField::inv(self, *a)
    }
}
