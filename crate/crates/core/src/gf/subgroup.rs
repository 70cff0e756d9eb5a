use super::{Elt, FieldCtx};

/// A cyclic subgroup of `F^*`, enumerated lazily as `1, t, t^2, ...` for a
/// fixed generator `t`.
#[derive(Clone, Copy, Debug)]
pub struct SubgroupEnum<'a> {
    ctx: &'a FieldCtx,
    order: u128,
    step: Elt,
}

impl<'a> SubgroupEnum<'a> {
    pub(super) fn new(ctx: &'a FieldCtx, order: u128, step: Elt) -> Self {
        Self { ctx, order, step }
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    /// The generator `g^((|F|-1)/order)`.
    pub fn generator(&self) -> Elt {
        self.step
    }

    pub fn iter(&self) -> impl Iterator<Item = Elt> + 'a {
        let ctx = self.ctx;
        let step = self.step;
        let mut cur = ctx.one();
        (0..self.order).map(move |_| {
            let out = cur;
            cur = ctx.mul(&cur, &step);
            out
        })
    }
}
