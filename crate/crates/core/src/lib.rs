//! Generalized Zetterberg codes and their twisted half variants over
//! odd-characteristic fields: construction, exact covering radius by syndrome
//! search, and the algebraic criteria (character sums over `F_q`, point counts
//! on a fiber-product curve) that decide whether the covering radius is 2 or 3.

pub mod codes;
pub mod congruence;
pub mod curves;
pub mod gf;
pub mod properties;
pub mod verify;

pub use gf::{make_tower, Elt, FieldCtx, FieldSpec, Tower};

/// 2-adic class of a machine-word field size.
pub type TwoAdicClass64 = congruence::TwoAdicClass<u64>;
/// 2-adic class of an arbitrary-precision field size.
pub type TwoAdicClassBig = congruence::TwoAdicClass<num_bigint::BigUint>;
