//! Finite field arithmetic.
//!
//! Two layers are provided. [`BaseField`] is either a prime field `F_p` or a
//! binary field `GF(2^s)` with a fixed reduction polynomial. [`ExtField`] is a
//! degree-`e` extension `base[x]/(f(x))` for a monic irreducible `f`, and its
//! distinguished generator `ω` is the residue class of `x`.
//!
//! The generator is *not* searched for primitivity. Everything downstream only
//! needs the minimal polynomial of `ω` over the base field to have degree
//! exactly `e`, and the class of `x` modulo an irreducible `f` of degree `e`
//! has that property by construction. [`ExtField::new`] still checks it.
//!
//! All linear algebra ([`Matrix`] and the functions in [`linalg`]) is generic
//! over the [`Field`] trait so that the same elimination code runs over base
//! fields (random test codes) and extension fields (the LRC generator).

mod base;
mod ext;
mod intpoly;
pub mod linalg;
mod matrix;
pub mod poly;

pub use base::{BaseField, BaseKind};
pub use ext::{ExtElem, ExtField};
pub use intpoly::{intpoly_permanent, IntPoly, PatternMatrix};
pub use matrix::Matrix;
pub use poly::{find_irreducible, is_irreducible};

use rand::Rng;
use std::fmt::Debug;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("matrix is singular (rank {rank} < {dim})")]
    SingularMatrix { rank: usize, dim: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("element does not belong to this field: {0}")]
    Mismatch(String),
    #[error("invalid field descriptor: {0}")]
    Descriptor(String),
    #[error("modulus is not a monic irreducible polynomial: {0}")]
    Modulus(String),
}

/// A finite field whose elements are plain values of type [`Field::Elem`].
///
/// The field object carries the parameters (modulus, tables); elements do
/// not, so every operation goes through `&self`.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;

    /// Characteristic of the field.
    fn characteristic(&self) -> u64;

    /// Number of elements, saturating at `u128::MAX`.
    fn order(&self) -> u128;

    /// Image of the integer `v` under the ring map `Z -> F`.
    fn integer(&self, v: u64) -> Self::Elem;

    /// Uniformly random element.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, mut exp: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut sq = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            exp >>= 1;
            if exp > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }
}
