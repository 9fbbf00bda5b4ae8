//! Internal arithmetic plumbing: solvers are generic over an integer type so
//! the hot paths run on `i128` whenever a preflight bound shows that no
//! intermediate value can overflow, falling back to big integers otherwise.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

pub(crate) trait Int: Clone + Ord + core::fmt::Debug {
    fn zero_i() -> Self;
    fn from_big(b: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
    fn add_i(&self, o: &Self) -> Self;
    fn sub_i(&self, o: &Self) -> Self;
    fn is_neg_i(&self) -> bool;
}

impl Int for i128 {
    fn zero_i() -> Self {
        0
    }
    fn from_big(b: &BigInt) -> Self {
        b.to_i128().expect("preflight bound admitted i128")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn add_i(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_i(&self, o: &Self) -> Self {
        self - o
    }
    fn is_neg_i(&self) -> bool {
        *self < 0
    }
}

impl Int for BigInt {
    fn zero_i() -> Self {
        Zero::zero()
    }
    fn from_big(b: &BigInt) -> Self {
        b.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add_i(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_i(&self, o: &Self) -> Self {
        self - o
    }
    fn is_neg_i(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// True when every intermediate value bounded by `bound` in absolute value
/// stays far from the `i128` range.
pub(crate) fn fits_i128(bound: &BigInt) -> bool {
    bound.abs() < BigInt::from(i128::MAX / 8)
}
