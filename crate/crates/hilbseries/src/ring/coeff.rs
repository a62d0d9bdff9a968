//! The coefficient-ring abstraction shared by all series types.

use num::BigRational;

/// Exact rational numbers; the base field for everything.
pub type QQ = BigRational;

/// A commutative ring with enough structure for truncated-series arithmetic.
///
/// `inv` returns `None` for non-units; `from_rat` embeds the rationals (needed
/// by exp/log and by anything dividing by integers). All implementations are
/// immutable values, so sharing across threads is safe.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_rat(r: &QQ) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    /// Scale by a rational; the common case of dividing by factorials.
    fn scale(&self, r: &QQ) -> Self {
        self.mul(&Self::from_rat(r))
    }
}

impl Coeff for QQ {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Coeff::is_zero(self) {
            None
        } else {
            Some(<QQ as num_traits::One>::one() / self)
        }
    }
    fn from_rat(r: &QQ) -> Self {
        r.clone()
    }
}
