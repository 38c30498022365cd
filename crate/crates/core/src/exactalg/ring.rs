use num::{BigInt, Integer, One, Zero};

use super::Rational;

/// Commutative ring with identity. Methods take references so the trait can
/// be implemented for big-number types without forcing clones at call sites.
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    fn from_rational(r: &Rational) -> Self;
}

/// Integral domain with exact division (the quotient is known to exist).
pub trait IntegralDomain: Ring {
    fn div_exact(&self, other: &Self) -> Self;
}

pub trait Field: Ring {
    fn inv(&self) -> Self;
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl IntegralDomain for Rational {
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
}

impl Field for Rational {
    fn inv(&self) -> Self {
        self.recip()
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    /// Truncates non-integral values; callers clear denominators first.
    fn from_rational(r: &Rational) -> Self {
        debug_assert!(r.is_integer());
        r.to_integer()
    }
}

impl IntegralDomain for BigInt {
    fn div_exact(&self, other: &Self) -> Self {
        let (q, rem) = self.div_rem(other);
        debug_assert!(Zero::is_zero(&rem), "inexact division {self} / {other}");
        q
    }
}
