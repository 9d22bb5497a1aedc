//! The coefficient field abstraction.
//!
//! Everything above this module is written against [`Field`], so the same
//! code runs over exact rationals (the default, and the only choice for
//! which equality checks are meaningful) or over `f64` for quick numerical
//! experiments.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed};

/// Arbitrary-precision rational number, always stored in lowest terms.
pub type Rational = BigRational;

/// A field of characteristic zero usable as a coefficient domain.
pub trait Field:
    Clone + PartialEq + Debug + Display + Num + Neg<Output = Self> + FromPrimitive + Send + Sync + 'static
{
    /// Embeds an integer.
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer embedding")
    }

    /// True for values that display without a leading minus sign.
    fn is_nonnegative(&self) -> bool;

    /// True when the value is an integer (used by printers to decide on parentheses).
    fn is_integral(&self) -> bool;
}

impl Field for BigRational {
    fn is_nonnegative(&self) -> bool {
        !self.is_negative()
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}

impl Field for f64 {
    fn is_nonnegative(&self) -> bool {
        *self >= 0.0
    }

    fn is_integral(&self) -> bool {
        self.fract() == 0.0
    }
}

impl Field for f32 {
    fn is_nonnegative(&self) -> bool {
        *self >= 0.0
    }

    fn is_integral(&self) -> bool {
        self.fract() == 0.0
    }
}

/// Builds `num/den` as a rational; panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `n!` in the field.
pub fn factorial<S: Field>(n: u32) -> S {
    (2..=n).fold(S::one(), |acc, i| acc * S::int(i as i64))
}

/// Binomial coefficient `C(n, k)` in the field; zero when `k > n`.
pub fn binomial<S: Field>(n: u32, k: u32) -> S {
    if k > n {
        return S::zero();
    }
    let k = k.min(n - k);
    let mut acc = S::one();
    for i in 0..k {
        acc = acc * S::int((n - i) as i64) / S::int((i + 1) as i64);
    }
    acc
}

/// `(-1)^n`.
pub fn sign<S: Field>(n: u32) -> S {
    if n.is_multiple_of(2) {
        S::one()
    } else {
        -S::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(factorial::<Rational>(5), rat(120, 1));
        assert_eq!(binomial::<Rational>(6, 2), rat(15, 1));
        assert_eq!(binomial::<Rational>(2, 3), rat(0, 1));
        assert_eq!(binomial::<f64>(10, 5), 252.0);
    }

    #[test]
    fn rationals_are_reduced() {
        let a = rat(6, -4);
        assert_eq!(a.numer(), &BigInt::from(-3));
        assert_eq!(a.denom(), &BigInt::from(2));
        assert!(rat(0, 5).is_zero());
        assert_eq!(rat(0, 5).denom(), &BigInt::from(1));
    }
}
