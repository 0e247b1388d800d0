//! Ground-field scalars.
//!
//! The linear-algebra core ([`crate::matrix`], [`crate::graded`]) is generic
//! over [`Scalar`]; everything algebra-level instantiates it at [`Rat`],
//! arbitrary-precision rationals, so all ranks and homology classes are exact.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A field scalar: exact division, no rounding assumptions made anywhere.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;
}

impl Scalar for f32 {
    fn from_int(n: i64) -> Self {
        n as f32
    }
}

impl Scalar for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
}

impl Scalar for num_rational::BigRational {
    fn from_int(n: i64) -> Self {
        num_rational::BigRational::from_integer(BigInt::from(n))
    }
}

/// The exact rational scalar used by every algebraic module.
///
/// `BigRational` keeps values in lowest terms with a positive denominator,
/// which is exactly the invariant the rest of the crate relies on.
pub type Rat = num_rational::BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Fraction n/d as a rational. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced() {
        let x = frac(2, 4);
        assert_eq!(x, frac(1, 2));
        let y = frac(1, -3);
        assert_eq!(y, frac(-1, 3));
        assert!(y.denom() > &BigInt::from(0));
    }

    #[test]
    fn exact_arithmetic() {
        let third = frac(1, 3);
        let sum = third.clone() + third.clone() + third;
        assert_eq!(sum, rat(1));
    }
}
