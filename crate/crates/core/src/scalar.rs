//! The scalar abstraction shared by all algebraic modules.
//!
//! Exact computations run over [`QuadNum`] (the field `Q(ν)` with `ν² ∈ Q₊`);
//! numeric evaluation runs over `f64` or `Complex64`. Which one is used is a
//! property of the computation, fixed by the type parameter.

use std::fmt::Debug;
use std::ops::{Div, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::quad::QuadNum;

/// Relative size below which a floating coefficient counts as zero.
pub const FLOAT_ZERO_TOL: f64 = 1e-11;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Div<Output = Self>
{
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    fn from_rational(q: &BigRational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into()))
    }

    fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&BigRational::new(n.into(), d.into()))
    }

    /// Complex conjugate. ν is real, so exact values are self-conjugate.
    fn conj(&self) -> Self;

    fn to_complex(&self) -> Complex64;

    /// Zero test: exact for exact types, tolerance based otherwise.
    fn is_negligible(&self) -> bool;

    fn powi(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for QuadNum {
    const EXACT: bool = true;

    fn from_rational(q: &BigRational) -> Self {
        QuadNum::rational(q.clone())
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn conj(&self) -> Self {
        *self
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }

    fn is_negligible(&self) -> bool {
        self.abs() < FLOAT_ZERO_TOL
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn is_negligible(&self) -> bool {
        self.norm() < FLOAT_ZERO_TOL
    }
}

/// Generalized binomial coefficient `x(x−1)⋯(x−k+1)/k!`.
pub fn binomial<S: Scalar>(x: &S, k: u32) -> S {
    let mut acc = S::one();
    for i in 0..k {
        acc = acc * (x.clone() - S::from_i64(i as i64)) / S::from_i64(i as i64 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generalized_binomials() {
        let x = QuadNum::ratio(1, 2);
        // (1/2)(−1/2)/2 = −1/8
        assert_eq!(binomial(&x, 2), QuadNum::ratio(-1, 8));
        assert_eq!(binomial(&QuadNum::from_int(5), 2), QuadNum::from_int(10));
        assert_eq!(binomial(&QuadNum::from_int(1), 3), QuadNum::zero());
        assert_eq!(binomial(&-QuadNum::from_int(2), 3), QuadNum::from_int(-4));
        assert!((binomial(&2.5f64, 2) - 1.875).abs() < 1e-15);
    }
}
