//! Coefficient rings.
//!
//! Every higher-level object (forms, Lie algebras, connections) is generic over
//! [`Coeff`]. Three concrete rings matter: exact [`Rational`], Laurent
//! polynomials [`Poly`] in named parameters, and 2-jets [`Jet2`] of functions of
//! `t`. `f64` also implements [`Coeff`] so the numeric pipeline can reuse the
//! same code.

mod jet;
mod parse;
mod poly;
mod rational;
mod scalar;

pub use jet::{jet_pow, Jet2, JetDomainError};
pub use parse::{parse_poly, ParseError};
pub use poly::{Poly, Relations};
pub use rational::{parse_rational, rat, rational_to_f64, Rational};
pub use scalar::{Scalar, ScalarError};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A commutative ring with enough extra structure for the geometry code.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(q: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    /// Multiplicative inverse, if it exists in the ring.
    fn try_inv(&self) -> Option<Self>;

    /// `self^p` for a rational exponent, when the ring can represent it.
    fn pow_rat(&self, p: &Rational) -> Option<Self>;

    /// Best-effort conversion to a float (constants only for polynomials).
    fn to_f64(&self) -> Option<f64>;

    /// True when equality in this ring is exact.
    fn is_exact() -> bool {
        true
    }

    /// Normal form modulo square relations of radical variables.
    fn reduce_mod(&self, _rel: &Relations) -> Self {
        self.clone()
    }

    /// Inverse modulo square relations (rationalizing radicals if needed).
    fn try_inv_mod(&self, _rel: &Relations) -> Option<Self> {
        self.try_inv()
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    fn scale(&self, q: &Rational) -> Self {
        self.clone() * Self::from_rational(q)
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.try_inv().map(|inv| self.clone() * inv)
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }
    fn try_inv(&self) -> Option<Self> {
        if *self == 0.0 || !self.is_finite() {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn pow_rat(&self, p: &Rational) -> Option<Self> {
        let e = rational_to_f64(p);
        if *self > 0.0 {
            return Some(self.powf(e));
        }
        if *self == 0.0 {
            return if e > 0.0 { Some(0.0) } else { None };
        }
        // Odd roots of negative numbers stay real.
        let odd_denominator = p.denom() % 2u32 == 1u32.into();
        if odd_denominator {
            let odd_numerator = p.numer() % 2u32 != 0u32.into();
            let m = (-self).powf(e);
            Some(if odd_numerator { -m } else { m })
        } else {
            None
        }
    }
    fn to_f64(&self) -> Option<f64> {
        Some(*self)
    }
    fn is_exact() -> bool {
        false
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn try_inv(&self) -> Option<Self> {
        if num_traits::Zero::is_zero(self) {
            None
        } else {
            Some(num_traits::Inv::inv(self.clone()))
        }
    }
    fn pow_rat(&self, p: &Rational) -> Option<Self> {
        rational::exact_pow(self, p)
    }
    fn to_f64(&self) -> Option<f64> {
        Some(rational_to_f64(self))
    }
}
