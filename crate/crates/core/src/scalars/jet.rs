use super::{Coeff, Rational};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Value and first two `t`-derivatives of a function at one sample time,
/// with truncated Taylor arithmetic.
#[derive(Clone, PartialEq)]
pub struct Jet2<C> {
    pub v: C,
    pub d1: C,
    pub d2: C,
}

impl<C: Coeff> Jet2<C> {
    pub fn new(v: C, d1: C, d2: C) -> Self {
        Jet2 { v, d1, d2 }
    }

    pub fn constant(v: C) -> Self {
        Jet2 { v, d1: C::zero(), d2: C::zero() }
    }

    /// The jet of the identity function `t` at `t0`.
    pub fn variable(t0: C) -> Self {
        Jet2 { v: t0, d1: C::one(), d2: C::zero() }
    }

    /// The jet of the derivative, shifted down one order (last slot unknown, set to zero).
    pub fn derivative(&self) -> Self {
        Jet2 { v: self.d1.clone(), d1: self.d2.clone(), d2: C::zero() }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Jet2<D> {
        Jet2 { v: f(&self.v), d1: f(&self.d1), d2: f(&self.d2) }
    }

    pub fn sqrt(&self) -> Option<Self> {
        self.pow_rat(&Rational::new(1.into(), 2.into()))
    }
}

impl<C: Coeff> Add for Jet2<C> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Jet2 { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }
}

impl<C: Coeff> Sub for Jet2<C> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Jet2 { v: self.v - o.v, d1: self.d1 - o.d1, d2: self.d2 - o.d2 }
    }
}

impl<C: Coeff> Neg for Jet2<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet2 { v: -self.v, d1: -self.d1, d2: -self.d2 }
    }
}

impl<C: Coeff> Mul for Jet2<C> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let two = C::from_i64(2);
        Jet2 {
            v: self.v.clone() * o.v.clone(),
            d1: self.v.clone() * o.d1.clone() + self.d1.clone() * o.v.clone(),
            d2: self.v * o.d2 + two * self.d1 * o.d1 + self.d2 * o.v,
        }
    }
}

impl<C: Coeff> fmt::Debug for Jet2<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "jet({:?}, {:?}, {:?})", self.v, self.d1, self.d2)
    }
}

impl<C: Coeff> fmt::Display for Jet2<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "jet({}, {}, {})", self.v, self.d1, self.d2)
    }
}

impl<C: Coeff> Coeff for Jet2<C> {
    fn zero() -> Self {
        Jet2::constant(C::zero())
    }
    fn one() -> Self {
        Jet2::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero() && self.d1.is_zero() && self.d2.is_zero()
    }
    fn from_rational(q: &Rational) -> Self {
        Jet2::constant(C::from_rational(q))
    }
    fn try_inv(&self) -> Option<Self> {
        let w = self.v.try_inv()?;
        let w2 = w.clone() * w.clone();
        let d1 = -(self.d1.clone() * w2.clone());
        let d2 = C::from_i64(2) * self.d1.clone() * self.d1.clone() * w2.clone() * w.clone() - self.d2.clone() * w2;
        Some(Jet2 { v: w, d1, d2 })
    }
    /// Chain rule: with `P = v^p`, `(u^p)' = p P/v u'` and
    /// `(u^p)'' = p P/v u'' + p(p-1) P/v^2 u'^2`.
    fn pow_rat(&self, p: &Rational) -> Option<Self> {
        let pv = self.v.pow_rat(p)?;
        if self.d1.is_zero() && self.d2.is_zero() {
            return Some(Jet2::constant(pv));
        }
        let inv = self.v.try_inv()?;
        let pc = C::from_rational(p);
        let pm1 = C::from_rational(&(p - Rational::from_integer(1.into())));
        let first = pc.clone() * pv.clone() * inv.clone();
        let second = pc * pm1 * pv.clone() * inv.clone() * inv;
        Some(Jet2 {
            v: pv,
            d1: first.clone() * self.d1.clone(),
            d2: first * self.d2.clone() + second * self.d1.clone() * self.d1.clone(),
        })
    }
    fn to_f64(&self) -> Option<f64> {
        self.v.to_f64()
    }
    fn is_exact() -> bool {
        C::is_exact()
    }
    fn reduce_mod(&self, rel: &super::Relations) -> Self {
        self.map(|c| c.reduce_mod(rel))
    }
}

/// Error raised by [`jet_pow`] outside the domain of real powers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("jet power needs a positive base value, got {0}")]
pub struct JetDomainError(pub f64);

/// 2-jet of `base(t)^exponent` for a positive real base.
pub fn jet_pow(base: &Jet2<f64>, exponent: &Rational) -> Result<Jet2<f64>, JetDomainError> {
    if !(base.v > 0.0) {
        return Err(JetDomainError(base.v));
    }
    base.pow_rat(exponent).ok_or(JetDomainError(base.v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn close(a: &Jet2<f64>, b: (f64, f64, f64)) -> bool {
        (a.v - b.0).abs() < 1e-12 && (a.d1 - b.1).abs() < 1e-12 && (a.d2 - b.2).abs() < 1e-12
    }

    #[test]
    fn powers_of_affine_functions() {
        let j = Jet2::new(1.0, 4.0, 0.0);
        assert!(close(&jet_pow(&j, &rat(1, 2)).unwrap(), (1.0, 2.0, -4.0)));
        assert!(close(&jet_pow(&j, &rat(1, 1)).unwrap(), (1.0, 4.0, 0.0)));
        let k = Jet2::new(1.0, 5.0, 0.0);
        assert!(close(&jet_pow(&k, &rat(3, 5)).unwrap(), (1.0, 3.0, -6.0)));
        assert!(jet_pow(&Jet2::new(0.0, 1.0, 0.0), &rat(1, 2)).is_err());
        assert!(jet_pow(&Jet2::new(-1.0, 1.0, 0.0), &rat(1, 3)).is_err());
    }

    #[test]
    fn exact_jets_at_unit_value() {
        let j: Jet2<Rational> = Jet2::new(rat(1, 1), rat(5, 1), rat(0, 1));
        let p = j.pow_rat(&rat(-2, 5)).unwrap();
        assert_eq!(p, Jet2::new(rat(1, 1), rat(-2, 1), rat(14, 1)));
        let e: Jet2<Rational> = Jet2::new(rat(8, 1), rat(3, 1), rat(0, 1));
        let c = e.pow_rat(&rat(1, 3)).unwrap();
        assert_eq!(c.v, rat(2, 1));
        assert_eq!(c.d1, rat(1, 4));
    }

    #[test]
    fn product_and_quotient_rules() {
        let f: Jet2<Rational> = Jet2::new(rat(2, 1), rat(3, 1), rat(5, 1));
        let g: Jet2<Rational> = Jet2::new(rat(7, 1), rat(-1, 1), rat(4, 1));
        let fg = f.clone() * g.clone();
        assert_eq!(fg.d2, rat(2 * 4 + 2 * 3 * -1 + 5 * 7, 1));
        let q = f.clone() * g.try_inv().unwrap();
        assert_eq!(q * g, f);
    }
}
