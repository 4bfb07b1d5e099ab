use super::{Coeff, Jet2, Poly, Rational};
use std::fmt;

/// A coefficient tagged with its ring, for values whose ring is only known at
/// run time (parsed files, command-line input).
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(Rational),
    Poly(Poly),
    Jet(Jet2<f64>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("cannot combine {0} with {1}")]
    RingMismatch(&'static str, &'static str),
    #[error("division by a non-invertible {0}")]
    NotInvertible(&'static str),
}

impl Scalar {
    pub fn ring(&self) -> &'static str {
        match self {
            Scalar::Rational(_) => "rational",
            Scalar::Poly(_) => "polynomial",
            Scalar::Jet(_) => "jet",
        }
    }

    /// Bring two scalars into a common ring. Only rationals are promoted.
    fn unify(a: &Scalar, b: &Scalar) -> Result<(Scalar, Scalar), ScalarError> {
        use Scalar::*;
        Ok(match (a, b) {
            (Rational(_), Rational(_)) | (Poly(_), Poly(_)) | (Jet(_), Jet(_)) => (a.clone(), b.clone()),
            (Rational(x), Poly(_)) => (Poly(super::Poly::constant(x.clone())), b.clone()),
            (Poly(_), Rational(y)) => (a.clone(), Poly(super::Poly::constant(y.clone()))),
            (Rational(x), Jet(_)) => (Jet(Jet2::from_rational(x)), b.clone()),
            (Jet(_), Rational(y)) => (a.clone(), Jet(Jet2::from_rational(y))),
            _ => return Err(ScalarError::RingMismatch(a.ring(), b.ring())),
        })
    }

    fn binary(
        &self,
        other: &Scalar,
        fq: impl Fn(Rational, Rational) -> Rational,
        fp: impl Fn(Poly, Poly) -> Poly,
        fj: impl Fn(Jet2<f64>, Jet2<f64>) -> Jet2<f64>,
    ) -> Result<Scalar, ScalarError> {
        match Scalar::unify(self, other)? {
            (Scalar::Rational(x), Scalar::Rational(y)) => Ok(Scalar::Rational(fq(x, y))),
            (Scalar::Poly(x), Scalar::Poly(y)) => Ok(Scalar::Poly(fp(x, y))),
            (Scalar::Jet(x), Scalar::Jet(y)) => Ok(Scalar::Jet(fj(x, y))),
            _ => unreachable!("unify returns a common ring"),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(other, |x, y| x + y, |x, y| x + y, |x, y| x + y)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(other, |x, y| x - y, |x, y| x - y, |x, y| x - y)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(other, |x, y| x * y, |x, y| x * y, |x, y| x * y)
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let inv = match other {
            Scalar::Rational(q) => Scalar::Rational(q.try_inv().ok_or(ScalarError::NotInvertible("rational"))?),
            Scalar::Poly(p) => Scalar::Poly(p.try_inv().ok_or(ScalarError::NotInvertible("polynomial"))?),
            Scalar::Jet(j) => Scalar::Jet(j.try_inv().ok_or(ScalarError::NotInvertible("jet"))?),
        };
        self.try_mul(&inv)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => Coeff::is_zero(q),
            Scalar::Poly(p) => p.is_zero(),
            Scalar::Jet(j) => j.is_zero(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Poly(p) => write!(f, "{p}"),
            Scalar::Jet(j) => write!(f, "{j}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    #[test]
    fn promotion_only_from_rationals() {
        let q = Scalar::Rational(rat(1, 2));
        let p = Scalar::Poly(Poly::var("r"));
        let j = Scalar::Jet(Jet2::new(1.0, 2.0, 0.0));
        assert_eq!(q.try_mul(&p).unwrap(), Scalar::Poly(Poly::var("r").scale(&rat(1, 2))));
        assert_eq!(j.try_add(&q).unwrap(), Scalar::Jet(Jet2::new(1.5, 2.0, 0.0)));
        assert!(matches!(p.try_add(&j), Err(ScalarError::RingMismatch(_, _))));
        assert!(q.try_div(&Scalar::Rational(rat(0, 1))).is_err());
    }
}
