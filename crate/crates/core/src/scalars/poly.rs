use super::rational::{exact_pow, rational_to_f64, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Multivariate Laurent polynomial with rational coefficients.
///
/// Variables are kept sorted and pruned when unused, and zero coefficients are
/// never stored, so derived `PartialEq` is equality of polynomials.
/// Negative exponents are allowed so that entries such as `a^2/r` can be
/// represented; this is the ring `Q[x, x^-1]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i32>, Rational>,
}

/// Square relations `v^2 = p` for radical variables such as `sqrt2^2 = 2`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Relations {
    rules: Vec<(String, Poly)>,
}

impl Relations {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: &str, square: Poly) -> Self {
        self.rules.push((var.to_string(), square));
        self
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> &[(String, Poly)] {
        &self.rules
    }

    pub fn merge(&self, other: &Relations) -> Relations {
        let mut out = self.clone();
        for (v, p) in &other.rules {
            if !out.rules.iter().any(|(w, _)| w == v) {
                out.rules.push((v.clone(), p.clone()));
            }
        }
        out
    }
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly { vars: Vec::new(), terms }
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(<Rational as One>::one(), &[(name, 1)])
    }

    pub fn monomial(c: Rational, powers: &[(&str, i32)]) -> Self {
        let mut map: BTreeMap<String, i32> = BTreeMap::new();
        for (v, e) in powers {
            *map.entry(v.to_string()).or_default() += e;
        }
        let vars: Vec<String> = map.keys().cloned().collect();
        let exps: Vec<i32> = map.values().copied().collect();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { vars, terms }.normalized()
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value if the polynomial is constant.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.vars.is_empty() {
            Some(self.terms.values().next().cloned().unwrap_or_else(<Rational as Zero>::zero))
        } else {
            None
        }
    }

    pub fn depends_on(&self, name: &str) -> bool {
        self.vars.iter().any(|v| v == name)
    }

    fn normalized(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.keys().any(|e| e[i] != 0))
            .collect();
        if used.iter().all(|u| *u) {
            return self;
        }
        let vars = self
            .vars
            .iter()
            .zip(&used)
            .filter(|(_, u)| **u)
            .map(|(v, _)| v.clone())
            .collect();
        let terms = self
            .terms
            .into_iter()
            .map(|(e, c)| {
                let e2 = e.iter().zip(&used).filter(|(_, u)| **u).map(|(x, _)| *x).collect();
                (e2, c)
            })
            .collect();
        Poly { vars, terms }
    }

    fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
        let set: BTreeSet<&String> = a.iter().chain(b.iter()).collect();
        set.into_iter().cloned().collect()
    }

    fn remap(&self, target: &[String]) -> BTreeMap<Vec<i32>, Rational> {
        if self.vars == target {
            return self.terms.clone();
        }
        let pos: Vec<usize> = self
            .vars
            .iter()
            .map(|v| target.iter().position(|t| t == v).expect("variable present in union"))
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = vec![0; target.len()];
                for (i, x) in e.iter().enumerate() {
                    e2[pos[i]] = *x;
                }
                (e2, c.clone())
            })
            .collect()
    }

    pub fn scale(&self, q: &Rational) -> Poly {
        if q.is_zero() {
            return Poly::zero();
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect(),
        }
    }

    /// Substitute rational values for some variables.
    pub fn subst(&self, bindings: &BTreeMap<String, Rational>) -> Poly {
        let images: BTreeMap<String, Poly> = bindings
            .iter()
            .map(|(k, v)| (k.clone(), Poly::constant(v.clone())))
            .collect();
        self.subst_poly(&images)
            .expect("rational substitution cannot fail for nonzero bindings")
    }

    /// Substitute polynomials for variables. Fails if a negative power is
    /// applied to a non-invertible image.
    pub fn subst_poly(&self, images: &BTreeMap<String, Poly>) -> Option<Poly> {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            let mut kept: Vec<(&str, i32)> = Vec::new();
            for (i, v) in self.vars.iter().enumerate() {
                let k = e[i];
                if k == 0 {
                    continue;
                }
                match images.get(v) {
                    Some(img) => {
                        let base = if k < 0 { super::Coeff::try_inv(img)? } else { img.clone() };
                        term = term * base.pow_u(k.unsigned_abs());
                    }
                    None => kept.push((v.as_str(), k)),
                }
            }
            if !kept.is_empty() {
                term = term * Poly::monomial(<Rational as One>::one(), &kept);
            }
            out = out + term;
        }
        Some(out)
    }

    pub fn pow_u(&self, n: u32) -> Poly {
        let mut acc = Poly::constant(<Rational as One>::one());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }

    /// Evaluate with float values for every variable.
    pub fn eval_f64(&self, values: &BTreeMap<String, f64>) -> Option<f64> {
        let mut sum = 0.0;
        for (e, c) in &self.terms {
            let mut t = rational_to_f64(c);
            for (i, v) in self.vars.iter().enumerate() {
                if e[i] != 0 {
                    t *= f64::powi(*values.get(v)?, e[i]);
                }
            }
            sum += t;
        }
        Some(sum)
    }

    /// Replace `v^k` (k >= 2) by `v^(k mod 2) * p^(k div 2)` for every rule
    /// `v^2 = p`, until no rule applies.
    pub fn reduce(&self, rel: &Relations) -> Poly {
        let mut cur = self.clone();
        for _ in 0..64 {
            let mut changed = false;
            for (v, sq) in &rel.rules {
                let Some(idx) = cur.vars.iter().position(|w| w == v) else {
                    continue;
                };
                if !cur.terms.keys().any(|e| e[idx] >= 2) {
                    continue;
                }
                changed = true;
                let mut next = Poly::zero();
                for (e, c) in &cur.terms {
                    let k = e[idx];
                    let mut rest = e.clone();
                    if k >= 2 {
                        rest[idx] = k % 2;
                        let head = Poly { vars: cur.vars.clone(), terms: BTreeMap::from([(rest, c.clone())]) };
                        next = next + head.normalized() * sq.pow_u((k / 2) as u32);
                    } else {
                        let head = Poly { vars: cur.vars.clone(), terms: BTreeMap::from([(rest, c.clone())]) };
                        next = next + head.normalized();
                    }
                }
                cur = next;
            }
            if !changed {
                break;
            }
        }
        cur
    }

    /// Flip the sign of a variable: the Galois conjugate for a radical.
    pub fn conjugate(&self, var: &str) -> Poly {
        let Some(idx) = self.vars.iter().position(|w| w == var) else {
            return self.clone();
        };
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), if e[idx] % 2 != 0 { -c } else { c.clone() }))
                .collect(),
        }
    }

    fn fmt_monomial(&self, e: &[i32], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, v) in self.vars.iter().enumerate() {
            if e[i] == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e[i] == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{}", e[i])?;
            }
        }
        Ok(())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        if rhs.terms.is_empty() {
            return self;
        }
        if self.terms.is_empty() {
            return rhs;
        }
        let vars = Poly::union_vars(&self.vars, &rhs.vars);
        let mut terms = self.remap(&vars);
        for (e, c) in rhs.remap(&vars) {
            let slot = terms.entry(e).or_insert_with(<Rational as Zero>::zero);
            *slot += c;
        }
        Poly { vars, terms }.normalized()
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { vars: self.vars, terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        if self.terms.is_empty() || rhs.terms.is_empty() {
            return Poly::zero();
        }
        let vars = Poly::union_vars(&self.vars, &rhs.vars);
        let a = self.remap(&vars);
        let b = rhs.remap(&vars);
        let mut terms: BTreeMap<Vec<i32>, Rational> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let slot = terms.entry(e).or_insert_with(<Rational as Zero>::zero);
                *slot += ca * cb;
            }
        }
        Poly { vars, terms }.normalized()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest total degree first, reads like hand-written polynomials.
        let mut ordered: Vec<(&Vec<i32>, &Rational)> = self.terms.iter().collect();
        ordered.sort_by(|(ea, _), (eb, _)| {
            let da: i32 = ea.iter().sum();
            let db: i32 = eb.iter().sum();
            db.cmp(&da).then_with(|| eb.cmp(ea))
        });
        for (k, (e, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let is_const = e.iter().all(|x| *x == 0);
            if is_const {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                self.fmt_monomial(e, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl super::Coeff for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::constant(<Rational as One>::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_rational(q: &Rational) -> Self {
        Poly::constant(q.clone())
    }
    /// Only monomials are units of a Laurent polynomial ring.
    fn try_inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(Poly {
            vars: self.vars.clone(),
            terms: BTreeMap::from([(e.iter().map(|x| -x).collect(), num_traits::Inv::inv(c.clone()))]),
        })
    }
    fn pow_rat(&self, p: &Rational) -> Option<Self> {
        if p.is_integer() {
            let n: i64 = num_traits::ToPrimitive::to_i64(p.numer())?;
            let base = if n < 0 { super::Coeff::try_inv(self)? } else { self.clone() };
            return Some(base.pow_u(n.unsigned_abs() as u32));
        }
        // A monomial with a perfect-power coefficient and divisible exponents.
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        let c2 = exact_pow(c, p)?;
        let mut e2 = Vec::with_capacity(e.len());
        for x in e {
            let q = Rational::from_integer((*x).into()) * p;
            if !q.is_integer() {
                return None;
            }
            e2.push(num_traits::ToPrimitive::to_i32(q.numer())?);
        }
        Some(Poly { vars: self.vars.clone(), terms: BTreeMap::from([(e2, c2)]) }.normalized())
    }
    fn to_f64(&self) -> Option<f64> {
        self.as_rational().map(|q| rational_to_f64(&q))
    }
    fn reduce_mod(&self, rel: &Relations) -> Self {
        self.reduce(rel)
    }
    /// Rationalize by multiplying through with radical conjugates.
    fn try_inv_mod(&self, rel: &Relations) -> Option<Self> {
        let x = self.reduce(rel);
        if let Some(inv) = super::Coeff::try_inv(&x) {
            return Some(inv);
        }
        let mut num = Poly::constant(<Rational as One>::one());
        let mut den = x;
        for (v, _) in &rel.rules {
            if !den.depends_on(v) {
                continue;
            }
            let conj = den.conjugate(v);
            num = (num * conj.clone()).reduce(rel);
            den = (den * conj).reduce(rel);
        }
        let inv = super::Coeff::try_inv(&den)?;
        Some((num * inv).reduce(rel))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, Coeff};

    fn r() -> Poly {
        Poly::var("r")
    }

    #[test]
    fn structural_equality_after_cancellation() {
        let p = r() * r() + Poly::var("a") - Poly::var("a");
        assert_eq!(p, r().pow_u(2));
        assert_eq!(p.variables(), &["r".to_string()]);
        assert!((r() - r()).is_zero());
        assert!((r() - r()).variables().is_empty());
    }

    #[test]
    fn substitution_examples() {
        let p = r() * r() + Poly::one();
        let b = BTreeMap::from([("r".to_string(), rat(1, 1))]);
        assert_eq!(p.subst(&b).as_rational(), Some(rat(2, 1)));
        let q = (r() * r() * Poly::from_i64(3) + Poly::one()).scale(&rat(-2, 1));
        assert_eq!(q.subst(&b).as_rational(), Some(rat(-8, 1)));
        let rho = Poly::var("rho");
        let c = (rho.clone() - Poly::from_i64(2)).pow_u(2).scale(&rat(1, 4));
        let b0 = BTreeMap::from([("rho".to_string(), rat(0, 1))]);
        assert_eq!(c.subst(&b0).as_rational(), Some(rat(1, 1)));
    }

    #[test]
    fn laurent_units() {
        let m = Poly::monomial(rat(150, 1), &[("r", 3)]);
        let inv = m.try_inv().unwrap();
        assert_eq!(m * inv, Poly::one());
        assert!((r() + Poly::one()).try_inv().is_none());
    }

    #[test]
    fn radical_reduction_and_inverse() {
        let rel = Relations::new().with("s2", Poly::from_i64(2));
        let s2 = Poly::var("s2");
        assert_eq!((s2.clone() * s2.clone() * s2.clone()).reduce(&rel), s2.scale(&rat(2, 1)));
        let x = Poly::one() + s2.clone();
        let inv = x.try_inv_mod(&rel).unwrap();
        assert_eq!((x * inv).reduce(&rel), Poly::one());
    }

    #[test]
    fn display_is_readable() {
        let p = r().pow_u(2).scale(&rat(-3, 1)) + Poly::var("a") * r().try_inv().unwrap() + Poly::from_i64(1);
        assert_eq!(p.to_string(), "-3*r^2 + a*r^-1 + 1");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn fractional_powers_of_monomials() {
        let p = Poly::monomial(rat(4, 9), &[("x", 2)]);
        assert_eq!(p.pow_rat(&rat(1, 2)), Some(Poly::monomial(rat(2, 3), &[("x", 1)])));
        assert_eq!(Poly::from_i64(8).pow_rat(&rat(1, 3)), Some(Poly::from_i64(2)));
        assert!((r() + Poly::one()).pow_rat(&rat(1, 2)).is_none());
    }
}
