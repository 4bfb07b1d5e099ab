//! Exterior algebra over a fixed coframe `e^1..e^n` (n <= 8).
//!
//! Basis monomials are stored as bit masks, bit `i-1` standing for `e^i`, which
//! makes shuffle signs a popcount. Wedge uses the determinant convention:
//! `(e^i ∧ e^j)(X, Y) = e^i(X) e^j(Y) - e^i(Y) e^j(X)`.

use crate::linalg::{rank_exact, rank_float, FloatRank};
use crate::scalars::{Coeff, Rational};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

pub const MAX_DIM: usize = 8;

pub type Mask = u16;

/// Sign of `e^a ∧ e^b` relative to the sorted monomial, or 0 if they overlap.
pub fn shuffle_sign(a: Mask, b: Mask) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn mask_indices(m: Mask) -> Vec<usize> {
    (0..16).filter(|i| m & (1 << i) != 0).map(|i| i + 1).collect()
}

/// A (possibly mixed-degree) exterior form.
#[derive(Clone, PartialEq)]
pub struct Form<C> {
    dim: usize,
    terms: BTreeMap<Mask, C>,
}

impl<C: Coeff> Form<C> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        Form { dim, terms: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, c: C) -> Self {
        let mut f = Form::zero(dim);
        f.add_term(0, c);
        f
    }

    /// `c · e^{i1} ∧ ... ∧ e^{ik}` for 1-based indices in any order.
    pub fn term(dim: usize, c: C, indices: &[usize]) -> Self {
        let mut f = Form::zero(dim);
        let mut mask: Mask = 0;
        let mut sign = 1;
        for &i in indices {
            assert!(i >= 1 && i <= dim, "index {i} out of range 1..={dim}");
            let bit = 1 << (i - 1);
            sign *= shuffle_sign(mask, bit);
            if sign == 0 {
                return f;
            }
            mask |= bit;
        }
        let c = if sign < 0 { -c } else { c };
        f.add_term(mask, c);
        f
    }

    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        Form::term(dim, C::one(), indices)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mask, &C)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn add_term(&mut self, mask: Mask, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&mask) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(mask, s);
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    pub fn coeff(&self, indices: &[usize]) -> C {
        let probe = Form::<C>::basis(self.dim, indices);
        match probe.terms.iter().next() {
            Some((m, s)) => self.terms.get(m).map(|c| c.clone() * s.clone()).unwrap_or_else(C::zero),
            None => C::zero(),
        }
    }

    pub fn coeff_mask(&self, m: Mask) -> C {
        self.terms.get(&m).cloned().unwrap_or_else(C::zero)
    }

    /// Degree if homogeneous (the zero form reports `None`).
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.count_ones() as usize);
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Form::zero(self.dim);
        for (m, x) in &self.terms {
            out.add_term(*m, x.clone() * c.clone());
        }
        out
    }

    pub fn scale_rat(&self, q: &Rational) -> Self {
        self.scale(&C::from_rational(q))
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        let mut out = Form::zero(self.dim);
        for (m, x) in &self.terms {
            out.add_term(*m, f(x));
        }
        out
    }

    pub fn try_map<D: Coeff, E>(&self, f: impl Fn(&C) -> Result<D, E>) -> Result<Form<D>, E> {
        let mut out = Form::zero(self.dim);
        for (m, x) in &self.terms {
            out.add_term(*m, f(x)?);
        }
        Ok(out)
    }

    /// Reinterpret on a coframe with more (or equally many) covectors.
    pub fn with_dim(&self, dim: usize) -> Self {
        assert!(dim <= MAX_DIM);
        let limit: Mask = if dim >= 16 { Mask::MAX } else { (1 << dim) - 1 };
        assert!(self.terms.keys().all(|m| m & !limit == 0), "form uses indices beyond {dim}");
        Form { dim, terms: self.terms.clone() }
    }

    pub fn wedge(&self, other: &Form<C>) -> Form<C> {
        assert_eq!(self.dim, other.dim, "wedge of forms of different dimension");
        let mut out = Form::zero(self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let s = shuffle_sign(*a, *b);
                if s == 0 {
                    continue;
                }
                let p = ca.clone() * cb.clone();
                out.add_term(a | b, if s < 0 { -p } else { p });
            }
        }
        out
    }

    /// Interior product `i_X`.
    pub fn contract(&self, x: &Vector<C>) -> Form<C> {
        assert_eq!(self.dim, x.dim(), "contraction with vector of different dimension");
        let mut out = Form::zero(self.dim);
        for (m, c) in &self.terms {
            for i in 0..self.dim {
                let bit: Mask = 1 << i;
                if m & bit == 0 || x.components[i].is_zero() {
                    continue;
                }
                let pos = (m & (bit - 1)).count_ones();
                let v = c.clone() * x.components[i].clone();
                out.add_term(m & !bit, if pos % 2 == 1 { -v } else { v });
            }
        }
        out
    }

    /// `a(X1, ..., Xk)` for a homogeneous k-form.
    pub fn eval(&self, vectors: &[Vector<C>]) -> Result<C, FormError> {
        if let Some(d) = self.degree() {
            if d != vectors.len() {
                return Err(FormError::Arity { degree: d, given: vectors.len() });
            }
        } else if !self.is_zero() {
            return Err(FormError::MixedDegree);
        }
        let mut cur = self.clone();
        for v in vectors {
            cur = cur.contract(v);
        }
        Ok(cur.coeff_mask(0))
    }

    /// Replace each `e^i` by `images[i-1]` (a 1-form on a possibly different
    /// coframe) and expand. This is the pullback under a linear coframe map.
    pub fn substitute(&self, images: &[Form<C>]) -> Form<C> {
        assert_eq!(images.len(), self.dim, "need one image per covector");
        let target_dim = images.first().map(|f| f.dim).unwrap_or(self.dim);
        let mut out = Form::zero(target_dim);
        for (m, c) in &self.terms {
            let mut prod = Form::scalar(target_dim, c.clone());
            for i in mask_indices(*m) {
                prod = prod.wedge(&images[i - 1]);
            }
            out = out + prod;
        }
        out
    }

    /// Pullback along an inclusion that drops covector `k` (terms containing
    /// `e^k` vanish) and renumbers the remaining ones consecutively.
    pub fn drop_index(&self, k: usize) -> Form<C> {
        let bit: Mask = 1 << (k - 1);
        let low: Mask = bit - 1;
        let mut out = Form::zero(self.dim - 1);
        for (m, c) in &self.terms {
            if m & bit != 0 {
                continue;
            }
            let nm = (m & low) | ((m >> 1) & !low);
            out.add_term(nm, c.clone());
        }
        out
    }

    pub fn reduce_mod(&self, rel: &crate::scalars::Relations) -> Form<C> {
        self.map(|c| c.reduce_mod(rel))
    }

    /// Largest absolute coefficient, for residual reports.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("form of degree {degree} evaluated on {given} vectors")]
    Arity { degree: usize, given: usize },
    #[error("evaluation of a mixed-degree form")]
    MixedDegree,
}

impl<C: Coeff> Add for Form<C> {
    type Output = Form<C>;
    fn add(mut self, o: Form<C>) -> Form<C> {
        assert_eq!(self.dim, o.dim, "sum of forms of different dimension");
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<C: Coeff> Neg for Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        Form { dim: self.dim, terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<C: Coeff> Sub for Form<C> {
    type Output = Form<C>;
    fn sub(self, o: Form<C>) -> Form<C> {
        self + (-o)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: Mask) -> fmt::Result {
    if m == 0 {
        return Ok(());
    }
    write!(f, "e")?;
    for i in mask_indices(m) {
        write!(f, "{i}")?;
    }
    Ok(())
}

/// Monomials sorted by degree, then lexicographically by index tuple.
pub fn display_order(m: Mask) -> (u32, Vec<usize>) {
    (m.count_ones(), mask_indices(m))
}

impl<C: Coeff> fmt::Display for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<Mask> = self.terms.keys().copied().collect();
        keys.sort_by_key(|m| display_order(*m));
        for (k, m) in keys.into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let c = &self.terms[&m];
            let text = c.to_string();
            if m == 0 {
                write!(f, "{text}")?;
            } else if text == "1" {
                write_monomial(f, m)?;
            } else if text == "-1" {
                write!(f, "-")?;
                write_monomial(f, m)?;
            } else if text.contains([' ', '+']) || text[1..].contains('-') {
                write!(f, "({text}) ")?;
                write_monomial(f, m)?;
            } else {
                write!(f, "{text} ")?;
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}]({self})", self.dim)
    }
}

/// A vector in the dual basis `E_1..E_n`.
#[derive(Clone, PartialEq, Debug)]
pub struct Vector<C> {
    pub components: Vec<C>,
}

impl<C: Coeff> Vector<C> {
    pub fn new(components: Vec<C>) -> Self {
        Vector { components }
    }

    pub fn zero(dim: usize) -> Self {
        Vector { components: vec![C::zero(); dim] }
    }

    /// `E_i`, 1-based.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Vector::zero(dim);
        v.components[i - 1] = C::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn scale(&self, c: &C) -> Self {
        Vector { components: self.components.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn add(&self, o: &Vector<C>) -> Self {
        Vector { components: self.components.iter().zip(&o.components).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }
}

/// Coefficient rows of a list of forms over the union of their monomials.
pub fn coefficient_rows<C: Coeff>(forms: &[Form<C>]) -> Vec<Vec<C>> {
    let mut cols: Vec<Mask> = forms.iter().flat_map(|f| f.terms.keys().copied()).collect();
    cols.sort_unstable();
    cols.dedup();
    forms.iter().map(|f| cols.iter().map(|m| f.coeff_mask(*m)).collect()).collect()
}

/// Exact rank of the span of rational forms.
pub fn span_rank_exact(forms: &[Form<Rational>]) -> usize {
    if forms.is_empty() {
        return 0;
    }
    rank_exact(coefficient_rows(forms))
}

/// Default relative pivot threshold for float ranks.
pub const DEFAULT_PIVOT_THRESHOLD: f64 = 1e-8;

/// Float rank with pivot diagnostics.
pub fn span_rank_float(forms: &[Form<f64>], threshold: f64) -> FloatRank {
    if forms.is_empty() {
        return FloatRank::empty();
    }
    rank_float(coefficient_rows(forms), threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    type F = Form<Rational>;

    fn e(idx: &[usize]) -> F {
        F::basis(6, idx)
    }

    #[test]
    fn wedge_examples() {
        let w1 = e(&[1, 2]) + e(&[3, 4]);
        let w2 = e(&[1, 3]) + e(&[4, 2]);
        assert_eq!(w1.wedge(&w1), e(&[1, 2, 3, 4]).scale_rat(&rat(2, 1)));
        assert!(w1.wedge(&w2).is_zero());
        assert!(e(&[1, 4]).wedge(&e(&[1, 4])).is_zero());
        assert_eq!(e(&[2, 1]), -e(&[1, 2]));
    }

    #[test]
    fn contraction_examples() {
        let x = Vector::basis(6, 6);
        assert_eq!(e(&[5, 6]).contract(&x), -e(&[5]));
        let f = e(&[1, 2]) + e(&[3, 4]) + e(&[5, 6]);
        assert_eq!(-f.contract(&x), e(&[5]));
        let psi_plus = (e(&[1, 3]) + e(&[4, 2])).wedge(&e(&[5])) - (e(&[1, 4]) + e(&[2, 3])).wedge(&e(&[6]));
        assert_eq!(-psi_plus.contract(&x), e(&[1, 4]) + e(&[2, 3]));
        assert!(F::scalar(6, rat(3, 1)).contract(&x).is_zero());
    }

    #[test]
    fn evaluation_examples() {
        let v = |i| Vector::basis(5, i);
        let f = F::basis(5, &[1, 4]);
        assert_eq!(f.eval(&[v(1), v(4)]).unwrap(), rat(1, 1));
        assert_eq!(f.eval(&[v(4), v(1)]).unwrap(), rat(-1, 1));
        let de5 = F::basis(5, &[1, 4]).scale_rat(&rat(-2, 1)) - F::basis(5, &[2, 3]).scale_rat(&rat(2, 1));
        assert_eq!(de5.eval(&[v(1), v(4)]).unwrap(), rat(-2, 1));
        assert!(f.eval(&[v(1)]).is_err());
    }

    #[test]
    fn rank_examples() {
        let a = e(&[1, 2]);
        let b = e(&[3, 4]);
        assert_eq!(span_rank_exact(&[a.clone(), b.clone(), a + b]), 2);
        assert_eq!(span_rank_exact(&[]), 0);
    }

    #[test]
    fn drop_index_renumbers() {
        let f = e(&[1, 6]) + e(&[5, 4]) + e(&[2, 3]);
        let g = f.drop_index(4);
        assert_eq!(g, Form::basis(5, &[1, 5]) + Form::basis(5, &[2, 3]));
    }

    #[test]
    fn display() {
        let f = e(&[1, 2]).scale_rat(&rat(-2, 1)) + e(&[3, 5]);
        assert_eq!(f.to_string(), "-2 e12 + e35");
    }
}
