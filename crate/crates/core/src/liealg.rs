//! Lie algebras given by Chevalley–Eilenberg differentials.
//!
//! Convention: `dα(X, Y) = -α([X, Y])`, so with `[E_i, E_j] = c^k_ij E_k` one
//! has `de^k = -Σ_{i<j} c^k_ij e^ij`.

use crate::exterior::{mask_indices, Form, Vector};
use crate::linalg::{det, inverse, rank_exact, row_basis};
use crate::scalars::{Coeff, Poly, Rational, Relations};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dim { expected: usize, got: usize },
    #[error("de^{0} is not a 2-form")]
    NotTwoForm(usize),
    #[error("basis change is singular (determinant {0})")]
    Singular(String),
}

#[derive(Clone, PartialEq)]
pub struct LieAlgebra<C> {
    dim: usize,
    d: Vec<Form<C>>,
}

impl<C: Coeff> LieAlgebra<C> {
    pub fn new(d: Vec<Form<C>>) -> Result<Self, LieError> {
        let dim = d.len();
        for (i, f) in d.iter().enumerate() {
            if f.dim() != dim {
                return Err(LieError::Dim { expected: dim, got: f.dim() });
            }
            if !f.is_zero() && f.degree() != Some(2) {
                return Err(LieError::NotTwoForm(i + 1));
            }
        }
        Ok(LieAlgebra { dim, d })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra { dim, d: vec![Form::zero(dim); dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `de^i`, 1-based.
    pub fn de(&self, i: usize) -> &Form<C> {
        &self.d[i - 1]
    }

    pub fn differentials(&self) -> &[Form<C>] {
        &self.d
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D + Copy) -> LieAlgebra<D> {
        LieAlgebra { dim: self.dim, d: self.d.iter().map(|x| x.map(f)).collect() }
    }

    pub fn try_map<D: Coeff, E>(&self, f: impl Fn(&C) -> Result<D, E> + Copy) -> Result<LieAlgebra<D>, E> {
        Ok(LieAlgebra { dim: self.dim, d: self.d.iter().map(|x| x.try_map(f)).collect::<Result<_, _>>()? })
    }

    /// The exterior derivative, extended from the `de^i` as an antiderivation.
    pub fn d_form(&self, a: &Form<C>) -> Form<C> {
        assert_eq!(a.dim(), self.dim, "form dimension does not match algebra");
        let mut out = Form::zero(self.dim);
        for (m, c) in a.terms() {
            // d(e^I) = Σ_m (-1)^m de^{i_m} ∧ e^{I \ i_m}; de^i has even degree.
            for (pos, i) in mask_indices(m).into_iter().enumerate() {
                let de = &self.d[i - 1];
                if de.is_zero() {
                    continue;
                }
                let rest = Form::basis(self.dim, &mask_indices(m & !(1 << (i - 1))));
                let piece = de.wedge(&rest).scale(c);
                out = if pos % 2 == 0 { out + piece } else { out - piece };
            }
        }
        out
    }

    /// Structure constant `c^k_ij`, with `[E_i, E_j] = Σ_k c^k_ij E_k`.
    pub fn structure_constant(&self, k: usize, i: usize, j: usize) -> C {
        -self.d[k - 1].coeff(&[i, j])
    }

    pub fn bracket(&self, x: &Vector<C>, y: &Vector<C>) -> Vector<C> {
        let comps = (0..self.dim)
            .map(|k| {
                // α([X,Y]) = -dα(X,Y)
                -self.d[k].contract(x).contract(y).coeff_mask(0)
            })
            .collect();
        Vector::new(comps)
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> Vector<C> {
        Vector::new((1..=self.dim).map(|k| self.structure_constant(k, i, j)).collect())
    }

    /// Symbolic Jacobi test: `d(de^i) = 0` as an identity in the coefficient ring.
    pub fn jacobi_check(&self) -> JacobiReport<C> {
        let failures: Vec<(usize, Form<C>)> = (1..=self.dim)
            .filter_map(|i| {
                let dd = self.d_form(&self.d[i - 1]);
                (!dd.is_zero()).then_some((i, dd))
            })
            .collect();
        JacobiReport { pass: failures.is_empty(), failures }
    }

    /// Append `e^{n+1}` with the given differential (a 2-form on the old coframe).
    pub fn extend(&self, de_new: &Form<C>) -> LieAlgebra<C> {
        assert_eq!(de_new.dim(), self.dim, "extension differential must live on the base coframe");
        let n = self.dim + 1;
        let mut d: Vec<Form<C>> = self.d.iter().map(|f| f.with_dim(n)).collect();
        d.push(de_new.with_dim(n));
        LieAlgebra { dim: n, d }
    }

    /// Algebra on `n+1` covectors with the extra one closed (product with a line).
    pub fn with_closed_extra(&self) -> LieAlgebra<C> {
        self.extend(&Form::zero(self.dim))
    }

    pub fn reduce_mod(&self, rel: &Relations) -> LieAlgebra<C> {
        LieAlgebra { dim: self.dim, d: self.d.iter().map(|f| f.reduce_mod(rel)).collect() }
    }
}

#[derive(Clone, PartialEq)]
pub struct JacobiReport<C> {
    pub pass: bool,
    /// `(i, d(de^i))` for every nonzero obstruction.
    pub failures: Vec<(usize, Form<C>)>,
}

impl<C: Coeff> std::fmt::Debug for LieAlgebra<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "LieAlgebra(dim {})", self.dim)?;
        for (i, d) in self.d.iter().enumerate() {
            writeln!(f, "  de{} = {}", i + 1, d)?;
        }
        Ok(())
    }
}

impl<C: Coeff> std::fmt::Debug for JacobiReport<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "JacobiReport {{ pass: {}, failures: {:?} }}", self.pass, self.failures)
    }
}

/// A coframe change `f^i = Σ_j B_ij e^j`, optionally involving radical
/// variables described by square relations.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisChange<C> {
    pub matrix: Vec<Vec<C>>,
    pub relations: Relations,
}

impl<C: Coeff> BasisChange<C> {
    pub fn new(matrix: Vec<Vec<C>>) -> Self {
        BasisChange { matrix, relations: Relations::new() }
    }

    pub fn with_relations(matrix: Vec<Vec<C>>, relations: Relations) -> Self {
        BasisChange { matrix, relations }
    }

    pub fn identity(n: usize) -> Self {
        BasisChange::new(crate::linalg::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn determinant(&self) -> C {
        det(&self.matrix, &self.relations)
    }

    /// The new covectors `f^i` written as 1-forms in the old coframe.
    pub fn new_in_old(&self) -> Vec<Form<C>> {
        let n = self.dim();
        self.matrix
            .iter()
            .map(|row| {
                let mut f = Form::zero(n);
                for (j, c) in row.iter().enumerate() {
                    f = f + Form::term(n, c.clone(), &[j + 1]);
                }
                f
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<BasisChange<C>, LieError> {
        let inv = inverse(&self.matrix, &self.relations).ok_or_else(|| LieError::Singular(self.determinant().to_string()))?;
        Ok(BasisChange { matrix: inv, relations: self.relations.clone() })
    }

    /// Composition: first `self` (e -> f), then `next` (f -> g).
    pub fn then(&self, next: &BasisChange<C>) -> BasisChange<C> {
        let rel = self.relations.merge(&next.relations);
        BasisChange { matrix: crate::linalg::mat_mul(&next.matrix, &self.matrix, &rel), relations: rel }
    }

    /// Express a form written in the new coframe `f` in the old coframe `e`.
    pub fn pull_back(&self, form_in_new: &Form<C>) -> Form<C> {
        form_in_new.substitute(&self.new_in_old()).reduce_mod(&self.relations)
    }
}

/// Differentials of `g` rewritten in the new coframe `f = B e`.
pub fn apply_basis_change<C: Coeff>(g: &LieAlgebra<C>, b: &BasisChange<C>) -> Result<LieAlgebra<C>, LieError> {
    if b.dim() != g.dim() {
        return Err(LieError::Dim { expected: g.dim(), got: b.dim() });
    }
    let inv = b.inverse()?;
    // e^j = Σ_k (B^-1)_jk f^k
    let old_in_new = inv.new_in_old();
    let rel = &b.relations;
    let d = b
        .matrix
        .iter()
        .map(|row| {
            let mut df = Form::zero(g.dim());
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    df = df + g.de(j + 1).scale(c);
                }
            }
            df.substitute(&old_in_new).reduce_mod(rel)
        })
        .collect();
    Ok(LieAlgebra { dim: g.dim(), d })
}

/// Check that `f = B e` carries `source` onto `target` without inverting `B`:
/// `Σ_j B_ij de^j = B^*(df^i)`. Returns the nonzero residuals.
pub fn check_basis_change<C: Coeff>(
    source: &LieAlgebra<C>,
    target: &LieAlgebra<C>,
    b: &BasisChange<C>,
) -> Vec<(usize, Form<C>)> {
    let n = source.dim();
    let rel = &b.relations;
    let images = b.new_in_old();
    let mut out = Vec::new();
    for (i, row) in b.matrix.iter().enumerate() {
        let mut lhs = Form::zero(n);
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
                lhs = lhs + source.de(j + 1).scale(c);
            }
        }
        let rhs = target.de(i + 1).substitute(&images);
        let diff = (lhs - rhs).reduce_mod(rel);
        if !diff.is_zero() {
            out.push((i + 1, diff));
        }
    }
    if b.determinant().reduce_mod(rel).is_zero() {
        out.push((0, Form::zero(n)));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolvabilityClass {
    pub derived_dims: Vec<usize>,
    pub lower_central_dims: Vec<usize>,
    pub solvable: bool,
    pub nilpotent: bool,
}

fn bracket_span(g: &LieAlgebra<Rational>, a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            let v = g.bracket(&Vector::new(x.clone()), &Vector::new(y.clone()));
            if !v.is_zero() {
                out.push(v.components);
            }
        }
    }
    row_basis(&out)
}

fn series(g: &LieAlgebra<Rational>, lower: bool) -> Vec<usize> {
    let full: Vec<Vec<Rational>> = (1..=g.dim()).map(|i| Vector::basis(g.dim(), i).components).collect();
    let mut cur = full.clone();
    let mut dims = vec![cur.len()];
    loop {
        let next = if lower { bracket_span(g, &full, &cur) } else { bracket_span(g, &cur, &cur) };
        if next.len() == cur.len() {
            break;
        }
        dims.push(next.len());
        cur = next;
        if cur.is_empty() {
            break;
        }
    }
    dims
}

pub fn solvability_class(g: &LieAlgebra<Rational>) -> SolvabilityClass {
    let derived_dims = series(g, false);
    let lower_central_dims = series(g, true);
    SolvabilityClass {
        solvable: derived_dims.last() == Some(&0),
        nilpotent: lower_central_dims.last() == Some(&0),
        derived_dims,
        lower_central_dims,
    }
}

/// Dimension of the center.
pub fn center(g: &LieAlgebra<Rational>) -> usize {
    let n = g.dim();
    // Equations Σ_i X^i c^k_ij = 0 for every (j, k).
    let mut rows = Vec::new();
    for j in 1..=n {
        for k in 1..=n {
            rows.push((1..=n).map(|i| g.structure_constant(k, i, j)).collect::<Vec<_>>());
        }
    }
    n - rank_exact(rows)
}

impl LieAlgebra<Poly> {
    /// Specialize parameters; fails if some variable stays unbound.
    pub fn to_rational(&self, bindings: &BTreeMap<String, Rational>) -> Option<LieAlgebra<Rational>> {
        self.try_map(|p| p.subst(bindings).as_rational().ok_or(())).ok()
    }

    pub fn subst(&self, bindings: &BTreeMap<String, Rational>) -> LieAlgebra<Poly> {
        self.map(|p| p.subst(bindings))
    }
}

impl LieAlgebra<Rational> {
    pub fn to_poly(&self) -> LieAlgebra<Poly> {
        self.map(|q| Poly::constant(q.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn e(n: usize, idx: &[usize], c: i64) -> Form<Rational> {
        Form::term(n, rat(c, 1), idx)
    }

    fn nilmanifold() -> LieAlgebra<Rational> {
        let mut d = vec![Form::zero(6); 6];
        d[4] = e(6, &[1, 4], -2) + e(6, &[2, 3], -2);
        d[5] = e(6, &[1, 3], -2) + e(6, &[2, 4], 2);
        LieAlgebra::new(d).unwrap()
    }

    #[test]
    fn d_of_e56_on_nilmanifold() {
        let g = nilmanifold();
        let got = g.d_form(&Form::basis(6, &[5, 6]));
        let expect = e(6, &[1, 3, 5], 2) - e(6, &[1, 4, 6], 2) - e(6, &[2, 3, 6], 2) - e(6, &[2, 4, 5], 2);
        assert_eq!(got, expect);
        assert!(g.jacobi_check().pass);
    }

    #[test]
    fn brackets_follow_convention() {
        // h1: de5 = -e14 - e23  <=>  [E1,E4] = [E2,E3] = E5
        let mut d = vec![Form::zero(5); 5];
        d[4] = e(5, &[1, 4], -1) + e(5, &[2, 3], -1);
        let h1 = LieAlgebra::new(d).unwrap();
        assert_eq!(h1.basis_bracket(1, 4), Vector::basis(5, 5));
        assert_eq!(h1.basis_bracket(2, 3), Vector::basis(5, 5));
        assert_eq!(center(&h1), 1);
        let c = solvability_class(&h1);
        assert!(c.nilpotent);
        assert_eq!(c.derived_dims, vec![5, 1, 0]);
    }

    #[test]
    fn abelian_invariants() {
        let a = LieAlgebra::<Rational>::abelian(5);
        assert!(a.jacobi_check().pass);
        assert_eq!(center(&a), 5);
        let c = solvability_class(&a);
        assert_eq!(c.derived_dims, vec![5, 0]);
        assert!(c.nilpotent && c.solvable);
    }

    #[test]
    fn identity_change_is_trivial() {
        let g = nilmanifold();
        let h = apply_basis_change(&g, &BasisChange::identity(6)).unwrap();
        assert_eq!(g, h);
        assert!(check_basis_change(&g, &g, &BasisChange::identity(6)).is_empty());
    }

    #[test]
    fn singular_change_rejected() {
        let g = nilmanifold();
        let mut m = crate::linalg::identity::<Rational>(6);
        m[0][0] = rat(0, 1);
        assert!(matches!(apply_basis_change(&g, &BasisChange::new(m)), Err(LieError::Singular(_))));
    }
}
