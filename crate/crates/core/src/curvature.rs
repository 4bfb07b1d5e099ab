//! Left-invariant Riemannian geometry on a metric Lie algebra.
//!
//! Conventions: `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]` and
//! `Ric(Y,Z) = tr(X ↦ R(X,Y)Z)`. With these, F4 at `a = b = 0` has
//! `Ric(e5,e5) = +4`.

use crate::exterior::{Form, Vector};
use crate::liealg::LieAlgebra;
use crate::linalg;
use crate::scalars::{Coeff, Rational, Relations};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurvatureError {
    #[error("metric has size {got}, algebra has dimension {expected}")]
    Dim { expected: usize, got: usize },
    #[error("metric is not symmetric")]
    NotSymmetric,
    #[error("metric is not invertible")]
    Singular,
}

/// Gram matrix of the frame `E_1..E_n` dual to the coframe.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric<C> {
    gram: Vec<Vec<C>>,
    inverse: Vec<Vec<C>>,
}

impl<C: Coeff> Metric<C> {
    pub fn identity(n: usize) -> Self {
        Metric { gram: linalg::identity(n), inverse: linalg::identity(n) }
    }

    pub fn new(gram: Vec<Vec<C>>) -> Result<Self, CurvatureError> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(CurvatureError::Dim { expected: n, got: row.len() });
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(CurvatureError::NotSymmetric);
                }
            }
        }
        let inverse = linalg::inverse(&gram, &Relations::new()).ok_or(CurvatureError::Singular)?;
        Ok(Metric { gram, inverse })
    }

    pub fn diagonal(d: Vec<C>) -> Result<Self, CurvatureError> {
        let n = d.len();
        let mut gram = linalg::identity::<C>(n);
        for (i, c) in d.into_iter().enumerate() {
            gram[i][i] = c;
        }
        Metric::new(gram)
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<C>] {
        &self.gram
    }

    pub fn inner(&self, x: &Vector<C>, y: &Vector<C>) -> C {
        let mut acc = C::zero();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if !self.gram[i][j].is_zero() {
                    acc = acc + x.components[i].clone() * self.gram[i][j].clone() * y.components[j].clone();
                }
            }
        }
        acc
    }

    /// Vector dual to a 1-form.
    pub fn sharp(&self, alpha: &Form<C>) -> Vector<C> {
        let n = self.dim();
        let a: Vec<C> = (1..=n).map(|i| alpha.coeff(&[i])).collect();
        Vector::new((0..n).map(|k| (0..n).fold(C::zero(), |acc, j| acc + self.inverse[k][j].clone() * a[j].clone())).collect())
    }

    /// Vector with components `g^{kl} w_l` for the covector `w`.
    fn raise(&self, w: &[C]) -> Vector<C> {
        let n = self.dim();
        Vector::new((0..n).map(|k| (0..n).fold(C::zero(), |acc, l| acc + self.inverse[k][l].clone() * w[l].clone())).collect())
    }
}

impl Metric<Rational> {
    /// Sylvester's criterion on leading minors.
    pub fn is_positive_definite(&self) -> bool {
        (1..=self.dim()).all(|k| {
            let m: Vec<Vec<Rational>> = self.gram[..k].iter().map(|r| r[..k].to_vec()).collect();
            linalg::det(&m, &Relations::new()) > Rational::from_integer(0.into())
        })
    }
}

/// `gamma[i][j][k]`: the `E_k` component of `∇_{E_i} E_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionCoeffs<C> {
    pub gamma: Vec<Vec<Vec<C>>>,
}

fn check_dim<C: Coeff>(g: &LieAlgebra<C>, m: &Metric<C>) -> Result<(), CurvatureError> {
    if g.dim() != m.dim() {
        return Err(CurvatureError::Dim { expected: g.dim(), got: m.dim() });
    }
    Ok(())
}

/// Bracket coefficients `[E_i, E_j] = Σ_k c[i][j][k] E_k`.
fn brackets<C: Coeff>(g: &LieAlgebra<C>) -> Vec<Vec<Vec<C>>> {
    let n = g.dim();
    (1..=n)
        .map(|i| (1..=n).map(|j| (1..=n).map(|k| g.structure_constant(k, i, j)).collect()).collect())
        .collect()
}

/// Koszul formula on left-invariant fields.
pub fn levi_civita<C: Coeff>(g: &LieAlgebra<C>, m: &Metric<C>) -> Result<ConnectionCoeffs<C>, CurvatureError> {
    check_dim(g, m)?;
    let n = g.dim();
    let c = brackets(g);
    // <[E_a, E_b], E_c>
    let cl: Vec<Vec<Vec<C>>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| (0..n).map(|cc| (0..n).fold(C::zero(), |acc, k| acc + c[a][b][k].clone() * m.gram[k][cc].clone())).collect())
                .collect()
        })
        .collect();
    let half = crate::scalars::rat(1, 2);
    let gamma = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let lowered: Vec<C> = (0..n)
                        .map(|k| (cl[i][j][k].clone() - cl[j][k][i].clone() + cl[k][i][j].clone()).scale(&half))
                        .collect();
                    m.raise(&lowered).components
                })
                .collect()
        })
        .collect();
    Ok(ConnectionCoeffs { gamma })
}

impl<C: Coeff> ConnectionCoeffs<C> {
    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    /// `∇_X Y` for left-invariant `X, Y`.
    pub fn nabla(&self, x: &Vector<C>, y: &Vector<C>) -> Vector<C> {
        let n = self.dim();
        let mut out = vec![C::zero(); n];
        for i in 0..n {
            if x.components[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y.components[j].is_zero() {
                    continue;
                }
                let w = x.components[i].clone() * y.components[j].clone();
                for (k, o) in out.iter_mut().enumerate() {
                    if !self.gamma[i][j][k].is_zero() {
                        *o = o.clone() + w.clone() * self.gamma[i][j][k].clone();
                    }
                }
            }
        }
        Vector::new(out)
    }
}

/// `r[i][j][k][l]`: the `E_l` component of `R(E_i, E_j) E_k`.
pub fn riemann_tensor<C: Coeff>(g: &LieAlgebra<C>, gamma: &ConnectionCoeffs<C>) -> Vec<Vec<Vec<Vec<C>>>> {
    let n = g.dim();
    let c = brackets(g);
    let gm = &gamma.gamma;
    let mut r = vec![vec![vec![vec![C::zero(); n]; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    let mut acc = C::zero();
                    for p in 0..n {
                        acc = acc + gm[j][k][p].clone() * gm[i][p][l].clone() - gm[i][k][p].clone() * gm[j][p][l].clone()
                            - c[i][j][p].clone() * gm[p][k][l].clone();
                    }
                    r[i][j][k][l] = acc;
                }
            }
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq)]
pub struct RicciReport<C> {
    pub ricci: Vec<Vec<C>>,
    pub scalar: C,
    pub eta_einstein: Option<(C, C)>,
}

impl<C: Coeff> RicciReport<C> {
    pub fn diagonal(&self) -> Vec<C> {
        (0..self.ricci.len()).map(|i| self.ricci[i][i].clone()).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.ricci.len();
        (0..n).all(|i| (0..n).all(|j| i == j || self.ricci[i][j].is_zero()))
    }
}

pub fn ricci<C: Coeff>(g: &LieAlgebra<C>, m: &Metric<C>) -> Result<RicciReport<C>, CurvatureError> {
    let gamma = levi_civita(g, m)?;
    let r = riemann_tensor(g, &gamma);
    let n = g.dim();
    let ric: Vec<Vec<C>> = (0..n)
        .map(|y| (0..n).map(|z| (0..n).fold(C::zero(), |acc, i| acc + r[i][y][z][i].clone())).collect())
        .collect();
    let mut scalar = C::zero();
    for i in 0..n {
        for j in 0..n {
            scalar = scalar + m.inverse[i][j].clone() * ric[i][j].clone();
        }
    }
    Ok(RicciReport { ricci: ric, scalar, eta_einstein: None })
}

/// Ricci report with the η-Einstein constants filled in when they exist.
pub fn ricci_with_eta<C: Coeff>(g: &LieAlgebra<C>, m: &Metric<C>, eta: &Form<C>) -> Result<RicciReport<C>, CurvatureError> {
    let mut rep = ricci(g, m)?;
    rep.eta_einstein = eta_einstein_fit(&rep, m, eta);
    Ok(rep)
}

/// Exact `(τ, ν)` with `Ric = τ g + ν η⊗η`, or `None`.
pub fn eta_einstein_fit<C: Coeff>(rep: &RicciReport<C>, m: &Metric<C>, eta: &Form<C>) -> Option<(C, C)> {
    let n = m.dim();
    let e: Vec<C> = (1..=n).map(|i| eta.coeff(&[i])).collect();
    let rows: Vec<(C, C, C)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .map(|(i, j)| (m.gram[i][j].clone(), e[i].clone() * e[j].clone(), rep.ricci[i][j].clone()))
        .collect();
    // Pick two equations with an invertible 2x2 determinant.
    let mut solution = None;
    'outer: for p in 0..rows.len() {
        for q in p + 1..rows.len() {
            let (a1, b1, r1) = &rows[p];
            let (a2, b2, r2) = &rows[q];
            let det = a1.clone() * b2.clone() - a2.clone() * b1.clone();
            if let Some(inv) = det.try_inv() {
                let tau = (r1.clone() * b2.clone() - r2.clone() * b1.clone()) * inv.clone();
                let nu = (a1.clone() * r2.clone() - a2.clone() * r1.clone()) * inv;
                solution = Some((tau, nu));
                break 'outer;
            }
        }
    }
    let (tau, nu) = solution?;
    let fits = rows.iter().all(|(a, b, r)| (r.clone() - tau.clone() * a.clone() - nu.clone() * b.clone()).is_zero());
    fits.then_some((tau, nu))
}

/// Pairs `(i, j)`, `i ≤ j`, violating `de^j(E_i, ξ) + de^i(E_j, ξ) = 0` for
/// the Reeb field `ξ = E_reeb` of an orthonormal coframe. Empty means K-contact.
pub fn k_contact_check<C: Coeff>(g: &LieAlgebra<C>, reeb_index: usize) -> Vec<(usize, usize)> {
    let n = g.dim();
    let xi = Vector::basis(n, reeb_index);
    let ev = |k: usize, i: usize| g.de(k).eval(&[Vector::basis(n, i), xi.clone()]).expect("2-form on two vectors");
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            if !(ev(j, i) + ev(i, j)).is_zero() {
                out.push((i, j));
            }
        }
    }
    out
}

/// `R(X,Y)Z` by composing Koszul-formula covariant derivatives directly from
/// brackets; shares no code with [`riemann_tensor`].
pub fn riemann_oracle<C: Coeff>(g: &LieAlgebra<C>, m: &Metric<C>, x: &Vector<C>, y: &Vector<C>, z: &Vector<C>) -> Vector<C> {
    let n = g.dim();
    let half = crate::scalars::rat(1, 2);
    let basis: Vec<Vector<C>> = (1..=n).map(|k| Vector::basis(n, k)).collect();
    let nabla = |a: &Vector<C>, b: &Vector<C>| -> Vector<C> {
        let lowered: Vec<C> = basis
            .iter()
            .map(|ek| {
                (m.inner(&g.bracket(a, b), ek) - m.inner(&g.bracket(b, ek), a) + m.inner(&g.bracket(ek, a), b)).scale(&half)
            })
            .collect();
        m.raise(&lowered)
    };
    let t1 = nabla(x, &nabla(y, z));
    let t2 = nabla(y, &nabla(x, z));
    let t3 = nabla(&g.bracket(x, y), z);
    t1.add(&t2.scale(&-C::one())).add(&t3.scale(&-C::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{canonical, family, family_symbolic, params, standard_structure, Canonical, FamilyId};
    use crate::scalars::{parse_poly, rat, Poly};

    fn alg(id: FamilyId, p: &[(&str, i64)]) -> LieAlgebra<Rational> {
        let p = params(&p.iter().map(|(k, v)| (*k, rat(*v, 1))).collect::<Vec<_>>());
        family(id, &p).unwrap().rational_algebra().unwrap()
    }

    fn q(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|(n, d)| rat(*n, *d)).collect()
    }

    #[test]
    fn ricci_tables() {
        let m = Metric::identity(5);
        let f2 = ricci(&alg(FamilyId::F2, &[("r", 1)]), &m).unwrap();
        assert_eq!(f2.diagonal(), q(&[(-8, 1), (-8, 1), (-8, 1), (-8, 1), (4, 1)]));
        assert!(f2.is_diagonal());
        let f4 = ricci(&alg(FamilyId::F4, &[("a", 0), ("b", 0)]), &m).unwrap();
        assert_eq!(f4.diagonal(), q(&[(-2, 1), (-2, 1), (-2, 1), (-2, 1), (4, 1)]));
        let f5 = ricci(&alg(FamilyId::F5, &[("r", 2)]), &m).unwrap();
        assert_eq!(f5.diagonal(), q(&[(-12, 1), (0, 1), (-12, 1), (0, 1), (0, 1)]));
        let f1 = ricci(&alg(FamilyId::F1, &[("r", 1)]), &m).unwrap();
        assert_eq!(f1.diagonal(), q(&[(-31, 2), (-5, 1), (-5, 1), (11, 2), (-1, 2)]));
    }

    #[test]
    fn ricci_symbolic_f2() {
        let rep = ricci(&family_symbolic(FamilyId::F2), &Metric::identity(5)).unwrap();
        let lam = parse_poly("-2*(3*r^2 + 1)").unwrap();
        for i in 0..4 {
            assert_eq!(rep.ricci[i][i], lam);
        }
        assert_eq!(rep.ricci[4][4], Poly::from_i64(4));
        assert!(rep.is_diagonal());
    }

    #[test]
    fn eta_einstein_examples() {
        let m5 = Metric::<Poly>::identity(5);
        let eta = standard_structure::<Poly>().eta;
        let rep = ricci(&family_symbolic(FamilyId::F2), &m5).unwrap();
        let (tau, nu) = eta_einstein_fit(&rep, &m5, &eta).unwrap();
        assert_eq!(tau, parse_poly("-2*(1 + 3*r^2)").unwrap());
        assert_eq!(nu, parse_poly("6*(1 + r^2)").unwrap());
        // Trace relation s = τ·dim + ν and Ric(ξ,ξ) = τ + ν.
        assert_eq!(rep.scalar, tau.clone() * Poly::from_i64(5) + nu.clone());
        assert_eq!(rep.ricci[4][4], tau + nu);

        let m = Metric::identity(5);
        let eta_q = standard_structure::<Rational>().eta;
        let rep = ricci(&alg(FamilyId::F4, &[("a", 0), ("b", 0)]), &m).unwrap();
        assert_eq!(eta_einstein_fit(&rep, &m, &eta_q), Some((rat(-2, 1), rat(6, 1))));
        let rep = ricci(&alg(FamilyId::F1, &[("r", 1)]), &m).unwrap();
        assert_eq!(eta_einstein_fit(&rep, &m, &eta_q), None);
    }

    #[test]
    fn k_contact_examples() {
        assert!(k_contact_check(&family_symbolic(FamilyId::F2), 5).is_empty());
        let f1 = k_contact_check(&alg(FamilyId::F1, &[("r", 1)]), 5);
        assert!(f1.contains(&(1, 4)), "{f1:?}");
        assert_eq!(alg(FamilyId::F1, &[("r", 1)]).de(4).eval(&[Vector::basis(5, 1), Vector::basis(5, 5)]).unwrap(), rat(-3, 1));
        assert!(k_contact_check(&LieAlgebra::<Rational>::abelian(5), 5).is_empty());
    }

    #[test]
    fn levi_civita_examples() {
        let ab = levi_civita(&LieAlgebra::<Rational>::abelian(5), &Metric::identity(5)).unwrap();
        assert!(ab.gamma.iter().flatten().flatten().all(|c| c.is_zero()));
        let h1 = canonical(Canonical::H1);
        let lc = levi_civita(&h1, &Metric::identity(5)).unwrap();
        // [E1,E4] = E5: ∇_{E1}E4 = E5/2, ∇_{E1}E5 = -E4/2.
        assert_eq!(lc.gamma[0][3][4], rat(1, 2));
        assert_eq!(lc.gamma[0][4][3], rat(-1, 2));
    }

    #[test]
    fn oracle_examples() {
        let g = alg(FamilyId::F4, &[("a", 0), ("b", 0)]);
        let m = Metric::identity(5);
        let e = |i| Vector::<Rational>::basis(5, i);
        let total = (1..=5).fold(rat(0, 1), |acc, i| acc + riemann_oracle(&g, &m, &e(i), &e(5), &e(5)).components[i - 1].clone());
        assert_eq!(total, rat(4, 1));
        let ab = LieAlgebra::<Rational>::abelian(5);
        assert!(riemann_oracle(&ab, &m, &e(1), &e(2), &e(3)).is_zero());
    }

    #[test]
    fn non_orthonormal_metric() {
        // Scaling the metric by 4 divides Ricci-type curvature (as a (0,2) tensor, Ric is scale invariant).
        let g = alg(FamilyId::F2, &[("r", 1)]);
        let m = Metric::diagonal(vec![rat(4, 1); 5]).unwrap();
        assert!(m.is_positive_definite());
        let rep = ricci(&g, &m).unwrap();
        assert_eq!(rep.diagonal(), q(&[(-8, 1), (-8, 1), (-8, 1), (-8, 1), (4, 1)]));
        assert_eq!(rep.scalar, rat(-28, 4));
        assert!(Metric::new(vec![vec![rat(1, 1), rat(2, 1)], vec![rat(0, 1), rat(1, 1)]]).is_err());
    }

    #[test]
    fn prop_4_1_identities() {
        let s = standard_structure::<Poly>();
        let f2 = family_symbolic(FamilyId::F2);
        let lam = parse_poly("-3*r^2").unwrap();
        assert_eq!(f2.d_form(&s.omega1), s.omega2.wedge(&s.eta).scale(&lam));
        assert_eq!(f2.d_form(&s.omega2), s.omega1.wedge(&s.eta).scale(&-lam));
        let f4 = alg(FamilyId::F4, &[("a", 0), ("b", 0)]);
        let sq = standard_structure::<Rational>();
        assert!(f4.d_form(&sq.omega1).is_zero() && f4.d_form(&sq.omega2).is_zero());
    }
}
