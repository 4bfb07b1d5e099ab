//! SU(2)- and SU(3)-structures on Lie algebras and their closedness conditions.

use crate::exterior::{Form, Vector};
use crate::liealg::{check_basis_change, LieAlgebra};
use crate::scalars::{Coeff, Relations};
use thiserror::Error;

pub use crate::catalog::RotationMap;

/// `(η, ω1, ω2, ω3)` on a 5-dimensional coframe.
#[derive(Clone, Debug, PartialEq)]
pub struct SU2Structure<C: Coeff> {
    pub eta: Form<C>,
    pub omega1: Form<C>,
    pub omega2: Form<C>,
    pub omega3: Form<C>,
}

/// `(F, Ψ₊, Ψ₋)` on a 6-dimensional coframe.
#[derive(Clone, Debug, PartialEq)]
pub struct SU3Structure<C: Coeff> {
    pub f: Form<C>,
    pub psi_plus: Form<C>,
    pub psi_minus: Form<C>,
}

impl<C: Coeff> SU2Structure<C> {
    pub fn dim(&self) -> usize {
        self.eta.dim()
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D + Copy) -> SU2Structure<D> {
        SU2Structure { eta: self.eta.map(f), omega1: self.omega1.map(f), omega2: self.omega2.map(f), omega3: self.omega3.map(f) }
    }

    pub fn scale(&self, x: &C) -> SU2Structure<C> {
        SU2Structure { eta: self.eta.scale(x), omega1: self.omega1.scale(x), omega2: self.omega2.scale(x), omega3: self.omega3.scale(x) }
    }

    /// The forms in a fixed order with their names.
    pub fn named(&self) -> [(&'static str, &Form<C>); 4] {
        [("eta", &self.eta), ("omega1", &self.omega1), ("omega2", &self.omega2), ("omega3", &self.omega3)]
    }
}

impl<C: Coeff> SU3Structure<C> {
    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D + Copy) -> SU3Structure<D> {
        SU3Structure { f: self.f.map(f), psi_plus: self.psi_plus.map(f), psi_minus: self.psi_minus.map(f) }
    }

    pub fn named(&self) -> [(&'static str, &Form<C>); 3] {
        [("F", &self.f), ("psi_plus", &self.psi_plus), ("psi_minus", &self.psi_minus)]
    }

    /// `F∧Ψ₊` and `F∧Ψ₋`, both zero for a compatible pair.
    pub fn compatibility_residuals(&self) -> Vec<(String, Form<C>)> {
        vec![
            ("F^psi_plus".into(), self.f.wedge(&self.psi_plus)),
            ("F^psi_minus".into(), self.f.wedge(&self.psi_minus)),
        ]
    }
}

/// Named residual forms; the check passes iff every one of them vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport<C: Coeff> {
    pub pass: bool,
    pub residuals: Vec<(String, Form<C>)>,
}

impl<C: Coeff> CheckReport<C> {
    pub fn from_residuals(residuals: Vec<(String, Form<C>)>) -> Self {
        CheckReport { pass: residuals.iter().all(|(_, r)| r.is_zero()), residuals }
    }

    pub fn failing(&self) -> impl Iterator<Item = &(String, Form<C>)> {
        self.residuals.iter().filter(|(_, r)| !r.is_zero())
    }

    fn merge(mut self, other: CheckReport<C>) -> Self {
        self.pass &= other.pass;
        self.residuals.extend(other.residuals);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Su2Report<C: Coeff> {
    pub pass: bool,
    /// `ω1∧ω1`.
    pub v: Form<C>,
    pub residuals: Vec<(String, Form<C>)>,
    /// `v∧η`, required to be nonzero.
    pub volume: Form<C>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error("expected a {expected}-dimensional structure, got {got}")]
    Dim { expected: usize, got: usize },
    #[error("lambda^2 + mu^2 must equal 1, got {0}")]
    NotUnit(String),
    #[error("normal vector must be ±E_k for a single k")]
    NotBasisAligned,
    #[error("the scaling x must be invertible")]
    NotInvertible,
}

pub fn check_su2<C: Coeff>(s: &SU2Structure<C>) -> Su2Report<C> {
    let w = [&s.omega1, &s.omega2, &s.omega3];
    let v = s.omega1.wedge(&s.omega1);
    let mut residuals = Vec::new();
    for i in 0..3 {
        for j in i..3 {
            let wij = w[i].wedge(w[j]);
            let r = if i == j { wij - v.clone() } else { wij };
            residuals.push((format!("omega{}^omega{}", i + 1, j + 1) + if i == j { " - v" } else { "" }, r));
        }
    }
    let volume = v.wedge(&s.eta);
    let pass = residuals.iter().all(|(_, r)| r.is_zero()) && !volume.is_zero();
    Su2Report { pass, v, residuals, volume }
}

/// `dω3 = 0, d(η∧ω1) = 0, d(η∧ω2) = 0`.
pub fn check_hypo<C: Coeff>(g: &LieAlgebra<C>, s: &SU2Structure<C>) -> CheckReport<C> {
    CheckReport::from_residuals(vec![
        ("d omega3".into(), g.d_form(&s.omega3)),
        ("d(eta^omega1)".into(), g.d_form(&s.eta.wedge(&s.omega1))),
        ("d(eta^omega2)".into(), g.d_form(&s.eta.wedge(&s.omega2))),
    ])
}

/// `dη + 2ω3 = 0` together with the two closedness conditions on `η∧ω1`, `η∧ω2`.
pub fn check_hypo_contact<C: Coeff>(g: &LieAlgebra<C>, s: &SU2Structure<C>) -> CheckReport<C> {
    CheckReport::from_residuals(vec![
        ("d eta + 2 omega3".into(), g.d_form(&s.eta) + s.omega3.scale(&C::from_i64(2))),
        ("d(eta^omega1)".into(), g.d_form(&s.eta.wedge(&s.omega1))),
        ("d(eta^omega2)".into(), g.d_form(&s.eta.wedge(&s.omega2))),
    ])
}

pub fn check_closed_omega12<C: Coeff>(g: &LieAlgebra<C>, s: &SU2Structure<C>) -> CheckReport<C> {
    CheckReport::from_residuals(vec![
        ("d omega1".into(), g.d_form(&s.omega1)),
        ("d omega2".into(), g.d_form(&s.omega2)),
    ])
}

pub fn check_half_flat<C: Coeff>(g6: &LieAlgebra<C>, s: &SU3Structure<C>) -> CheckReport<C> {
    CheckReport::from_residuals(vec![
        ("d(F^F)".into(), g6.d_form(&s.f.wedge(&s.f))),
        ("d psi_plus".into(), g6.d_form(&s.psi_plus)),
    ])
}

#[derive(Clone, Debug)]
pub struct LiftReport<C: Coeff> {
    pub algebra: LieAlgebra<C>,
    pub structure: SU3Structure<C>,
    /// `2(λω1+μω2)∧e5∧de6`, `ω3∧de6`, `d(de6)`.
    pub constraints: CheckReport<C>,
    pub half_flat: CheckReport<C>,
}

/// SU(3)-structure on `g ⊕ R e6` (with the given `de6`) built from an
/// SU(2)-structure and a unit pair `(λ, μ)`.
pub fn lift_extension<C: Coeff>(
    g: &LieAlgebra<C>,
    s: &SU2Structure<C>,
    lambda: &C,
    mu: &C,
    de6: &Form<C>,
) -> Result<LiftReport<C>, StructureError> {
    if g.dim() != 5 {
        return Err(StructureError::Dim { expected: 5, got: g.dim() });
    }
    let unit = lambda.clone() * lambda.clone() + mu.clone() * mu.clone() - C::one();
    if !unit.is_zero() {
        return Err(StructureError::NotUnit(unit.to_string()));
    }
    let algebra = g.extend(de6);
    let up = |f: &Form<C>| f.with_dim(6);
    let (w1, w2, w3) = (up(&s.omega1), up(&s.omega2), up(&s.omega3));
    let e5 = Form::basis(6, &[5]);
    let e6 = Form::basis(6, &[6]);
    let rot = w1.scale(&-mu.clone()) + w2.scale(lambda);
    let structure = SU3Structure {
        f: w1.scale(lambda) + w2.scale(mu) + Form::basis(6, &[5, 6]),
        psi_plus: rot.wedge(&e5) - w3.wedge(&e6),
        psi_minus: rot.wedge(&e6) + w3.wedge(&e5),
    };
    let de6_up = up(de6);
    let base = s.omega1.scale(lambda) + s.omega2.scale(mu);
    let constraints = CheckReport::from_residuals(vec![
        ("2(lambda omega1 + mu omega2)^e5^de6".into(), base.scale(&C::from_i64(2)).wedge(&s.eta).wedge(de6).with_dim(6)),
        ("omega3^de6".into(), w3.wedge(&de6_up)),
        ("d(de6)".into(), algebra.d_form(&de6_up)),
    ]);
    let half_flat = check_half_flat(&algebra, &structure);
    Ok(LiftReport { algebra, structure, constraints, half_flat })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RestrictionMode {
    /// `(−i_U F, i_U Ψ₋, −i_U Ψ₊, f*F)`.
    Hyp1,
    /// `(−i_U F, −i_U Ψ₋, f*F, −i_U Ψ₊)`.
    Thm25,
}

fn basis_index<C: Coeff>(u: &Vector<C>) -> Option<(usize, C)> {
    let nz: Vec<usize> = (0..u.dim()).filter(|&i| !u.components[i].is_zero()).collect();
    if nz.len() != 1 {
        return None;
    }
    let c = u.components[nz[0]].clone();
    (c == C::one() || c == -C::one()).then_some((nz[0] + 1, c))
}

/// Induced SU(2)-structure on the hypersurface orthogonal to `U = ±E_k`,
/// written on the remaining covectors.
pub fn restrict_by_normal<C: Coeff>(
    s: &SU3Structure<C>,
    u: &Vector<C>,
    mode: RestrictionMode,
) -> Result<SU2Structure<C>, StructureError> {
    let (k, _) = basis_index(u).ok_or(StructureError::NotBasisAligned)?;
    let down = |f: Form<C>| f.drop_index(k);
    let eta = down(-s.f.contract(u));
    let pullback_f = down(s.f.clone());
    Ok(match mode {
        RestrictionMode::Hyp1 => SU2Structure {
            eta,
            omega1: down(s.psi_minus.contract(u)),
            omega2: down(-s.psi_plus.contract(u)),
            omega3: pullback_f,
        },
        RestrictionMode::Thm25 => SU2Structure {
            eta,
            omega1: down(-s.psi_minus.contract(u)),
            omega2: pullback_f,
            omega3: down(-s.psi_plus.contract(u)),
        },
    })
}

/// Differentials of the hypersurface obtained by killing `e^k`, if the
/// remaining differentials do not involve it.
pub fn restrict_algebra<C: Coeff>(g: &LieAlgebra<C>, k: usize) -> Option<LieAlgebra<C>> {
    let d: Vec<Form<C>> = (1..=g.dim())
        .filter(|&i| i != k)
        .map(|i| g.de(i).clone())
        .collect();
    if d.iter().any(|f| f.terms().any(|(m, _)| m & (1 << (k - 1)) != 0)) {
        return None;
    }
    LieAlgebra::new(d.into_iter().map(|f| f.drop_index(k)).collect()).ok()
}

/// `i_U(dF − 2Ψ₊)`.
pub fn check_contraction_identity<C: Coeff>(g6: &LieAlgebra<C>, s: &SU3Structure<C>, u: &Vector<C>) -> Form<C> {
    (g6.d_form(&s.f) - s.psi_plus.scale(&C::from_i64(2))).contract(u)
}

/// Checks that `f = B e` maps `g1` onto `g2` and that `F*` relates the
/// structures by the stored rotation.
pub fn check_rotation_equivalence<C: Coeff>(
    g1: &LieAlgebra<C>,
    s1: &SU2Structure<C>,
    g2: &LieAlgebra<C>,
    s2: &SU2Structure<C>,
    basis_change: &crate::liealg::BasisChange<C>,
    cos_sin: (&C, &C),
) -> CheckReport<C> {
    let rel: &Relations = &basis_change.relations;
    let (c, s) = cos_sin;
    let mut residuals: Vec<(String, Form<C>)> = check_basis_change(g1, g2, basis_change)
        .into_iter()
        .map(|(i, f)| (if i == 0 { "singular basis change".to_string() } else { format!("d f^{i}") }, f))
        .collect();
    if residuals.iter().any(|(n, _)| n.starts_with("singular")) {
        // A zero determinant has no residual form; keep the check failing.
        return CheckReport { pass: false, residuals };
    }
    let unit = (c.clone() * c.clone() + s.clone() * s.clone() - C::one()).reduce_mod(rel);
    residuals.push(("c^2 + s^2 - 1".into(), Form::scalar(g1.dim(), unit)));
    let pb = |f: &Form<C>| basis_change.pull_back(f);
    let (p1, p2) = (pb(&s2.omega1), pb(&s2.omega2));
    residuals.push(("eta - F*eta~".into(), (s1.eta.clone() - pb(&s2.eta)).reduce_mod(rel)));
    residuals.push(("omega3 - F*omega3~".into(), (s1.omega3.clone() - pb(&s2.omega3)).reduce_mod(rel)));
    residuals.push((
        "omega1 - (c F*omega1~ - s F*omega2~)".into(),
        (s1.omega1.clone() - p1.scale(c) + p2.scale(s)).reduce_mod(rel),
    ));
    residuals.push((
        "omega2 - (s F*omega1~ + c F*omega2~)".into(),
        (s1.omega2.clone() - p1.scale(s) - p2.scale(c)).reduce_mod(rel),
    ));
    CheckReport::from_residuals(residuals)
}

/// Induced forms in the flat model frame with `X = x E6`, `α = e6 / x`,
/// compared against `x` times the standard structure.
pub fn check_killing_model_frame<C: Coeff>(x: &C) -> Result<(SU2Structure<C>, CheckReport<C>), StructureError> {
    let x_inv = x.try_inv().ok_or(StructureError::NotInvertible)?;
    let m = crate::catalog::model_su3::<C>();
    let xv = Vector::basis(6, 6).scale(x);
    let alpha = Form::basis(6, &[6]).scale(&x_inv);
    let down = |f: Form<C>| f.drop_index(6);
    let induced = SU2Structure {
        eta: down(-m.f.contract(&xv)),
        omega1: down(m.f.wedge(&alpha).contract(&xv).scale(x)),
        omega2: down(m.psi_minus.contract(&xv)),
        omega3: down(-m.psi_plus.contract(&xv)),
    };
    let expected = crate::catalog::standard_structure::<C>().scale(x);
    let residuals = induced
        .named()
        .iter()
        .zip(expected.named())
        .map(|((n, a), (_, b))| (n.to_string(), (*a).clone() - b.clone()))
        .collect();
    Ok((induced, CheckReport::from_residuals(residuals)))
}

/// All hypo-contact conditions plus the pointwise SU(2) algebra.
pub fn full_check<C: Coeff>(g: &LieAlgebra<C>, s: &SU2Structure<C>) -> CheckReport<C> {
    let su2 = check_su2(s);
    let mut r = CheckReport::from_residuals(su2.residuals);
    if su2.volume.is_zero() {
        r.pass = false;
    }
    r.merge(check_hypo_contact(g, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, family, family_symbolic, model_su3, nilmanifold, params, standard_structure, FamilyId};
    use crate::scalars::{rat, Poly, Rational};

    fn std_q() -> SU2Structure<Rational> {
        standard_structure()
    }

    #[test]
    fn su2_examples() {
        let rep = check_su2(&std_q());
        assert!(rep.pass);
        assert_eq!(rep.v, Form::term(5, rat(2, 1), &[1, 2, 3, 4]));
        let mut bad = std_q();
        bad.omega3 = Form::basis(5, &[1, 4]);
        assert!(!check_su2(&bad).pass);
        let x = rat(3, 1);
        let rep = check_su2(&std_q().scale(&x));
        assert!(rep.pass);
        assert_eq!(rep.v, Form::term(5, rat(18, 1), &[1, 2, 3, 4]));
    }

    #[test]
    fn hypo_examples() {
        let f2 = family_symbolic(FamilyId::F2);
        let s = standard_structure::<Poly>();
        assert!(check_hypo(&f2, &s).pass);
        assert!(check_hypo(&LieAlgebra::abelian(5), &std_q()).pass);
        let mut bad = s.clone();
        bad.omega3 = bad.omega3 + Form::basis(5, &[1, 2]);
        let rep = check_hypo(&f2, &bad);
        assert!(!rep.pass);
        assert_eq!(rep.residuals[0].1, f2.d_form(&Form::basis(5, &[1, 2])));
    }

    #[test]
    fn all_families_hypo_contact() {
        for id in FamilyId::ALL {
            let rep = check_hypo_contact(&family_symbolic(id), &standard_structure());
            assert!(rep.pass, "{id}: {:?}", rep.residuals);
        }
        let h1 = catalog::canonical(catalog::Canonical::H1);
        assert!(!check_hypo_contact(&h1, &std_q()).pass);
        assert!(!check_hypo_contact(&LieAlgebra::abelian(5), &std_q()).pass);
    }

    #[test]
    fn closed_omega12_examples() {
        let at = |id, p: &[(&str, Rational)]| family(id, &params(p)).unwrap().rational_algebra().unwrap();
        assert!(check_closed_omega12(&at(FamilyId::F4, &[("a", rat(0, 1)), ("b", rat(0, 1))]), &std_q()).pass);
        assert!(!check_closed_omega12(&at(FamilyId::F4, &[("a", rat(1, 1)), ("b", rat(0, 1))]), &std_q()).pass);
        let f2 = at(FamilyId::F2, &[("r", rat(1, 1))]);
        let rep = check_closed_omega12(&f2, &std_q());
        assert!(!rep.pass);
        let s = std_q();
        assert_eq!(rep.residuals[0].1, s.omega2.wedge(&s.eta).scale(&rat(-3, 1)));
    }

    #[test]
    fn half_flat_examples() {
        let nil = nilmanifold::<Rational>();
        let m = model_su3::<Rational>();
        assert!(check_half_flat(&nil, &m).pass);
        assert_eq!(nil.d_form(&m.f), m.psi_plus.scale(&rat(2, 1)));
        assert!(check_half_flat(&LieAlgebra::abelian(6), &m).pass);
        let f4 = family(FamilyId::F4, &params(&[("a", rat(0, 1)), ("b", rat(0, 1))])).unwrap().rational_algebra().unwrap();
        let rep = lift_extension(&f4, &std_q(), &rat(0, 1), &rat(1, 1), &Form::basis(5, &[1, 3])).unwrap();
        assert!(!rep.half_flat.pass);
        assert!(!rep.constraints.pass);
    }

    #[test]
    fn lift_cases() {
        let f4 = family_symbolic(FamilyId::F4);
        let s = standard_structure::<Poly>();
        let one = Poly::one();
        let zero = Poly::zero();
        let rep = lift_extension(&f4, &s, &one, &zero, &Form::zero(5)).unwrap();
        assert!(rep.half_flat.pass && rep.constraints.pass);
        let de6 = Form::term(5, Poly::var("a1"), &[1, 2]);
        let rep = lift_extension(&f4, &s, &zero, &one, &de6).unwrap();
        assert!(rep.half_flat.pass && rep.constraints.pass, "{:?}", rep.half_flat.residuals);
        let f1 = family(FamilyId::F1, &params(&[("r", rat(1, 1))])).unwrap().rational_algebra().unwrap();
        let de6 = Form::term(5, rat(4, 1), &[1, 2]) + Form::term(5, rat(-3, 1), &[1, 3]);
        let rep = lift_extension(&f1, &std_q(), &rat(3, 5), &rat(4, 5), &de6).unwrap();
        assert!(rep.half_flat.pass && rep.constraints.pass);
        assert!(lift_extension(&f1, &std_q(), &rat(1, 1), &rat(1, 1), &de6).is_err());
    }

    #[test]
    fn restriction_examples() {
        let m = model_su3::<Rational>();
        let e6 = Vector::basis(6, 6);
        let s = restrict_by_normal(&m, &e6, RestrictionMode::Hyp1).unwrap();
        assert_eq!(s.omega3, Form::basis(5, &[1, 2]) + Form::basis(5, &[3, 4]));
        assert_eq!(s.eta, Form::basis(5, &[5]));
        let t = restrict_by_normal(&m, &e6, RestrictionMode::Thm25).unwrap();
        assert_eq!(s.eta, t.eta);
        let nil = nilmanifold::<Rational>();
        let u = e6.scale(&rat(-1, 1));
        let s = restrict_by_normal(&m, &u, RestrictionMode::Thm25).unwrap();
        let h = restrict_algebra(&nil, 6).unwrap();
        assert!(check_hypo_contact(&h, &s).pass);
        assert!(check_su2(&s).pass);
        assert!(restrict_by_normal(&m, &Vector::new(vec![rat(1, 1); 6]), RestrictionMode::Hyp1).is_err());
    }

    #[test]
    fn contraction_identity_examples() {
        let e6 = Vector::basis(6, 6);
        for id in FamilyId::ALL {
            let g = family_symbolic(id);
            let lift = lift_extension(&g, &standard_structure(), &Poly::one(), &Poly::zero(), &Form::zero(5)).unwrap();
            assert!(check_contraction_identity(&lift.algebra, &lift.structure, &e6.map_poly()).is_zero(), "{id}");
        }
        let m = model_su3::<Rational>();
        let r = check_contraction_identity(&LieAlgebra::abelian(6), &m, &e6);
        assert_eq!(r, (Form::basis(6, &[1, 4]) + Form::basis(6, &[2, 3])).scale(&rat(2, 1)));
        let u = e6.scale(&rat(-1, 1));
        assert!(check_contraction_identity(&nilmanifold(), &m, &u).is_zero());
    }

    trait MapPoly {
        fn map_poly(&self) -> Vector<Poly>;
    }
    impl MapPoly for Vector<Rational> {
        fn map_poly(&self) -> Vector<Poly> {
            Vector::new(self.components.iter().map(|c| Poly::constant(c.clone())).collect())
        }
    }

    #[test]
    fn rotation_identity() {
        let g = family_symbolic(FamilyId::F2);
        let s = standard_structure::<Poly>();
        let b = crate::liealg::BasisChange::identity(5);
        assert!(check_rotation_equivalence(&g, &s, &g, &s, &b, (&Poly::one(), &Poly::zero())).pass);
    }

    #[test]
    fn catalog_rotation_pairs() {
        for pair in catalog::rotation_pairs() {
            let g1 = family(pair.source.0, &pair.source.1).unwrap().algebra;
            let g2 = family(pair.target.0, &pair.target.1).unwrap().algebra;
            let s = standard_structure::<Poly>();
            let (c, sn) = &pair.map.cos_sin;
            let rep = check_rotation_equivalence(&g1, &s, &g2, &s, &pair.map.basis_change, (c, sn));
            assert!(rep.pass, "{:?} -> {:?}: {:?}", pair.source, pair.target, rep.failing().collect::<Vec<_>>());
        }
    }

    #[test]
    fn rotation_pairs_at_more_points() {
        let mut pairs = vec![catalog::f3_f4_rotation(&rat(0, 1), &rat(-2, 1)).unwrap()];
        for (a, r) in [(3, 4), (1, 1), (-1, 2), (2, -1)] {
            pairs.push(catalog::f5_f7_rotation(&rat(a, 1), &rat(r, 1)));
        }
        for pair in pairs {
            let g1 = family(pair.source.0, &pair.source.1).unwrap().algebra;
            let g2 = family(pair.target.0, &pair.target.1).unwrap().algebra;
            let s = standard_structure::<Poly>();
            let (c, sn) = &pair.map.cos_sin;
            let rep = check_rotation_equivalence(&g1, &s, &g2, &s, &pair.map.basis_change, (c, sn));
            assert!(rep.pass, "{:?} -> {:?}: {:?}", pair.source, pair.target, rep.failing().collect::<Vec<_>>());
            assert_eq!(check_hypo_contact(&g1, &s).pass, check_hypo_contact(&g2, &s).pass);
        }
    }

    #[test]
    fn killing_model_frame() {
        let (s, rep) = check_killing_model_frame(&rat(1, 1)).unwrap();
        assert!(rep.pass);
        assert_eq!(s, std_q());
        let (s, rep) = check_killing_model_frame(&rat(2, 1)).unwrap();
        assert!(rep.pass);
        assert_eq!(s.eta, Form::term(5, rat(2, 1), &[5]));
        let (_, rep) = check_killing_model_frame(&Poly::var("x")).unwrap();
        assert!(rep.pass);
        assert!(check_killing_model_frame(&rat(0, 1)).is_err());
    }

    #[test]
    fn hypo_contact_implies_hypo() {
        for id in FamilyId::ALL {
            let g = family_symbolic(id);
            let s = standard_structure();
            assert!(check_hypo_contact(&g, &s).pass && check_hypo(&g, &s).pass);
        }
    }
}
