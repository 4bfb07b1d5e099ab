//! Named algebras, structures and basis changes.
//!
//! The six hypo-contact families are stored with Laurent-polynomial
//! coefficients in their parameters, written out in the same term syntax the
//! structure-file format uses. Irrational entries of basis changes are radical
//! variables (`s2`, `s3`, `q`) constrained by square relations.

use crate::exterior::Form;
use crate::liealg::{BasisChange, LieAlgebra};
use crate::scalars::{parse_poly, rat, Coeff, Poly, Rational, Relations};
use crate::structures::{SU2Structure, SU3Structure};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub type Params = BTreeMap<String, Rational>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown family '{0}' (expected F1, F2, F3, F4, F5 or F7)")]
    UnknownFamily(String),
    #[error("family {family} has no parameter '{name}' (parameters: {allowed})")]
    UnknownParam { family: FamilyId, name: String, allowed: String },
    #[error("family {0} requires r != 0")]
    ZeroR(FamilyId),
    #[error("family {0}: basis change needs every parameter bound{1}")]
    NeedsPoint(FamilyId, String),
    #[error("unknown canonical algebra '{0}'")]
    UnknownCanonical(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F7,
}

impl FamilyId {
    pub const ALL: [FamilyId; 6] = [FamilyId::F1, FamilyId::F2, FamilyId::F3, FamilyId::F4, FamilyId::F5, FamilyId::F7];

    pub fn params(self) -> &'static [&'static str] {
        match self {
            FamilyId::F1 | FamilyId::F2 | FamilyId::F5 => &["r"],
            FamilyId::F3 | FamilyId::F7 => &["a", "r"],
            FamilyId::F4 => &["a", "b"],
        }
    }

    pub fn requires_nonzero_r(self) -> bool {
        self != FamilyId::F4
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for FamilyId {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "F1" => FamilyId::F1,
            "F2" => FamilyId::F2,
            "F3" => FamilyId::F3,
            "F4" => FamilyId::F4,
            "F5" => FamilyId::F5,
            "F7" => FamilyId::F7,
            _ => return Err(CatalogError::UnknownFamily(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Canonical {
    H1,
    H2,
    H3,
    H4,
    H5,
}

impl FromStr for Canonical {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "h1" => Canonical::H1,
            "h2" => Canonical::H2,
            "h3" => Canonical::H3,
            "h4" => Canonical::H4,
            "h5" => Canonical::H5,
            _ => return Err(CatalogError::UnknownCanonical(s.to_string())),
        })
    }
}

impl fmt::Display for Canonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Canonical::H1 => "h1",
            Canonical::H2 => "h2",
            Canonical::H3 => "h3",
            Canonical::H4 => "h4",
            Canonical::H5 => "h5",
        };
        f.write_str(s)
    }
}

/// A term list `(coefficient, i, j)` becomes a 2-form on `n` covectors.
pub fn two_form(n: usize, terms: &[(&str, usize, usize)]) -> Form<Poly> {
    let mut f = Form::zero(n);
    for (c, i, j) in terms {
        let p = parse_poly(c).unwrap_or_else(|e| panic!("catalog coefficient '{c}': {e}"));
        f = f + Form::term(n, p, &[*i, *j]);
    }
    f
}

fn algebra(n: usize, d: &[&[(&str, usize, usize)]]) -> LieAlgebra<Poly> {
    LieAlgebra::new(d.iter().map(|t| two_form(n, t)).collect()).expect("catalog algebra is well formed")
}

const DE5: &[(&str, usize, usize)] = &[("-2", 1, 4), ("-2", 2, 3)];

/// Differentials of a family with symbolic parameters.
pub fn family_symbolic(id: FamilyId) -> LieAlgebra<Poly> {
    match id {
        FamilyId::F1 => algebra(
            5,
            &[&[], &[("r", 1, 2)], &[("r", 1, 3)], &[("-r", 1, 4), ("-3*r^2", 1, 5), ("2*r", 2, 3)], DE5],
        ),
        FamilyId::F2 => algebra(
            5,
            &[
                &[],
                &[("r", 1, 2), ("3*r", 3, 4), ("3*r^2", 3, 5)],
                &[("r", 1, 3), ("-3*r", 2, 4), ("-3*r^2", 2, 5)],
                &[("2*r", 1, 4), ("2*r", 2, 3)],
                DE5,
            ],
        ),
        FamilyId::F3 => algebra(
            5,
            &[
                &[],
                &[("r", 1, 4), ("-r", 2, 3), ("-a*r", 2, 5), ("r^2", 3, 5)],
                &[("a", 1, 4), ("-a", 2, 3), ("-a^2", 2, 5), ("a*r", 3, 5)],
                &[("r", 1, 2), ("a", 1, 3), ("-(a^2+r^2)", 1, 5), ("a", 2, 4), ("-r", 3, 4)],
                DE5,
            ],
        ),
        FamilyId::F4 => algebra(
            5,
            &[
                &[],
                &[],
                &[("a", 1, 3), ("b", 1, 4), ("-b", 2, 3), ("a", 2, 4), ("-(a^2+b^2)", 2, 5)],
                &[("b", 1, 3), ("-a", 1, 4), ("-(a^2+b^2)", 1, 5), ("a", 2, 3), ("b", 2, 4)],
                DE5,
            ],
        ),
        FamilyId::F5 => algebra(
            5,
            &[&[], &[("r", 3, 4), ("r^2/2", 3, 5)], &[("r", 1, 3)], &[("-r^2/2", 1, 5), ("r", 2, 3)], DE5],
        ),
        FamilyId::F7 => algebra(
            5,
            &[
                &[],
                &[
                    ("r", 1, 2),
                    ("a", 1, 3),
                    ("a", 2, 4),
                    ("a*(r^2+a^2)/(2*r)", 2, 5),
                    ("a^2/r", 3, 4),
                    ("a^2*(r^2+a^2)/(2*r^2)", 3, 5),
                ],
                &[
                    ("a", 1, 2),
                    ("a^2/r", 1, 3),
                    ("-r", 2, 4),
                    ("-(r^2+a^2)/2", 2, 5),
                    ("-a", 3, 4),
                    ("-a*(r^2+a^2)/(2*r)", 3, 5),
                ],
                &[("-(r^2+a^2)^2/(2*r^2)", 1, 5), ("(r^2+a^2)/r", 2, 3)],
                DE5,
            ],
        ),
    }
}

/// The standard SU(2)-structure: `η = e5, ω1 = e12 + e34, ω2 = e13 + e42, ω3 = e14 + e23`.
pub fn standard_structure<C: Coeff>() -> SU2Structure<C> {
    let e = |idx: &[usize]| Form::<C>::basis(5, idx);
    SU2Structure {
        eta: e(&[5]),
        omega1: e(&[1, 2]) + e(&[3, 4]),
        omega2: e(&[1, 3]) + e(&[4, 2]),
        omega3: e(&[1, 4]) + e(&[2, 3]),
    }
}

/// The flat model SU(3)-structure on six covectors.
pub fn model_su3<C: Coeff>() -> SU3Structure<C> {
    let e = |idx: &[usize]| Form::<C>::basis(6, idx);
    let a = e(&[1, 3]) + e(&[4, 2]);
    let b = e(&[1, 4]) + e(&[2, 3]);
    SU3Structure {
        f: e(&[1, 2]) + e(&[3, 4]) + e(&[5, 6]),
        psi_plus: a.wedge(&e(&[5])) - b.wedge(&e(&[6])),
        psi_minus: b.wedge(&e(&[5])) + a.wedge(&e(&[6])),
    }
}

/// Compact nilmanifold example: `de5 = -2e14 - 2e23`, `de6 = -2e13 + 2e24`.
pub fn nilmanifold<C: Coeff>() -> LieAlgebra<C> {
    let mut d = vec![Form::zero(6); 6];
    d[4] = Form::term(6, C::from_i64(-2), &[1, 4]) + Form::term(6, C::from_i64(-2), &[2, 3]);
    d[5] = Form::term(6, C::from_i64(-2), &[1, 3]) + Form::term(6, C::from_i64(2), &[2, 4]);
    LieAlgebra::new(d).expect("well formed")
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: FamilyId,
    /// Parameters that were bound; the rest stay symbolic.
    pub params: Params,
    pub algebra: LieAlgebra<Poly>,
    pub structure: SU2Structure<Poly>,
    pub canonical_target: Option<Canonical>,
    pub basis_change: Option<BasisChange<Poly>>,
    pub notes: String,
}

impl CatalogEntry {
    pub fn rational_algebra(&self) -> Option<LieAlgebra<Rational>> {
        self.algebra.to_rational(&Params::new())
    }
}

fn check_params(id: FamilyId, params: &Params) -> Result<(), CatalogError> {
    for k in params.keys() {
        if !id.params().contains(&k.as_str()) {
            return Err(CatalogError::UnknownParam {
                family: id,
                name: k.clone(),
                allowed: id.params().join(", "),
            });
        }
    }
    if id.requires_nonzero_r() {
        if let Some(r) = params.get("r") {
            if r.is_zero() {
                return Err(CatalogError::ZeroR(id));
            }
        }
    }
    Ok(())
}

pub fn params(pairs: &[(&str, Rational)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// A family with the given parameters bound (missing ones stay symbolic).
pub fn family(id: FamilyId, params: &Params) -> Result<CatalogEntry, CatalogError> {
    check_params(id, params)?;
    let algebra = family_symbolic(id).subst(params);
    let all_bound = id.params().iter().all(|p| params.contains_key(*p));
    let zero_ab = params.get("a").is_some_and(|a| a.is_zero()) && params.get("b").is_some_and(|b| b.is_zero());
    let canonical_target = match id {
        FamilyId::F1 => Some(Canonical::H2),
        FamilyId::F2 => Some(Canonical::H3),
        FamilyId::F3 => Some(Canonical::H4),
        FamilyId::F4 if zero_ab => Some(Canonical::H1),
        FamilyId::F4 if all_bound => Some(Canonical::H4),
        FamilyId::F4 => None,
        FamilyId::F5 | FamilyId::F7 => Some(Canonical::H5),
    };
    let basis_change = basis_change_to_canonical(id, params).ok();
    let notes = match id {
        FamilyId::F4 if !all_bound => "nilpotent (h1) at a = b = 0, isomorphic to h4 otherwise".to_string(),
        FamilyId::F4 if basis_change.is_none() => {
            "no stored basis change at this point (rotation data needs a = 0 or the origin)".to_string()
        }
        FamilyId::F7 if !all_bound => "basis change available at bound parameters".to_string(),
        _ => String::new(),
    };
    Ok(CatalogEntry { id, params: params.clone(), algebra, structure: standard_structure(), canonical_target, basis_change, notes })
}

/// Differentials of the canonical algebras h1..h5.
pub fn canonical(name: Canonical) -> LieAlgebra<Rational> {
    let alg = match name {
        Canonical::H1 => algebra(5, &[&[], &[], &[], &[], &[("-1", 1, 4), ("-1", 2, 3)]]),
        Canonical::H2 => algebra(5, &[&[("-2", 1, 5), ("-1", 2, 3)], &[("-1", 2, 5)], &[("-1", 3, 5)], &[("3", 4, 5)], &[]]),
        Canonical::H3 => algebra(
            5,
            &[&[("-2", 1, 4), ("-1", 2, 3)], &[("-1", 2, 4), ("-1", 3, 5)], &[("1", 2, 5), ("-1", 3, 4)], &[], &[]],
        ),
        Canonical::H4 => algebra(5, &[&[("-1", 1, 4)], &[("-1", 2, 5)], &[("1", 3, 4), ("1", 3, 5)], &[], &[]]),
        Canonical::H5 => algebra(5, &[&[("-1", 1, 5), ("-1", 2, 4)], &[("-1", 3, 4)], &[("1", 3, 5)], &[("-1", 4, 5)], &[]]),
    };
    alg.to_rational(&Params::new()).expect("canonical algebras are rational")
}

/// Reduced structure equations with the dependent coefficients filled in.
/// `free` maps any of `A, B12, B13, B14, B34, C13, C14` to a polynomial;
/// missing ones stay symbolic.
pub fn general_equations(free: &BTreeMap<String, Poly>) -> LieAlgebra<Poly> {
    let get = |k: &str| free.get(k).cloned().unwrap_or_else(|| Poly::var(k));
    let (a, b12, b13, b14, b34, c13, c14) = (get("A"), get("B12"), get("B13"), get("B14"), get("B34"), get("C13"), get("C14"));
    let n = |k: i64| Poly::from_i64(k);
    let half = rat(1, 2);
    let b15 = (b12.clone() * b14.clone() + b14.clone() * b34.clone() + n(2) * b14.clone() * c13.clone()
        - n(2) * b13.clone() * c14.clone())
    .scale(&half);
    let b25 = (b12.clone() * b13.clone() + n(4) * a.clone() * b34.clone() + n(3) * b13.clone() * b34.clone()
        - n(2) * b13.clone() * c13.clone()
        - n(2) * b14.clone() * c14.clone())
    .scale(&half);
    let b35 = (n(2) * a.clone() * b13.clone() + n(2) * b13.clone() * b13.clone() + n(2) * b14.clone() * b14.clone()
        - b12.clone() * b34.clone()
        + b34.clone() * b34.clone())
    .scale(&half);
    let c15 = (n(-4) * a.clone() * b14.clone() - n(2) * b13.clone() * b14.clone()
        + n(3) * b12.clone() * c14.clone()
        + b34.clone() * c14.clone())
    .scale(&half);
    let c25 = (n(-12) * a.clone() * a.clone() - b12.clone() * b12.clone() - n(10) * a.clone() * b13.clone()
        - n(2) * b13.clone() * b13.clone()
        - n(2) * b12.clone() * b34.clone()
        - b34.clone() * b34.clone()
        + n(3) * b12.clone() * c13.clone()
        + n(3) * b34.clone() * c13.clone()
        - n(2) * c13.clone() * c13.clone()
        - n(2) * c14.clone() * c14.clone())
    .scale(&half);
    let d15 = (-(b12.clone() * b12.clone()) - n(2) * b14.clone() * b14.clone() + b12.clone() * b34.clone()
        - n(3) * b12.clone() * c13.clone()
        + b34.clone() * c13.clone()
        - n(2) * c13.clone() * c13.clone()
        - n(2) * c14.clone() * c14.clone())
    .scale(&half);

    let t = |c: Poly, i: usize, j: usize| Form::term(5, c, &[i, j]);
    let de1 = t(a.clone(), 1, 4) + t(a.clone(), 2, 3);
    let de2 = t(b12.clone(), 1, 2)
        + t(b13.clone(), 1, 3)
        + t(b14.clone(), 1, 4)
        + t(b15.clone(), 1, 5)
        + t(-b14.clone(), 2, 3)
        + t(n(2) * a.clone() + b13.clone(), 2, 4)
        + t(b25.clone(), 2, 5)
        + t(b34.clone(), 3, 4)
        + t(b35, 3, 5);
    let de3 = t(n(3) * a.clone() + b13.clone(), 1, 2)
        + t(c13.clone(), 1, 3)
        + t(c14.clone(), 1, 4)
        + t(c15.clone(), 1, 5)
        + t(-c14.clone(), 2, 3)
        + t(-(b12.clone() + b34.clone() - c13.clone()), 2, 4)
        + t(c25, 2, 5)
        + t(-(a + b13), 3, 4)
        + t(-b25, 3, 5);
    let de4 = t(b14.clone(), 1, 2)
        + t(c14.clone(), 1, 3)
        + t(b34.clone() - c13.clone(), 1, 4)
        + t(d15, 1, 5)
        + t(b12 + c13, 2, 3)
        + t(c14.clone(), 2, 4)
        + t(c15, 2, 5)
        + t(-b14, 3, 4)
        + t(-b15, 3, 5);
    let de5 = two_form(5, DE5);
    LieAlgebra::new(vec![de1, de2, de3, de4, de5]).expect("well formed")
}

fn entry(s: &str) -> Poly {
    parse_poly(s).unwrap_or_else(|e| panic!("catalog entry '{s}': {e}"))
}

fn matrix(rows: &[&[&str]]) -> Vec<Vec<Poly>> {
    rows.iter().map(|r| r.iter().map(|s| entry(s)).collect()).collect()
}

pub fn sqrt2() -> Relations {
    Relations::new().with("s2", Poly::from_i64(2))
}

pub fn sqrt3() -> Relations {
    Relations::new().with("s3", Poly::from_i64(3))
}

fn bind(m: Vec<Vec<Poly>>, params: &Params) -> Vec<Vec<Poly>> {
    m.into_iter().map(|r| r.into_iter().map(|p| p.subst(params)).collect()).collect()
}

/// `f^1..f^5` of the h2 coframe for F1 (symbolic in r).
fn f1_to_h2() -> BasisChange<Poly> {
    BasisChange::new(matrix(&[
        &["0", "0", "0", "2", "-3*r"],
        &["0", "0", "5", "0", "0"],
        &["0", "2*r", "0", "0", "0"],
        &["0", "0", "0", "-3", "-3*r"],
        &["r", "0", "0", "0", "0"],
    ]))
}

fn f2_to_h3() -> BasisChange<Poly> {
    BasisChange::with_relations(
        matrix(&[
            &["0", "0", "0", "r", "0"],
            &["0", "0", "s2*r", "0", "0"],
            &["0", "s2*r", "0", "0", "0"],
            &["r", "0", "0", "0", "0"],
            &["0", "0", "0", "3*r", "3*r^2"],
        ]),
        sqrt2(),
    )
}

/// Uses `q^2 = a^2 + r^2` and `s3^2 = 3`.
fn f3_to_h4() -> BasisChange<Poly> {
    let rel = sqrt3().with("q", entry("a^2 + r^2"));
    BasisChange::with_relations(
        matrix(&[
            &["0", "2", "0", "0", "r"],
            &["s3*a/r", "-q/r", "0", "s3", "q"],
            &["-s3*a/r", "-q/r", "0", "-s3", "q"],
            &["0", "-2*a", "2*r", "0", "0"],
            &["-s3*q", "a", "-r", "0", "0"],
        ]),
        rel,
    )
}

fn f5_to_h5() -> BasisChange<Poly> {
    BasisChange::with_relations(
        matrix(&[
            &["0", "0", "0", "1", "-r/2"],
            &["0", "-s2", "0", "0", "0"],
            &["0", "0", "0", "-1", "-r/2"],
            &["0", "0", "s2*r", "0", "0"],
            &["r", "0", "0", "0", "0"],
        ]),
        sqrt2(),
    )
}

/// `sqrt(x)` as a rational if `x` is a perfect square, else the radical `q`
/// with relation `q^2 = x`.
fn radical(x: &Rational, name: &str) -> (Poly, Relations) {
    match x.pow_rat(&rat(1, 2)) {
        Some(root) => (Poly::constant(root), Relations::new()),
        None => (Poly::var(name), Relations::new().with(name, Poly::constant(x.clone()))),
    }
}

fn bound(id: FamilyId, params: &Params) -> Result<Vec<Rational>, CatalogError> {
    id.params()
        .iter()
        .map(|p| params.get(*p).cloned().ok_or_else(|| CatalogError::NeedsPoint(id, String::new())))
        .collect()
}

/// Stored coframe change from a family to its canonical algebra.
pub fn basis_change_to_canonical(id: FamilyId, params: &Params) -> Result<BasisChange<Poly>, CatalogError> {
    check_params(id, params)?;
    let specialize = |b: BasisChange<Poly>| specialize_change(b, params);
    match id {
        FamilyId::F1 => Ok(specialize(f1_to_h2())),
        FamilyId::F2 => Ok(specialize(f2_to_h3())),
        FamilyId::F3 => Ok(specialize(f3_to_h4())),
        FamilyId::F5 => Ok(specialize(f5_to_h5())),
        FamilyId::F4 => {
            let v = bound(id, params)?;
            let (a, b) = (&v[0], &v[1]);
            if a.is_zero() && b.is_zero() {
                let mut m = crate::linalg::identity::<Poly>(5);
                m[4][4] = Poly::constant(rat(1, 2));
                return Ok(BasisChange::new(m));
            }
            // Through F3(a, r = b): alpha = B3 R^T f.
            let pair = f3_f4_rotation(a, b).ok_or_else(|| {
                CatalogError::NeedsPoint(id, " with a = 0 (exact rotation data)".to_string())
            })?;
            let b3 = specialize_f3(a, b);
            let rt = BasisChange::with_relations(crate::linalg::transpose(&pair.map.basis_change.matrix), pair.map.basis_change.relations.clone());
            Ok(rt.then(&b3))
        }
        FamilyId::F7 => {
            let v = bound(id, params)?;
            let (a, r) = (&v[0], &v[1]);
            let pair = f5_f7_rotation(a, r);
            let s = (a * a + r * r) / r;
            let b5 = specialize_change(f5_to_h5(), &params_of(&[("r", s)]));
            let rt = BasisChange::with_relations(crate::linalg::transpose(&pair.map.basis_change.matrix), pair.map.basis_change.relations.clone());
            Ok(rt.then(&b5))
        }
    }
}

fn specialize_change(b: BasisChange<Poly>, params: &Params) -> BasisChange<Poly> {
    let mut rel = Relations::new();
    // Radical relations may mention parameters too.
    for (v, p) in b.relations.rules() {
        rel = rel.with(v, p.subst(params));
    }
    BasisChange::with_relations(bind(b.matrix, params), rel)
}

fn params_of(pairs: &[(&str, Rational)]) -> Params {
    params(pairs)
}

fn specialize_f3(a: &Rational, r: &Rational) -> BasisChange<Poly> {
    let b = f3_to_h4();
    let p = params(&[("a", a.clone()), ("r", r.clone())]);
    let q2 = a * a + r * r;
    let (q, qrel) = radical(&q2, "q");
    let images = BTreeMap::from([("q".to_string(), q)]);
    let m = bind(b.matrix, &p)
        .into_iter()
        .map(|row| row.into_iter().map(|x| x.subst_poly(&images).expect("q is a monomial")).collect())
        .collect();
    BasisChange::with_relations(m, sqrt3().merge(&qrel))
}

/// Exact `(cos θ, sin θ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationMap {
    /// Target coframe `f` in terms of the source coframe `e`.
    pub basis_change: BasisChange<Poly>,
    /// Coefficients `(c, s)` such that `ω1 = c F*ω̃1 - s F*ω̃2`, `ω2 = s F*ω̃1 + c F*ω̃2`.
    pub cos_sin: (Poly, Poly),
}

#[derive(Clone, Debug)]
pub struct RotationPair {
    pub source: (FamilyId, Params),
    pub target: (FamilyId, Params),
    pub map: RotationMap,
    /// `(cos θ, sin θ)` of the rotation angle of the construction.
    pub theta: (Poly, Poly),
}

/// `f = R e` taking F3(a, r = b) onto F4(a, b). Exact only when the angle
/// `σ = (θ - π)/3` has known cosine and sine, which holds for `a = 0`.
pub fn f3_f4_rotation(a: &Rational, b: &Rational) -> Option<RotationPair> {
    if !a.is_zero() || b.is_zero() {
        return None;
    }
    // θ = π/2 (b > 0) gives σ = -π/6; θ = 3π/2 (b < 0) gives σ = π/6.
    let half_s3 = entry("s3/2");
    let (cs, ss) = if b > &Rational::zero() { (half_s3, entry("-1/2")) } else { (half_s3, entry("1/2")) };
    let (ct, st) = if b > &Rational::zero() { (Poly::zero(), Poly::one()) } else { (Poly::zero(), -Poly::one()) };
    let m = rotation_matrix_f3_f4(&cs, &ss, &ct, &st);
    Some(RotationPair {
        source: (FamilyId::F3, params(&[("a", a.clone()), ("r", b.clone())])),
        target: (FamilyId::F4, params(&[("a", a.clone()), ("b", b.clone())])),
        map: RotationMap { basis_change: BasisChange::with_relations(m, sqrt3()), cos_sin: (ct.clone(), -st.clone()) },
        theta: (ct, st),
    })
}

/// Rows of the F3 → F4 coframe change in terms of `cos σ, sin σ, cos θ, sin θ`.
pub fn rotation_matrix_f3_f4(cs: &Poly, ss: &Poly, ct: &Poly, st: &Poly) -> Vec<Vec<Poly>> {
    let z = Poly::zero;
    vec![
        vec![ss.clone(), -(cs.clone() * ct.clone()), cs.clone() * st.clone(), z(), z()],
        vec![cs.clone(), ss.clone() * ct.clone(), -(ss.clone() * st.clone()), z(), z()],
        vec![z(), ss.clone() * st.clone(), ss.clone() * ct.clone(), cs.clone(), z()],
        vec![z(), -(cs.clone() * st.clone()), -(cs.clone() * ct.clone()), ss.clone(), z()],
        vec![z(), z(), z(), z(), Poly::one()],
    ]
}

/// `f = R e` taking F5(s = (a^2 + r^2)/r) onto F7(a, r).
pub fn f5_f7_rotation(a: &Rational, r: &Rational) -> RotationPair {
    let q2 = a * a + r * r;
    let (q, rel) = radical(&q2, "q");
    // 1/q = q / q^2 keeps everything polynomial in the radical.
    let q_inv = match q.as_rational() {
        Some(v) => Poly::constant(Rational::one() / v),
        None => q.scale(&(Rational::one() / q2.clone())),
    };
    let ct = q_inv.scale(a);
    let st = q_inv.scale(r);
    let z = Poly::zero;
    let o = Poly::one;
    let m = vec![
        vec![o(), z(), z(), z(), z()],
        vec![z(), ct.clone(), st.clone(), z(), z()],
        vec![z(), -st.clone(), ct.clone(), z(), z()],
        vec![z(), z(), z(), o(), z()],
        vec![z(), z(), z(), z(), o()],
    ];
    RotationPair {
        source: (FamilyId::F5, params(&[("r", q2 / r)])),
        target: (FamilyId::F7, params(&[("a", a.clone()), ("r", r.clone())])),
        map: RotationMap { basis_change: BasisChange::with_relations(m, rel), cos_sin: (ct.clone(), st.clone()) },
        theta: (ct, st),
    }
}

/// The two documented rotation equivalences at their reference points.
pub fn rotation_pairs() -> Vec<RotationPair> {
    vec![
        f3_f4_rotation(&rat(0, 1), &rat(1, 1)).expect("exact point"),
        f5_f7_rotation(&rat(0, 1), &rat(1, 1)),
    ]
}

/// K: F4 extended by `de6 = a1 e12`.
pub fn extension_k(a1: Poly) -> LieAlgebra<Poly> {
    family_symbolic(FamilyId::F4).extend(&Form::term(5, a1, &[1, 2]))
}

/// K̃: F5 extended by `de6 = a2 e13`.
pub fn extension_k_tilde(a2: Poly) -> LieAlgebra<Poly> {
    family_symbolic(FamilyId::F5).extend(&Form::term(5, a2, &[1, 3]))
}

/// K̃ (a2 = -2) onto h5 ⊕ R: the h5 coframe of F5 plus the closed covector
/// `e6 + (2/r) e3`.
pub fn k_tilde_to_h5_times_r() -> BasisChange<Poly> {
    let b = f5_to_h5();
    let mut m: Vec<Vec<Poly>> = b.matrix.into_iter().map(|mut r| {
        r.push(Poly::zero());
        r
    }).collect();
    m.push(vec![Poly::zero(), Poly::zero(), entry("2/r"), Poly::zero(), Poly::zero(), Poly::one()]);
    BasisChange::with_relations(m, b.relations)
}

/// Catalog entry rendered in the structure-file syntax.
pub fn dump(entry: &CatalogEntry) -> String {
    crate::structfile::render_structure_file(&format!("{}", entry.id), &entry.params, &entry.algebra, Some(&entry.structure))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{apply_basis_change, check_basis_change};

    fn r1() -> Params {
        params(&[("r", rat(1, 1))])
    }

    #[test]
    fn family_examples() {
        let f2 = family(FamilyId::F2, &r1()).unwrap();
        let expect = two_form(5, &[("1", 1, 2), ("3", 3, 4), ("3", 3, 5)]);
        assert_eq!(f2.algebra.de(2), &expect);
        let f4 = family(FamilyId::F4, &params(&[("a", rat(0, 1)), ("b", rat(0, 1))])).unwrap();
        for i in 1..=4 {
            assert!(f4.algebra.de(i).is_zero());
        }
        assert_eq!(f4.algebra.de(5), &two_form(5, DE5));
        assert!(matches!(family(FamilyId::F1, &params(&[("r", rat(0, 1))])), Err(CatalogError::ZeroR(_))));
        assert!(family(FamilyId::F1, &params(&[("b", rat(1, 1))])).is_err());
    }

    #[test]
    fn general_equations_examples() {
        let zero = |ks: &[&str]| -> BTreeMap<String, Poly> { ks.iter().map(|k| (k.to_string(), Poly::zero())).collect() };
        let all = ["A", "B12", "B13", "B14", "B34", "C13", "C14"];
        let g0 = general_equations(&zero(&all));
        assert_eq!(g0, family(FamilyId::F4, &params(&[("a", rat(0, 1)), ("b", rat(0, 1))])).unwrap().algebra);
        let mut free = zero(&all);
        free.insert("B12".into(), Poly::var("r"));
        free.insert("C13".into(), Poly::var("r"));
        assert_eq!(general_equations(&free), family_symbolic(FamilyId::F1));
        let mut one = zero(&all);
        one.insert("B12".into(), Poly::one());
        one.insert("C13".into(), Poly::one());
        let g = general_equations(&one);
        assert!(g.de(2).coeff(&[3, 5]).is_zero());
    }

    #[test]
    fn canonical_examples() {
        let h1 = canonical(Canonical::H1);
        assert_eq!(h1.de(5), &(Form::term(5, rat(-1, 1), &[1, 4]) + Form::term(5, rat(-1, 1), &[2, 3])));
        let h4 = canonical(Canonical::H4);
        assert_eq!(h4.de(3), &(Form::basis(5, &[3, 4]) + Form::basis(5, &[3, 5])));
        assert!(h4.de(4).is_zero() && h4.de(5).is_zero());
        for h in [Canonical::H1, Canonical::H2, Canonical::H3, Canonical::H4, Canonical::H5] {
            assert!(canonical(h).jacobi_check().pass, "{h}");
        }
    }

    #[test]
    fn symbolic_basis_changes_without_inversion() {
        for (id, h) in [(FamilyId::F1, Canonical::H2), (FamilyId::F2, Canonical::H3), (FamilyId::F3, Canonical::H4), (FamilyId::F5, Canonical::H5)] {
            let b = basis_change_to_canonical(id, &Params::new()).unwrap();
            let res = check_basis_change(&family_symbolic(id), &canonical(h).to_poly(), &b);
            assert!(res.is_empty(), "{id}: {res:?}");
        }
    }

    #[test]
    fn symbolic_apply_where_determinant_is_a_unit() {
        for (id, h) in [(FamilyId::F1, Canonical::H2), (FamilyId::F2, Canonical::H3), (FamilyId::F5, Canonical::H5)] {
            let b = basis_change_to_canonical(id, &Params::new()).unwrap();
            let g = apply_basis_change(&family_symbolic(id), &b).unwrap();
            assert_eq!(g, canonical(h).to_poly(), "{id}");
        }
    }

    #[test]
    fn basis_changes_at_points() {
        let cases: Vec<(FamilyId, Params, Canonical)> = vec![
            (FamilyId::F3, params(&[("a", rat(0, 1)), ("r", rat(1, 1))]), Canonical::H4),
            (FamilyId::F3, params(&[("a", rat(1, 1)), ("r", rat(1, 1))]), Canonical::H4),
            (FamilyId::F3, params(&[("a", rat(3, 1)), ("r", rat(-4, 1))]), Canonical::H4),
            (FamilyId::F4, params(&[("a", rat(0, 1)), ("b", rat(0, 1))]), Canonical::H1),
            (FamilyId::F4, params(&[("a", rat(0, 1)), ("b", rat(1, 1))]), Canonical::H4),
            (FamilyId::F4, params(&[("a", rat(0, 1)), ("b", rat(-3, 2))]), Canonical::H4),
            (FamilyId::F7, params(&[("a", rat(0, 1)), ("r", rat(1, 1))]), Canonical::H5),
            (FamilyId::F7, params(&[("a", rat(3, 1)), ("r", rat(4, 1))]), Canonical::H5),
            (FamilyId::F7, params(&[("a", rat(1, 1)), ("r", rat(1, 1))]), Canonical::H5),
        ];
        for (id, p, h) in cases {
            let e = family(id, &p).unwrap();
            assert_eq!(e.canonical_target, Some(h), "{id} {p:?}");
            let b = e.basis_change.clone().unwrap_or_else(|| panic!("{id} {p:?}"));
            let res = check_basis_change(&e.algebra, &canonical(h).to_poly(), &b);
            assert!(res.is_empty(), "{id} {p:?}: {res:?}");
            let g = apply_basis_change(&e.algebra, &b).unwrap();
            assert_eq!(g, canonical(h).to_poly(), "{id} {p:?}");
        }
        assert!(basis_change_to_canonical(FamilyId::F4, &params(&[("a", rat(1, 1)), ("b", rat(1, 1))])).is_err());
    }

    #[test]
    fn k_tilde_is_h5_times_line() {
        let kt = extension_k_tilde(Poly::from_i64(-2));
        let b = k_tilde_to_h5_times_r();
        let target = canonical(Canonical::H5).with_closed_extra().to_poly();
        assert!(check_basis_change(&kt, &target, &b).is_empty());
        assert_eq!(apply_basis_change(&kt, &b).unwrap(), target);
    }
}
