use crate::catalog::{FamilyId, Params};
use crate::scalars::{rat, rational_to_f64, Coeff, Rational};
use serde::Serialize;
use thiserror::Error;

/// Denominators and radicands below this stop the integration.
pub const GUARD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("no hypo evolution ODE for family {0} (use the rotation-equivalent F4/F5)")]
    Unsupported(FamilyId),
    #[error("missing parameter '{0}'")]
    MissingParam(String),
    #[error("unexpected parameter '{0}'")]
    UnknownParam(String),
    #[error("initial state is already at a singularity: {0}")]
    SingularStart(String),
    #[error("tolerance must be positive")]
    BadTolerance,
}

/// An autonomous system `y' = F(y)` whose right-hand side can be evaluated in
/// any coefficient ring (floats for stepping, jets for derivatives, rationals
/// for exact values at `t = 0`).
pub trait Autonomous: Sync {
    fn dim(&self) -> usize;
    fn names(&self) -> Vec<String>;
    fn initial(&self) -> Vec<Rational>;
    /// `None` outside the domain (negative radicand, zero denominator).
    fn rhs<C: Coeff>(&self, y: &[C]) -> Option<Vec<C>>;
    /// Reason to stop if `y` is within [`GUARD`] of a singularity.
    fn guard(&self, y: &[f64]) -> Option<String>;
}

/// Per-family data of the cohomogeneity-one hypo evolution, reduced to one
/// unknown `f(t)` with `f(0) = 1`, `f'(0) = 2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarOde {
    pub family: FamilyId,
    /// Parameters as given (`r` or `a`, `b`).
    #[serde(skip)]
    pub params: Params,
    /// `r^2` for F1, F2, F5; `ρ = a^2 + b^2` for F4.
    #[serde(serialize_with = "ser_rational")]
    pub k: Rational,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn get(params: &Params, name: &str) -> Result<Rational, FlowError> {
    params.get(name).cloned().ok_or_else(|| FlowError::MissingParam(name.to_string()))
}

fn only(params: &Params, allowed: &[&str]) -> Result<(), FlowError> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(FlowError::UnknownParam(k.clone())),
        None => Ok(()),
    }
}

/// Hypo evolution ODE of a family. F2 accepts `r = 0`, which is the nilpotent
/// case with the explicit solution `f = (1+4t)^(1/2)`.
pub fn build_hypo_ode(family: FamilyId, params: &Params) -> Result<ScalarOde, FlowError> {
    let k = match family {
        FamilyId::F1 | FamilyId::F2 | FamilyId::F5 => {
            only(params, &["r"])?;
            let r = get(params, "r")?;
            &r * &r
        }
        FamilyId::F4 => {
            only(params, &["a", "b", "rho"])?;
            match params.get("rho") {
                Some(rho) => rho.clone(),
                None => {
                    let (a, b) = (get(params, "a")?, get(params, "b")?);
                    &a * &a + &b * &b
                }
            }
        }
        FamilyId::F3 | FamilyId::F7 => return Err(FlowError::Unsupported(family)),
    };
    Ok(ScalarOde { family, params: params.clone(), k })
}

impl ScalarOde {
    pub fn kf(&self) -> f64 {
        rational_to_f64(&self.k)
    }

    /// The η-Einstein constant of the F2 second-order form `ff'' + f'^2 − 2λf = 0`.
    pub fn lambda_ode(&self) -> Option<Rational> {
        (self.family == FamilyId::F2).then(|| -rat(3, 1) * self.k.clone())
    }

    /// Radicand of the first-order form as a function of `f`.
    pub fn radicand<C: Coeff>(&self, f: &C) -> C {
        let k = C::from_rational(&self.k);
        let f3 = f.powi(3);
        match self.family {
            FamilyId::F1 | FamilyId::F2 => C::one() + k.clone() - k * f3,
            FamilyId::F4 => C::from_i64(8) + C::from_i64(4) * k.clone() - C::from_i64(4) * k * f3,
            _ => C::from_i64(8) + C::from_i64(2) * k.clone() - C::from_i64(2) * k * f3,
        }
    }

    /// `f'` as a function of `f`.
    pub fn first_order_rhs<C: Coeff>(&self, f: &C) -> Option<C> {
        let rad = self.radicand(f);
        let finv = f.try_inv()?;
        Some(match self.family {
            FamilyId::F2 => C::from_i64(2) * finv * rad.pow_rat(&rat(1, 2))?,
            FamilyId::F1 => C::from_i64(2) * finv * rad.pow_rat(&rat(1, 4))?,
            _ => finv * rad.pow_rat(&rat(1, 3))?,
        })
    }

    /// Second-order form; zero along solutions.
    pub fn second_order_residual<C: Coeff>(&self, f: &C, fp: &C, fpp: &C) -> C {
        let k = C::from_rational(&self.k);
        match self.family {
            FamilyId::F2 => f.clone() * fpp.clone() + fp.clone() * fp.clone() + C::from_i64(6) * k * f.clone(),
            FamilyId::F1 => {
                C::from_i64(12) * k + f.clone() * fp.powi(4) + f.clone() * f.clone() * fp.clone() * fp.clone() * fpp.clone()
            }
            FamilyId::F4 => C::from_i64(4) * k + fp.powi(3) + f.clone() * fp.clone() * fpp.clone(),
            _ => C::from_i64(2) * k + fp.powi(3) + f.clone() * fp.clone() * fpp.clone(),
        }
    }

    /// `f''` solved from the second-order form.
    pub fn second_order_rhs<C: Coeff>(&self, f: &C, fp: &C) -> Option<C> {
        let zero = C::zero();
        let r0 = self.second_order_residual(f, fp, &zero);
        let coeff = self.second_order_residual(f, fp, &C::one()) - r0.clone();
        Some(-(r0 * coeff.try_inv()?))
    }

    /// The conserved quantity `Q(f, f')`.
    pub fn first_integral<C: Coeff>(&self, f: &C, fp: &C) -> C {
        let k = C::from_rational(&self.k);
        let ffp = f.clone() * fp.clone();
        match self.family {
            FamilyId::F2 => (ffp.scale(&rat(1, 2))).powi(2) + k * f.powi(3),
            FamilyId::F1 => (ffp.scale(&rat(1, 2))).powi(4) + k * f.powi(3),
            FamilyId::F4 => ffp.powi(3) + C::from_i64(4) * k * f.powi(3),
            _ => ffp.powi(3) + C::from_i64(2) * k * f.powi(3),
        }
    }

    pub fn conserved_value(&self) -> Rational {
        self.first_integral(&rat(1, 1), &rat(2, 1))
    }

    /// The same evolution as a first-order system in `(f, f')`.
    pub fn second_order_system(&self) -> SecondOrder<'_> {
        SecondOrder(self)
    }
}

impl Autonomous for ScalarOde {
    fn dim(&self) -> usize {
        1
    }
    fn names(&self) -> Vec<String> {
        vec!["f".into()]
    }
    fn initial(&self) -> Vec<Rational> {
        vec![rat(1, 1)]
    }
    fn rhs<C: Coeff>(&self, y: &[C]) -> Option<Vec<C>> {
        Some(vec![self.first_order_rhs(&y[0])?])
    }
    fn guard(&self, y: &[f64]) -> Option<String> {
        let f = y[0];
        let rad = self.radicand(&f);
        if f.abs() < GUARD {
            return Some(format!("f = {f:e}"));
        }
        if rad < GUARD {
            return Some(format!("radicand = {rad:e}"));
        }
        None
    }
}

/// State `(f, f')` with `f''` from the second-order form; the first integral
/// is no longer built in, so its drift measures integration error.
pub struct SecondOrder<'a>(pub &'a ScalarOde);

impl Autonomous for SecondOrder<'_> {
    fn dim(&self) -> usize {
        2
    }
    fn names(&self) -> Vec<String> {
        vec!["f".into(), "fp".into()]
    }
    fn initial(&self) -> Vec<Rational> {
        vec![rat(1, 1), rat(2, 1)]
    }
    fn rhs<C: Coeff>(&self, y: &[C]) -> Option<Vec<C>> {
        Some(vec![y[1].clone(), self.0.second_order_rhs(&y[0], &y[1])?])
    }
    fn guard(&self, y: &[f64]) -> Option<String> {
        if y[0].abs() < GUARD || y[1].abs() < GUARD {
            return Some(format!("f = {:e}, f' = {:e}", y[0], y[1]));
        }
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HitchinKind {
    /// F4 extended by `de6 = a1 e12`.
    K,
    /// F5 extended by `de6 = a2 e13`.
    KTilde,
}

impl std::str::FromStr for HitchinKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "K" | "k" => Ok(HitchinKind::K),
            "Ktilde" | "ktilde" | "KTilde" | "Kt" => Ok(HitchinKind::KTilde),
            _ => Err(format!("unknown kind '{s}' (expected K or Ktilde)")),
        }
    }
}

/// Hitchin evolution for `(f, h, k)` with `f(0) = h(0) = k(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct HitchinSystem {
    pub kind: HitchinKind,
    pub params: Params,
    /// `a^2 + b^2` for K, `r^2` for K̃.
    pub c0: Rational,
    /// `a1` for K, `a2` for K̃.
    pub ext: Rational,
}

pub fn build_hitchin_system(kind: HitchinKind, params: &Params) -> Result<HitchinSystem, FlowError> {
    let (c0, ext) = match kind {
        HitchinKind::K => {
            only(params, &["a", "b", "a1"])?;
            let (a, b) = (get(params, "a")?, get(params, "b")?);
            (&a * &a + &b * &b, get(params, "a1")?)
        }
        HitchinKind::KTilde => {
            only(params, &["r", "a2"])?;
            let r = get(params, "r")?;
            (&r * &r, get(params, "a2")?)
        }
    };
    Ok(HitchinSystem { kind, params: params.clone(), c0, ext })
}

impl Autonomous for HitchinSystem {
    fn dim(&self) -> usize {
        3
    }
    fn names(&self) -> Vec<String> {
        vec!["f".into(), "h".into(), "k".into()]
    }
    fn initial(&self) -> Vec<Rational> {
        vec![rat(1, 1); 3]
    }
    fn rhs<C: Coeff>(&self, y: &[C]) -> Option<Vec<C>> {
        let (f, h, k) = (&y[0], &y[1], &y[2]);
        let kf_inv = (k.clone() * f.clone()).try_inv()?;
        let f_inv = f.try_inv()?;
        let c0 = C::from_rational(&self.c0);
        let e = C::from_rational(&self.ext);
        let two = C::from_i64(2);
        let half = rat(1, 2);
        let k3 = k.powi(3);
        Some(match self.kind {
            HitchinKind::K => vec![
                two.clone() * k.clone() + (e.clone() * h.clone() * kf_inv.clone()).scale(&half),
                -(e * h.clone() * h.clone() * kf_inv.clone() * f_inv).scale(&half),
                -((c0 + two * k3) * kf_inv),
            ],
            HitchinKind::KTilde => vec![
                two * k.clone() - (e.clone() * h.clone() * kf_inv.clone()).scale(&half),
                (e * h.clone() * h.clone() * kf_inv.clone() * f_inv).scale(&half),
                -((c0 + C::from_i64(4) * k3) * kf_inv).scale(&half),
            ],
        })
    }
    fn guard(&self, y: &[f64]) -> Option<String> {
        let names = ["f", "h", "k"];
        y.iter().zip(names).find(|(v, _)| v.abs() < GUARD).map(|(v, n)| format!("{n} = {v:e}"))
    }
}
