//! Cohomogeneity-one metrics on `G × I` built from evolution solutions:
//! orthonormal coframes with jet coefficients, Levi-Civita connection and
//! curvature forms, curvature-span ranks and holonomy certification.

mod certify;
mod frame;

pub use certify::{
    certify_g2, certify_su3, d_hat, d_t, g2_forms, g2_half_flat_forms, holonomy_rank, holonomy_rank_exact_t0,
    su2_at, su3_product_forms, to_static, total_d, verify_hitchin_lift, Certificate, Residuals,
};
pub use frame::{
    curvature_rank, CohomFrame, CurvatureReport, FrameError, FramePattern, Matrix, Node, RankCoeff, RankReport,
};

use crate::catalog::{extension_k, extension_k_tilde, family, family_symbolic, CatalogError, FamilyId, Params};
use crate::flow::{
    build_hitchin_system, build_hypo_ode, derivatives_in, integrate, Autonomous, FlowError, HitchinKind,
    HitchinSystem, IntegrateOptions, ScalarOde, Status, Trajectory,
};
use crate::liealg::LieAlgebra;
use crate::scalars::{rat, rational_to_f64, Coeff, Poly, Rational};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HolonomyError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("{0}")]
    Params(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    Hypo(FamilyId),
    Hitchin(HitchinKind),
    Static,
}

#[derive(Clone, Debug)]
enum System {
    Hypo(ScalarOde),
    Hitchin(HitchinSystem),
    None,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Explicit {
    /// `f = (1+4t)^(1/2)`
    Su3,
    /// `(f, h, k) = (1+5t)^(3/5, -1/5, -2/5)`
    G2,
}

/// An evolution solution together with the data needed to build frames on it.
#[derive(Clone, Debug)]
pub struct Solution {
    pub label: String,
    pub kind: SolutionKind,
    pub pattern: FramePattern,
    /// Structure constants of the group factor.
    pub base: LieAlgebra<f64>,
    /// The same, exactly, when the parameters are rational.
    pub base_exact: Option<LieAlgebra<Rational>>,
    pub trajectory: Option<Trajectory>,
    system: System,
    explicit: Option<Explicit>,
    tol: f64,
}

fn to_f64_algebra(g: &LieAlgebra<Rational>) -> LieAlgebra<f64> {
    g.map(rational_to_f64)
}

fn poly_algebra_f64(g: &LieAlgebra<Poly>, values: &BTreeMap<String, f64>) -> Result<LieAlgebra<f64>, HolonomyError> {
    g.try_map(|p| p.eval_f64(values).ok_or(()))
        .map_err(|_| HolonomyError::Params("unbound parameter in structure constants".into()))
}

fn hypo_base(id: FamilyId, p: &Params) -> Result<(LieAlgebra<f64>, Option<LieAlgebra<Rational>>), HolonomyError> {
    let exact = match id {
        FamilyId::F4 if p.contains_key("rho") => {
            if p.contains_key("a") || p.contains_key("b") {
                return Err(HolonomyError::Params("give either rho or (a, b) for F4".into()));
            }
            let rho = &p["rho"];
            if rho < &rat(0, 1) {
                return Err(HolonomyError::Params("rho must be non-negative".into()));
            }
            // The frame only sees a^2 + b^2 up to rotation; take (a, b) = (√rho, 0).
            match rho.pow_rat(&rat(1, 2)) {
                Some(a) => family(id, &crate::catalog::params(&[("a", a), ("b", rat(0, 1))]))?.rational_algebra(),
                None => {
                    let vals = BTreeMap::from([("a".to_string(), rational_to_f64(rho).sqrt()), ("b".to_string(), 0.0)]);
                    return Ok((poly_algebra_f64(&family_symbolic(id), &vals)?, None));
                }
            }
        }
        FamilyId::F2 if p.get("r").is_some_and(|r| r.is_zero()) => family_symbolic(id).to_rational(p),
        _ => family(id, p)?.rational_algebra(),
    };
    let exact = exact.ok_or_else(|| HolonomyError::Params(format!("{id} needs all parameters bound")))?;
    Ok((to_f64_algebra(&exact), Some(exact)))
}

fn hitchin_base(kind: HitchinKind, p: &Params) -> Result<LieAlgebra<Rational>, HolonomyError> {
    let (alg, ext, rest): (LieAlgebra<Poly>, &str, &[&str]) = match kind {
        HitchinKind::K => (extension_k(Poly::var("a1")), "a1", &["a", "b"]),
        HitchinKind::KTilde => (extension_k_tilde(Poly::var("a2")), "a2", &["r"]),
    };
    let mut bind = Params::new();
    for name in rest.iter().chain([&ext]) {
        let v = p.get(*name).ok_or_else(|| HolonomyError::Flow(FlowError::MissingParam(name.to_string())))?;
        bind.insert(name.to_string(), v.clone());
    }
    alg.to_rational(&bind).ok_or_else(|| HolonomyError::Params("structure constants not rational".into()))
}

fn pattern_for(id: FamilyId) -> Result<FramePattern, HolonomyError> {
    Ok(match id {
        FamilyId::F1 => FramePattern::F1,
        FamilyId::F2 => FramePattern::F2,
        FamilyId::F4 => FramePattern::F4,
        FamilyId::F5 => FramePattern::F5,
        other => return Err(FlowError::Unsupported(other).into()),
    })
}

fn describe(p: &Params) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

/// Node of `(1 + c t)^p` for each exponent.
fn power_node(t: f64, c: f64, exps: &[f64]) -> Node<f64> {
    let u = 1.0 + c * t;
    let mut node = Node { t, v: vec![], d1: vec![], d2: vec![], d3: vec![] };
    for &p in exps {
        node.v.push(u.powf(p));
        node.d1.push(p * c * u.powf(p - 1.0));
        node.d2.push(p * (p - 1.0) * c * c * u.powf(p - 2.0));
        node.d3.push(p * (p - 1.0) * (p - 2.0) * c * c * c * u.powf(p - 3.0));
    }
    node
}

impl Solution {
    /// Numerical hypo evolution of a family on `[0, t_end]`, landing exactly on `stops`.
    pub fn hypo(id: FamilyId, p: &Params, t_end: f64, tol: f64, stops: &[f64]) -> Result<Self, HolonomyError> {
        let pattern = pattern_for(id)?;
        let ode = build_hypo_ode(id, p)?;
        let (base, base_exact) = hypo_base(id, p)?;
        let traj = integrate(&ode, t_end, &IntegrateOptions::new(tol).with_stops(stops))?;
        Ok(Solution {
            label: format!("{id}({})", describe(p)),
            kind: SolutionKind::Hypo(id),
            pattern,
            base,
            base_exact,
            trajectory: Some(traj),
            system: System::Hypo(ode),
            explicit: None,
            tol,
        })
    }

    /// Numerical Hitchin evolution for K (`a, b, a1`) or K̃ (`r, a2`).
    pub fn hitchin(kind: HitchinKind, p: &Params, t_end: f64, tol: f64, stops: &[f64]) -> Result<Self, HolonomyError> {
        let sys = build_hitchin_system(kind, p)?;
        let exact = hitchin_base(kind, p)?;
        let traj = integrate(&sys, t_end, &IntegrateOptions::new(tol).with_stops(stops))?;
        let pattern = match kind {
            HitchinKind::K => FramePattern::G2K,
            HitchinKind::KTilde => FramePattern::G2KTilde,
        };
        Ok(Solution {
            label: format!("{kind:?}({})", describe(p)),
            kind: SolutionKind::Hitchin(kind),
            pattern,
            base: to_f64_algebra(&exact),
            base_exact: Some(exact),
            trajectory: Some(traj),
            system: System::Hitchin(sys),
            explicit: None,
            tol,
        })
    }

    /// `f = (1+4t)^(1/2)` on F2 with `r = 0`, evaluated in closed form.
    pub fn explicit_su3() -> Self {
        let p = crate::catalog::params(&[("r", rat(0, 1))]);
        let ode = build_hypo_ode(FamilyId::F2, &p).expect("valid parameters");
        let (base, base_exact) = hypo_base(FamilyId::F2, &p).expect("valid parameters");
        Solution {
            label: "F2(r=0) explicit".into(),
            kind: SolutionKind::Hypo(FamilyId::F2),
            pattern: FramePattern::F2,
            base,
            base_exact,
            trajectory: None,
            system: System::Hypo(ode),
            explicit: Some(Explicit::Su3),
            tol: 0.0,
        }
    }

    /// `(f, h, k) = ((1+5t)^(3/5), (1+5t)^(-1/5), (1+5t)^(-2/5))` on K with
    /// `a = b = 0`, `a1 = 2`, evaluated in closed form.
    pub fn explicit_g2() -> Self {
        let p = crate::catalog::params(&[("a", rat(0, 1)), ("b", rat(0, 1)), ("a1", rat(2, 1))]);
        let sys = build_hitchin_system(HitchinKind::K, &p).expect("valid parameters");
        let exact = hitchin_base(HitchinKind::K, &p).expect("valid parameters");
        Solution {
            label: "K(a=0,b=0,a1=2) explicit".into(),
            kind: SolutionKind::Hitchin(HitchinKind::K),
            pattern: FramePattern::G2K,
            base: to_f64_algebra(&exact),
            base_exact: Some(exact),
            trajectory: None,
            system: System::Hitchin(sys),
            explicit: Some(Explicit::G2),
            tol: 0.0,
        }
    }

    /// The product metric `g + dt²` with a fixed coframe (control case).
    pub fn static_frame(base: LieAlgebra<Rational>) -> Self {
        Solution {
            label: "static".into(),
            kind: SolutionKind::Static,
            pattern: FramePattern::Static,
            base: to_f64_algebra(&base),
            base_exact: Some(base),
            trajectory: None,
            system: System::None,
            explicit: None,
            tol: 0.0,
        }
    }

    /// Node at time `t`: closed form, a stored trajectory node, or a fresh
    /// integration ending exactly at `t`.
    pub fn node(&self, t: f64) -> Result<Node<f64>, FrameError> {
        match self.explicit {
            Some(Explicit::Su3) => {
                if 1.0 + 4.0 * t <= 0.0 {
                    return Err(FrameError::OutOfRange { t0: t, lo: -0.25, hi: f64::INFINITY });
                }
                return Ok(power_node(t, 4.0, &[0.5]));
            }
            Some(Explicit::G2) => {
                if 1.0 + 5.0 * t <= 0.0 {
                    return Err(FrameError::OutOfRange { t0: t, lo: -0.2, hi: f64::INFINITY });
                }
                return Ok(power_node(t, 5.0, &[0.6, -0.2, -0.4]));
            }
            None => {}
        }
        let Some(traj) = &self.trajectory else {
            return Ok(Node { t, v: vec![], d1: vec![], d2: vec![], d3: vec![] });
        };
        if let Some(n) = traj.node_at(t) {
            return Ok(Node {
                t,
                v: traj.values[n].clone(),
                d1: traj.d1[n].clone(),
                d2: traj.d2[n].clone(),
                d3: traj.d3[n].clone(),
            });
        }
        let (lo, hi) = {
            let last = traj.last_time();
            (last.min(0.0), last.max(0.0))
        };
        if t < lo || t > hi {
            return Err(FrameError::OutOfRange { t0: t, lo, hi });
        }
        let opts = IntegrateOptions::new(self.tol);
        let fresh = match &self.system {
            System::Hypo(o) => integrate(o, t, &opts),
            System::Hitchin(h) => integrate(h, t, &opts),
            System::None => unreachable!("static solutions have no trajectory"),
        }
        .map_err(|_| FrameError::Unreachable(t))?;
        if fresh.status != Status::Completed {
            return Err(FrameError::Unreachable(t));
        }
        let n = fresh.len() - 1;
        Ok(Node {
            t,
            v: fresh.values[n].clone(),
            d1: fresh.d1[n].clone(),
            d2: fresh.d2[n].clone(),
            d3: fresh.d3[n].clone(),
        })
    }

    /// Exact Taylor data at `t = 0` from the right-hand side over the rationals.
    pub fn exact_initial_node(&self) -> Option<Node<Rational>> {
        fn from<S: Autonomous>(s: &S) -> Option<Node<Rational>> {
            let y = s.initial();
            let (d1, d2, d3) = derivatives_in::<S, Rational>(s, &y)?;
            Some(Node { t: 0.0, v: y, d1, d2, d3 })
        }
        match &self.system {
            System::Hypo(o) => from(o),
            System::Hitchin(h) => from(h),
            System::None => Some(Node { t: 0.0, v: vec![], d1: vec![], d2: vec![], d3: vec![] }),
        }
    }
}

/// The orthonormal coframe of a solution at `t0`.
pub fn frame_at(sol: &Solution, t0: f64) -> Result<CohomFrame<f64>, FrameError> {
    let node = sol.node(t0)?;
    let s = sol.pattern.scalings(&node, sol.base.dim()).ok_or(FrameError::Domain(t0))?;
    CohomFrame::new(sol.base.clone(), s, t0)
}

/// The coframe at `t = 0` with exact rational jets, when the parameters allow it.
pub fn frame_at_zero_exact(sol: &Solution) -> Option<CohomFrame<Rational>> {
    let base = sol.base_exact.clone()?;
    let node = sol.exact_initial_node()?;
    let s = sol.pattern.scalings(&node, base.dim())?;
    CohomFrame::new(base, s, 0.0).ok()
}

/// Connection forms of the coframe at `t0` (see [`CohomFrame::connection_forms`]).
pub fn connection_forms<C: Coeff>(frame: &CohomFrame<C>) -> Matrix<crate::exterior::Form<crate::scalars::Jet2<C>>> {
    frame.connection_forms()
}

pub fn curvature_forms<C: RankCoeff>(frame: &CohomFrame<C>) -> CurvatureReport<C> {
    frame.curvature_forms()
}

#[cfg(test)]
mod tests;
