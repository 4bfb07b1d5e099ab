use super::frame::{curvature_rank, CohomFrame, FrameError, Matrix, Node, RankCoeff, RankReport};
use super::{Solution, SolutionKind};
use crate::catalog::standard_structure;
use crate::exterior::{Form, DEFAULT_PIVOT_THRESHOLD};
use crate::flow::HitchinKind;
use crate::liealg::LieAlgebra;
use crate::scalars::{rat, Coeff, Jet2, Rational};
use rayon::prelude::*;
use serde::Serialize;

/// `d` on `G × I` of a form with `t`-dependent coefficients in the static
/// coframe; `e^{n+1} = dt`. Only the value slot of the result is returned.
pub fn total_d<C: Coeff>(base: &LieAlgebra<C>, form: &Form<Jet2<C>>) -> Form<C> {
    let n = base.dim();
    let big = form.dim();
    assert!(big == n || big == n + 1, "form must live on the group or on the product");
    let values = form.map(|c| c.v.clone());
    let ext = if big == n { base.clone() } else { base.with_closed_extra() };
    let spatial = ext.d_form(&values);
    let dt = Form::basis(n + 1, &[n + 1]);
    let time = dt.wedge(&form.map(|c| c.d1.clone()).with_dim(n + 1));
    spatial.with_dim(n + 1) + time
}

/// `d̂` on the group factor, coefficientwise in the jets.
pub fn d_hat<C: Coeff>(base: &LieAlgebra<C>, form: &Form<Jet2<C>>) -> Form<Jet2<C>> {
    base.map(|c| Jet2::constant(c.clone())).d_form(form)
}

/// `∂t` of a form with jet coefficients.
pub fn d_t<C: Coeff>(form: &Form<Jet2<C>>) -> Form<Jet2<C>> {
    form.map(|c| c.derivative())
}

fn value<C: Coeff>(form: &Form<Jet2<C>>) -> Form<C> {
    form.map(|c| c.v.clone())
}

/// Rewrites a form given in the orthonormal coframe in terms of the static
/// coframe: `θ^I = (Π_{i∈I} s_i) e^I`.
pub fn to_static<C: Coeff>(form: &Form<Rational>, scalings: &[Jet2<C>]) -> Form<Jet2<C>> {
    let dim = form.dim();
    let mut out = Form::zero(dim);
    for (mask, c) in form.terms() {
        let mut coeff = Jet2::constant(C::from_rational(c));
        for (i, s) in scalings.iter().enumerate() {
            if mask & (1 << i) != 0 {
                coeff = coeff * s.clone();
            }
        }
        out.add_term(mask, coeff);
    }
    out
}

/// The time-dependent SU(2)-structure `θ^5, θ^12 + θ^34, θ^13 + θ^42, θ^14 + θ^23`
/// of a hypo evolution, in the static coframe.
pub fn su2_at<C: Coeff>(scalings: &[Jet2<C>]) -> [Form<Jet2<C>>; 4] {
    let s = standard_structure::<Rational>();
    [&s.eta, &s.omega1, &s.omega2, &s.omega3].map(|f| to_static(f, scalings))
}

/// `F = η∧dt + ω3`, `Ψ₊ = ω1∧η − ω2∧dt`, `Ψ₋ = ω2∧η + ω1∧dt` on `N × I`.
pub fn su3_product_forms<C: Coeff>(su2: &[Form<Jet2<C>>; 4]) -> [Form<Jet2<C>>; 3] {
    let up = |f: &Form<Jet2<C>>| f.with_dim(6);
    let [eta, w1, w2, w3] = su2.clone().map(|f| up(&f));
    let dt: Form<Jet2<C>> = Form::basis(6, &[6]);
    [
        eta.wedge(&dt) + w3,
        w1.wedge(&eta) - w2.wedge(&dt),
        w2.wedge(&eta) + w1.wedge(&dt),
    ]
}

/// Half-flat SU(3) forms `(F, Ψ₊, Ψ₋)` on the 6-dimensional group for the
/// Hitchin solutions, as functions of the jets of `(f, h, k)`.
pub fn g2_half_flat_forms<C: Coeff>(kind: HitchinKind, f: &Jet2<C>, h: &Jet2<C>, k: &Jet2<C>) -> [Form<Jet2<C>>; 3] {
    let e = |c: Jet2<C>, idx: &[usize]| Form::term(6, c, idx);
    let one = Jet2::<C>::one();
    let kh = k.clone() * h.clone();
    let fh = f.clone() * h.clone();
    let fk = f.clone() * k.clone();
    let f2 = f.clone() * f.clone();
    let hk = h.clone() * k.try_inv().expect("k > 0");
    match kind {
        HitchinKind::K => [
            e(f.clone(), &[1, 3]) - e(f.clone(), &[2, 4]) + e(kh.clone(), &[5, 6]),
            -e(f2.clone() * k.clone() * k.clone(), &[1, 2, 5]) - e(one, &[3, 4, 5]) - e(fh.clone(), &[1, 4, 6])
                - e(fh, &[2, 3, 6]),
            -e(f2 * kh, &[1, 2, 6]) - e(hk, &[3, 4, 6]) + e(fk.clone(), &[1, 4, 5]) + e(fk, &[2, 3, 5]),
        ],
        HitchinKind::KTilde => [
            e(f.clone(), &[1, 2]) + e(f.clone(), &[3, 4]) + e(kh.clone(), &[5, 6]),
            e(f2.clone() * k.clone() * k.clone(), &[1, 3, 5]) - e(one, &[2, 4, 5]) - e(fh.clone(), &[1, 4, 6])
                - e(fh, &[2, 3, 6]),
            e(f2 * kh, &[1, 3, 6]) - e(hk, &[2, 4, 6]) + e(fk.clone(), &[1, 4, 5]) + e(fk, &[2, 3, 5]),
        ],
    }
}

/// `φ = F∧dt + Ψ₊` and `∗φ = Ψ₋∧dt + ½F²` on the 7-dimensional product.
pub fn g2_forms<C: Coeff>(half_flat: &[Form<Jet2<C>>; 3]) -> (Form<Jet2<C>>, Form<Jet2<C>>) {
    let [f, pp, pm] = half_flat.clone().map(|x| x.with_dim(7));
    let dt: Form<Jet2<C>> = Form::basis(7, &[7]);
    let phi = f.wedge(&dt) + pp;
    let star = pm.wedge(&dt) + f.wedge(&f).scale_rat(&rat(1, 2));
    (phi, star)
}

/// Named residual maxima; a check passes when every entry is below `tol`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Residuals(pub Vec<(String, f64)>);

impl Residuals {
    fn push<C: Coeff>(&mut self, name: &str, form: &Form<C>) {
        let m = form.max_abs();
        match self.0.iter_mut().find(|(n, _)| n == name) {
            Some((_, v)) => *v = v.max(m),
            None => self.0.push((name.to_string(), m)),
        }
    }

    fn merge(&mut self, other: &Residuals) {
        for (name, v) in &other.0 {
            match self.0.iter_mut().find(|(n, _)| n == name) {
                Some((_, w)) => *w = w.max(*v),
                None => self.0.push((name.clone(), *v)),
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().map(|(_, v)| *v).fold(0.0, f64::max)
    }

    pub fn all_below(&self, tol: f64) -> bool {
        self.0.iter().all(|(_, v)| *v < tol)
    }
}

/// Residuals of the SU(3) product structure at one node.
fn su3_residuals<C: Coeff>(base: &LieAlgebra<C>, scalings: &[Jet2<C>]) -> Residuals {
    let su2 = su2_at(scalings);
    let [eta, w1, w2, w3] = &su2;
    let mut r = Residuals::default();
    let dh = |f: &Form<Jet2<C>>| d_hat(base, f);
    r.push("dt_omega3 + dhat_eta", &value(&(d_t(w3) + dh(eta))));
    r.push("dt(omega2^eta) - dhat_omega1", &value(&(d_t(&w2.wedge(eta)) - dh(w1))));
    r.push("dt(omega1^eta) + dhat_omega2", &value(&(d_t(&w1.wedge(eta)) + dh(w2))));
    r.push("dhat_omega3", &value(&dh(w3)));
    r.push("dhat(omega1^eta)", &value(&dh(&w1.wedge(eta))));
    r.push("dhat(omega2^eta)", &value(&dh(&w2.wedge(eta))));
    let [f, pp, pm] = su3_product_forms(&su2);
    r.push("dF", &total_d(base, &f));
    r.push("dpsi_plus", &total_d(base, &pp));
    r.push("dpsi_minus", &total_d(base, &pm));
    r
}

fn g2_residuals<C: Coeff>(kind: HitchinKind, base: &LieAlgebra<C>, node: &Node<C>) -> Residuals {
    let hf = g2_half_flat_forms(kind, &node.jet(0), &node.jet(1), &node.jet(2));
    let [f, pp, pm] = &hf;
    let dh = |x: &Form<Jet2<C>>| d_hat(base, x);
    let mut r = Residuals::default();
    r.push("dt_psi_plus - dhat_F", &value(&(d_t(pp) - dh(f))));
    r.push("F^dt_F + dhat_psi_minus", &value(&(f.wedge(&d_t(f)) + dh(pm))));
    r.push("dhat(F^F)", &value(&dh(&f.wedge(f))));
    r.push("dhat_psi_plus", &value(&dh(pp)));
    let (phi, star) = g2_forms(&hf);
    r.push("dphi", &total_d(base, &phi));
    r.push("dstarphi", &total_d(base, &star));
    r
}

/// Outcome of an SU(3) or G₂ certification.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub solution: String,
    /// `"SU(3)"` or `"G2"`.
    pub group: String,
    /// Dimension of the holonomy algebra that certifies `group`.
    pub target_rank: usize,
    pub sample_times: Vec<f64>,
    /// Sample times that could not be reached (the solution became singular).
    pub unreachable: Vec<f64>,
    pub residuals: Residuals,
    /// Exact residuals at `t = 0`, when the initial data are rational.
    pub exact_initial: Option<Residuals>,
    pub rank: RankReport,
    /// Exact rank at `t = 0`, when available.
    pub exact_rank_t0: Option<usize>,
    pub tol: f64,
    pub pass: bool,
    pub verdict: String,
}

fn frame_for<C: RankCoeff>(sol: &Solution, base: &LieAlgebra<C>, node: &Node<C>) -> Result<CohomFrame<C>, FrameError> {
    let s = sol.pattern.scalings(node, base.dim()).ok_or(FrameError::Domain(node.t))?;
    CohomFrame::new(base.clone(), s, node.t)
}

/// Curvature rank over the given sample times, computed in floating point.
pub fn holonomy_rank(sol: &Solution, sample_times: &[f64]) -> Result<RankReport, FrameError> {
    let curv: Vec<Matrix<Form<f64>>> = sample_times
        .par_iter()
        .map(|&t| {
            let node = sol.node(t)?;
            Ok(frame_for(sol, &sol.base, &node)?.curvature_forms().curvature)
        })
        .collect::<Result<_, FrameError>>()?;
    Ok(curvature_rank(&curv, DEFAULT_PIVOT_THRESHOLD))
}

/// Exact curvature rank at `t = 0`.
pub fn holonomy_rank_exact_t0(sol: &Solution) -> Option<usize> {
    let base = sol.base_exact.as_ref()?;
    let node = sol.exact_initial_node()?;
    let frame = frame_for(sol, base, &node).ok()?;
    Some(frame.curvature_forms().rank)
}

fn certify(sol: &Solution, sample_times: &[f64], tol: f64) -> Certificate {
    let (group, target) = match sol.kind {
        SolutionKind::Hitchin(_) => ("G2", 14),
        _ => ("SU(3)", 8),
    };
    let residuals_at = |base: &LieAlgebra<f64>, node: &Node<f64>| -> Option<Residuals> {
        let s = sol.pattern.scalings(node, base.dim())?;
        Some(match sol.kind {
            SolutionKind::Hitchin(k) => g2_residuals(k, base, node),
            _ => su3_residuals(base, &s),
        })
    };
    let mut reached = Vec::new();
    let mut unreachable = Vec::new();
    let mut residuals = Residuals::default();
    for &t in sample_times {
        match sol.node(t).ok().and_then(|n| residuals_at(&sol.base, &n)) {
            Some(r) => {
                residuals.merge(&r);
                reached.push(t);
            }
            None => unreachable.push(t),
        }
    }
    let exact_initial = sol.base_exact.as_ref().zip(sol.exact_initial_node()).and_then(|(base, node)| {
        let s = sol.pattern.scalings(&node, base.dim())?;
        Some(match sol.kind {
            SolutionKind::Hitchin(k) => g2_residuals(k, base, &node),
            _ => su3_residuals(base, &s),
        })
    });
    // Initial hypo-contact condition dη = −2ω3 (the evolution starts from it).
    if !matches!(sol.kind, SolutionKind::Hitchin(_)) {
        if let Some(node) = sol.node(0.0).ok() {
            if let Some(s) = sol.pattern.scalings(&node, sol.base.dim()) {
                let [eta, _, _, w3] = su2_at(&s);
                let mut r = Residuals::default();
                r.push("initial dhat_eta + 2 omega3", &value(&(d_hat(&sol.base, &eta) + w3.scale_rat(&rat(2, 1)))));
                residuals.merge(&r);
            }
        }
    }
    let rank = holonomy_rank(sol, &reached).unwrap_or(RankReport { rank: 0, pivots: None, exact: false });
    let exact_rank_t0 = holonomy_rank_exact_t0(sol);
    let pass = unreachable.is_empty()
        && residuals.all_below(tol)
        && exact_initial.as_ref().map_or(true, |r| r.max() == 0.0)
        && rank.rank == target;
    let verdict = if pass {
        format!("holonomy = {group}")
    } else if !unreachable.is_empty() {
        format!("not certified: sample times {unreachable:?} unreachable")
    } else if !residuals.all_below(tol) {
        "not certified: defining forms not closed".to_string()
    } else {
        format!("not certified: curvature rank {} (need {target})", rank.rank)
    };
    Certificate {
        solution: sol.label.clone(),
        group: group.into(),
        target_rank: target,
        sample_times: sample_times.to_vec(),
        unreachable,
        residuals,
        exact_initial,
        rank,
        exact_rank_t0,
        tol,
        pass,
        verdict,
    }
}

/// Closedness of `F`, `Ψ±` on `N × I` along a hypo evolution and the
/// curvature rank over `sample_times`; SU(3) holonomy iff both hold with rank 8.
pub fn certify_su3(sol: &Solution, sample_times: &[f64], tol: f64) -> Certificate {
    certify(sol, sample_times, tol)
}

/// Hitchin equations and closedness of `φ`, `∗φ` along a Hitchin solution,
/// and the curvature rank on the 7-dimensional frame (14 certifies G₂).
pub fn certify_g2(sol: &Solution, sample_times: &[f64], tol: f64) -> Certificate {
    certify(sol, sample_times, tol)
}

/// Residuals of the Hitchin equations for the static lift of a hypo evolution:
/// `F = λω1 + μω2 + η∧e6`, `Ψ₊ = (−μω1 + λω2)∧η − ω3∧e6`,
/// `Ψ₋ = (−μω1 + λω2)∧e6 + ω3∧η` on `G × R` with `de6 = 0`.
pub fn verify_hitchin_lift(sol: &Solution, sample_times: &[f64], lambda: &Rational, mu: &Rational) -> Result<Residuals, FrameError> {
    let base = sol.base.with_closed_extra();
    let (l, m) = (Jet2::constant(crate::scalars::rational_to_f64(lambda)), Jet2::constant(crate::scalars::rational_to_f64(mu)));
    let mut out = Residuals::default();
    for &t in sample_times {
        let node = sol.node(t)?;
        let s = sol.pattern.scalings(&node, sol.base.dim()).ok_or(FrameError::Domain(t))?;
        let [eta, w1, w2, w3] = su2_at(&s).map(|f| f.with_dim(6));
        let e6: Form<Jet2<f64>> = Form::basis(6, &[6]);
        let mixed = w2.scale(&l) - w1.scale(&m);
        let f = w1.scale(&l) + w2.scale(&m) + eta.wedge(&e6);
        let pp = mixed.wedge(&eta) - w3.wedge(&e6);
        let pm = mixed.wedge(&e6) + w3.wedge(&eta);
        out.push("dt_psi_plus - dhat_F", &value(&(d_t(&pp) - d_hat(&base, &f))));
        out.push("F^dt_F + dhat_psi_minus", &value(&(f.wedge(&d_t(&f)) + d_hat(&base, &pm))));
        out.push("F^psi_plus", &value(&f.wedge(&pp)));
        out.push("F^psi_minus", &value(&f.wedge(&pm)));
    }
    Ok(out)
}
