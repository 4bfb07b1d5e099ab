use crate::exterior::{Form, Vector};
use crate::liealg::LieAlgebra;
use crate::linalg::{rank_exact, rank_float, FloatRank};
use crate::scalars::{rat, Coeff, Jet2, Rational};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("t0 = {t0} is outside the solution interval [{lo}, {hi}]")]
    OutOfRange { t0: f64, lo: f64, hi: f64 },
    #[error("frame scalings are undefined at t0 = {0}")]
    Domain(f64),
    #[error("scaling {index} is not positive at t0 = {t0}")]
    NotPositive { index: usize, t0: f64 },
    #[error("expected {expected} scalings for a {expected}-dimensional base, got {got}")]
    Dim { expected: usize, got: usize },
    #[error("integration to t0 = {0} did not complete")]
    Unreachable(f64),
}

/// Values and first three `t`-derivatives of the unknowns at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct Node<C> {
    pub t: f64,
    pub v: Vec<C>,
    pub d1: Vec<C>,
    pub d2: Vec<C>,
    pub d3: Vec<C>,
}

impl<C: Coeff> Node<C> {
    pub fn to_f64(&self) -> Node<f64> {
        let f = |v: &Vec<C>| v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
        Node { t: self.t, v: f(&self.v), d1: f(&self.d1), d2: f(&self.d2), d3: f(&self.d3) }
    }

    /// 2-jet of unknown `i`.
    pub fn jet(&self, i: usize) -> Jet2<C> {
        Jet2::new(self.v[i].clone(), self.d1[i].clone(), self.d2[i].clone())
    }

    /// 2-jet of the derivative of unknown `i`.
    pub fn jet_prime(&self, i: usize) -> Jet2<C> {
        Jet2::new(self.d1[i].clone(), self.d2[i].clone(), self.d3[i].clone())
    }
}

/// How the orthonormal coframe is scaled from the static coframe `e^a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FramePattern {
    /// `(f^(3/2) f'/2, √f, √f, 2/(f'√f), f'/2)`
    F1,
    /// `(√f, √f, √f, √f, f'/2)`
    F2,
    /// `(f√(f'/2), f√(f'/2), √(2/f'), √(2/f'), f'/2)`
    F4,
    /// `(f√(f'/2), √(2/f'), f√(f'/2), √(2/f'), f'/2)`
    F5,
    /// `(f√k, f√k, 1/√k, 1/√k, k, h)`
    G2K,
    /// `(f√k, 1/√k, f√k, 1/√k, k, h)`
    G2KTilde,
    /// All scalings identically one.
    Static,
}

impl FramePattern {
    /// Scalings as 2-jets. Patterns involving `f'` read the third derivative
    /// from the node.
    pub fn scalings<C: Coeff>(&self, node: &Node<C>, n: usize) -> Option<Vec<Jet2<C>>> {
        let half = rat(1, 2);
        let pow = |j: &Jet2<C>, p: Rational| j.pow_rat(&p);
        Some(match self {
            FramePattern::Static => vec![Jet2::constant(C::one()); n],
            FramePattern::G2K | FramePattern::G2KTilde => {
                let (f, h, k) = (node.jet(0), node.jet(1), node.jet(2));
                let a = f * k.sqrt()?;
                let b = pow(&k, rat(-1, 2))?;
                if *self == FramePattern::G2K {
                    vec![a.clone(), a, b.clone(), b, k, h]
                } else {
                    vec![a.clone(), b.clone(), a, b, k, h]
                }
            }
            _ => {
                let f = node.jet(0);
                let fp = node.jet_prime(0);
                let fp2 = fp.scale(&half);
                match self {
                    FramePattern::F2 => {
                        let s = f.sqrt()?;
                        vec![s.clone(), s.clone(), s.clone(), s, fp2]
                    }
                    FramePattern::F1 => {
                        let s = f.sqrt()?;
                        let first = f.clone() * s.clone() * fp2.clone();
                        let fourth = (fp2.clone() * s.clone()).try_inv()?;
                        vec![first, s.clone(), s, fourth, fp2]
                    }
                    _ => {
                        let a = f * fp2.sqrt()?;
                        let b = pow(&fp2, rat(-1, 2))?;
                        if *self == FramePattern::F4 {
                            vec![a.clone(), a, b.clone(), b, fp2]
                        } else {
                            vec![a.clone(), b.clone(), a, b, fp2]
                        }
                    }
                }
            }
        })
    }
}

/// Orthonormal coframe `θ^a = s_a(t) e^a` on `G × I`, plus `θ^{n+1} = dt`.
#[derive(Clone, Debug)]
pub struct CohomFrame<C: Coeff> {
    pub base: LieAlgebra<C>,
    pub scalings: Vec<Jet2<C>>,
    pub t0: f64,
}

pub type Matrix<T> = Vec<Vec<T>>;

/// Connection and curvature of a frame at its sample time.
#[derive(Clone, Debug)]
pub struct CurvatureReport<C: Coeff> {
    /// `ω^a_b` (0-based indices), coefficients with value and first derivative.
    pub connection: Matrix<Form<Jet2<C>>>,
    /// `Ω^a_b` at `t0`.
    pub curvature: Matrix<Form<C>>,
    /// Rank of the curvature span at this single time.
    pub rank: usize,
    /// Largest coefficient of each identity check (zero up to rounding).
    pub residuals: Vec<(String, f64)>,
}

impl<C: Coeff> CohomFrame<C> {
    pub fn new(base: LieAlgebra<C>, scalings: Vec<Jet2<C>>, t0: f64) -> Result<Self, FrameError> {
        if scalings.len() != base.dim() {
            return Err(FrameError::Dim { expected: base.dim(), got: scalings.len() });
        }
        for (index, s) in scalings.iter().enumerate() {
            match s.v.to_f64() {
                Some(x) if x > 0.0 => {}
                _ => return Err(FrameError::NotPositive { index: index + 1, t0 }),
            }
        }
        Ok(CohomFrame { base, scalings, t0 })
    }

    /// Dimension of `G × I`.
    pub fn dim(&self) -> usize {
        self.base.dim() + 1
    }

    fn scaling(&self, a: usize) -> Jet2<C> {
        self.scalings.get(a).cloned().unwrap_or_else(|| Jet2::constant(C::one()))
    }

    /// `K[a][j][k]` with `[E_j, E_k] = Σ_a K[a][j][k] E_a` for the dual frame
    /// (0-based; index `n` is `∂t`).
    pub fn frame_brackets(&self) -> Vec<Matrix<Jet2<C>>> {
        let n = self.base.dim();
        let big = n + 1;
        let inv: Vec<Jet2<C>> = (0..big).map(|a| self.scaling(a).try_inv().expect("positive scalings")).collect();
        let mut k = vec![vec![vec![Jet2::zero(); big]; big]; big];
        for a in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let c = self.base.structure_constant(a + 1, j + 1, l + 1);
                    if c.is_zero() {
                        continue;
                    }
                    k[a][j][l] = Jet2::constant(c) * self.scaling(a) * inv[j].clone() * inv[l].clone();
                }
            }
            // dθ^a ⊃ (s'/s) dt∧θ^a
            let log_d = self.scaling(a).derivative() * inv[a].clone();
            k[a][a][n] = log_d.clone();
            k[a][n][a] = -log_d;
        }
        k
    }

    /// `dθ^a` in the `θ` coframe.
    pub fn coframe_differentials(&self) -> Vec<Form<Jet2<C>>> {
        let big = self.dim();
        let k = self.frame_brackets();
        (0..big)
            .map(|a| {
                let mut f = Form::zero(big);
                for j in 0..big {
                    for l in (j + 1)..big {
                        if !k[a][j][l].is_zero() {
                            f = f - Form::term(big, k[a][j][l].clone(), &[j + 1, l + 1]);
                        }
                    }
                }
                f
            })
            .collect()
    }

    /// Levi-Civita connection forms `ω^a_b = Σ_c Γ^a_{cb} θ^c` with
    /// `Γ^a_{cb} = ½(K^a_{cb} − K^c_{ba} + K^b_{ac})`.
    pub fn connection_forms(&self) -> Matrix<Form<Jet2<C>>> {
        let big = self.dim();
        let k = self.frame_brackets();
        let half = rat(1, 2);
        let mut w = vec![vec![Form::zero(big); big]; big];
        for a in 0..big {
            for b in 0..big {
                let mut f = Form::zero(big);
                for c in 0..big {
                    let g = (k[a][c][b].clone() - k[c][b][a].clone() + k[b][a][c].clone()).scale(&half);
                    if !g.is_zero() {
                        f = f + Form::term(big, g, &[c + 1]);
                    }
                }
                w[a][b] = f;
            }
        }
        w
    }

    /// `d` of a 1-form with jet coefficients in the `θ` coframe: only the
    /// value slot of the result is meaningful.
    fn d_one_form(&self, form: &Form<Jet2<C>>, dtheta: &[Form<Jet2<C>>]) -> Form<C> {
        let big = self.dim();
        let mut out: Form<C> = Form::zero(big);
        for (mask, c) in form.terms() {
            let idx = mask.trailing_zeros() as usize;
            out = out + Form::term(big, c.d1.clone(), &[big, idx + 1]);
            out = out + dtheta[idx].map(|x| x.v.clone()).scale(&c.v);
        }
        out
    }

    /// Curvature `Ω^a_b = dω^a_b + ω^a_c∧ω^c_b` and the identity checks.
    pub fn curvature_forms(&self) -> CurvatureReport<C>
    where
        C: RankCoeff,
    {
        let big = self.dim();
        let dtheta = self.coframe_differentials();
        let conn = self.connection_forms();
        let vals: Matrix<Form<C>> = conn.iter().map(|row| row.iter().map(|f| f.map(|x| x.v.clone())).collect()).collect();
        let mut curv = vec![vec![Form::zero(big); big]; big];
        for a in 0..big {
            for b in 0..big {
                let mut f = self.d_one_form(&conn[a][b], &dtheta);
                for c in 0..big {
                    f = f + vals[a][c].wedge(&vals[c][b]);
                }
                curv[a][b] = f;
            }
        }
        let theta: Vec<Form<Jet2<C>>> = (0..big).map(|a| Form::basis(big, &[a + 1])).collect();
        let mut structure = 0.0f64;
        let mut antisym = 0.0f64;
        let mut bianchi = 0.0f64;
        for a in 0..big {
            let mut s = dtheta[a].clone();
            let mut bi: Form<C> = Form::zero(big);
            for b in 0..big {
                s = s + conn[a][b].wedge(&theta[b]);
                bi = bi + curv[a][b].wedge(&Form::basis(big, &[b + 1]));
                antisym = antisym.max((curv[a][b].clone() + curv[b][a].clone()).max_abs());
                antisym = antisym.max((vals[a][b].clone() + vals[b][a].clone()).max_abs());
            }
            // value and first derivative of the first structure equation
            structure = structure.max(s.map(|x| x.v.clone()).max_abs()).max(s.map(|x| x.d1.clone()).max_abs());
            bianchi = bianchi.max(bi.max_abs());
        }
        let rank = curvature_rank(&[curv.clone()], crate::exterior::DEFAULT_PIVOT_THRESHOLD).rank;
        CurvatureReport {
            connection: conn,
            curvature: curv,
            rank,
            residuals: vec![
                ("first_structure".into(), structure),
                ("antisymmetry".into(), antisym),
                ("bianchi".into(), bianchi),
            ],
        }
    }

    /// Frame structure constants with coefficients frozen at `t0`, as a Lie
    /// algebra on `G × I` (Jacobi may fail); used for cross-checks.
    pub fn frozen_algebra(&self) -> LieAlgebra<C> {
        let d = self.coframe_differentials().iter().map(|f| f.map(|x| x.v.clone())).collect();
        LieAlgebra::new(d).expect("differentials of the right degree")
    }

    /// `Ω^a_b(E_i, E_j)` for `i, j` on the group factor, from the frozen
    /// structure constants by the Koszul formula.
    pub fn frozen_curvature(&self, i: usize, j: usize, b: usize) -> Vector<C> {
        let g = self.frozen_algebra();
        let m = crate::curvature::Metric::identity(self.dim());
        let e = |k: usize| Vector::basis(self.dim(), k + 1);
        crate::curvature::riemann_oracle(&g, &m, &e(i), &e(j), &e(b))
    }
}

/// Rank data for a curvature span.
#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub rank: usize,
    /// Present when the rank was computed in floating point.
    pub pivots: Option<FloatRank>,
    pub exact: bool,
}

/// Rows `R(E_i, E_j)` for `i < j`, indexed by the slots `(a, b)`, `a < b`.
fn curvature_rows<C: Coeff>(curv: &Matrix<Form<C>>) -> Vec<Vec<C>> {
    let big = curv.len();
    let mut rows = Vec::new();
    for i in 0..big {
        for j in (i + 1)..big {
            let mut row = Vec::with_capacity(big * (big - 1) / 2);
            for a in 0..big {
                for b in (a + 1)..big {
                    row.push(curv[a][b].coeff(&[i + 1, j + 1]));
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// Coefficient rings the curvature rank can be computed in.
pub trait RankCoeff: Coeff {
    fn span_rank(rows: Vec<Vec<Self>>, threshold: f64) -> RankReport;
}

impl RankCoeff for Rational {
    fn span_rank(rows: Vec<Vec<Self>>, _threshold: f64) -> RankReport {
        RankReport { rank: rank_exact(rows), pivots: None, exact: true }
    }
}

impl RankCoeff for f64 {
    fn span_rank(rows: Vec<Vec<Self>>, threshold: f64) -> RankReport {
        let pivots = if rows.is_empty() { FloatRank::empty() } else { rank_float(rows, threshold) };
        RankReport { rank: pivots.rank, pivots: Some(pivots), exact: false }
    }
}

/// Dimension of the span of the curvature endomorphisms `R(E_i, E_j) ∈ so(N)`
/// over all given sample times. Exact over the rationals.
pub fn curvature_rank<C: RankCoeff>(samples: &[Matrix<Form<C>>], threshold: f64) -> RankReport {
    C::span_rank(samples.iter().flat_map(curvature_rows).collect(), threshold)
}
