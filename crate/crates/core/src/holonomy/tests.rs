use super::*;
use crate::catalog::params;
use crate::exterior::{Form, Vector};
use crate::scalars::Jet2;

const SAMPLES: [f64; 3] = [0.0, 0.05, 0.1];

fn hypo(id: FamilyId, p: &[(&str, Rational)]) -> Solution {
    Solution::hypo(id, &params(p), 0.1, 1e-10, &SAMPLES).unwrap()
}

fn e6(idx: &[usize]) -> Form<Rational> {
    Form::basis(6, idx)
}

#[test]
fn scalings_at_zero() {
    let s = hypo(FamilyId::F2, &[("r", rat(1, 1))]);
    let f = frame_at_zero_exact(&s).unwrap();
    assert!(f.scalings.iter().all(|j| j.v == rat(1, 1)));
    assert_eq!(f.scalings[4].d1, rat(-5, 1));
    let g = frame_at(&Solution::explicit_g2(), 0.0).unwrap();
    assert!(g.scalings.iter().all(|j| (j.v - 1.0).abs() < 1e-15));
    assert!((g.scalings[4].d1 + 2.0).abs() < 1e-14);
    assert!(matches!(frame_at(&s, 0.5), Err(FrameError::OutOfRange { .. })));
}

#[test]
fn static_abelian_frame_is_flat() {
    let s = Solution::static_frame(LieAlgebra::abelian(5));
    let f = frame_at_zero_exact(&s).unwrap();
    assert!(f.connection_forms().iter().flatten().all(|w| w.is_zero()));
    assert_eq!(holonomy_rank(&s, &[0.0, 1.0]).unwrap().rank, 0);
    let cert = certify_su3(&s, &[0.0], 1e-10);
    assert!(!cert.pass);
    assert!(cert.residuals.get("initial dhat_eta + 2 omega3").unwrap() > 1.0);
}

#[test]
fn f2_curvature_at_zero() {
    for r in [rat(1, 1), rat(1, 2), rat(-3, 1)] {
        let s = hypo(FamilyId::F2, &[("r", r.clone())]);
        let rep = frame_at_zero_exact(&s).unwrap().curvature_forms();
        let one_r2 = rat(1, 1) + r.clone() * r.clone();
        assert_eq!(rep.curvature[0][1], (e6(&[1, 2]) - e6(&[3, 4])).scale(&-one_r2.clone()));
        // ((f')^2 - 2 f f'') / 4 with f'' = -2(3r^2 + 2)
        let c15 = (rat(4, 1) + rat(4, 1) * (rat(3, 1) * r.clone() * r.clone() + rat(2, 1))) / rat(4, 1);
        assert_eq!(rep.curvature[0][4], (e6(&[1, 5]) + e6(&[4, 6])).scale(&c15));
        assert!(rep.residuals.iter().all(|(_, v)| *v == 0.0));
        assert_eq!(rep.rank, 8);
    }
}

#[test]
fn f4_curvature_at_zero() {
    for (a, b) in [(0, 0), (1, 0), (1, 1), (2, 1)] {
        let s = hypo(FamilyId::F4, &[("a", rat(a, 1)), ("b", rat(b, 1))]);
        let rep = frame_at_zero_exact(&s).unwrap().curvature_forms();
        let rho = rat(a * a + b * b, 1);
        let c = (rho.clone() - rat(2, 1)) * (rho - rat(2, 1)) / rat(4, 1);
        assert_eq!(rep.curvature[0][1], (e6(&[1, 2]) - e6(&[3, 4])).scale(&-c));
    }
    let s = hypo(FamilyId::F4, &[("rho", rat(0, 1))]);
    let w = frame_at_zero_exact(&s).unwrap().connection_forms();
    assert_eq!(w[4][5].coeff(&[5]).v, rat(-2, 1));
}

#[test]
fn structure_equation_holds_on_float_frames() {
    for (id, p) in [
        (FamilyId::F1, vec![("r", rat(1, 1))]),
        (FamilyId::F5, vec![("r", rat(2, 1))]),
        (FamilyId::F4, vec![("a", rat(1, 2)), ("b", rat(1, 3))]),
    ] {
        let s = hypo(id, &p);
        for t in SAMPLES {
            let rep = frame_at(&s, t).unwrap().curvature_forms();
            for (name, v) in &rep.residuals {
                assert!(*v < 1e-12, "{id} {name} {v}");
            }
        }
    }
}

#[test]
fn degenerate_rho_needs_several_times() {
    let s = hypo(FamilyId::F4, &[("rho", rat(2, 1))]);
    assert!(holonomy_rank(&s, &[0.0]).unwrap().rank < 8);
    assert_eq!(holonomy_rank(&s, &SAMPLES).unwrap().rank, 8);
    assert_eq!(holonomy_rank_exact_t0(&hypo(FamilyId::F4, &[("a", rat(1, 1)), ("b", rat(1, 1))])), Some(5));
}

#[test]
fn rho_only_matters() {
    let a = hypo(FamilyId::F4, &[("rho", rat(2, 1))]);
    let b = hypo(FamilyId::F4, &[("a", rat(1, 1)), ("b", rat(1, 1))]);
    for t in SAMPLES {
        assert_eq!(holonomy_rank(&a, &[t]).unwrap().rank, holonomy_rank(&b, &[t]).unwrap().rank);
    }
}

#[test]
fn su3_certificates() {
    let cert = certify_su3(&Solution::explicit_su3(), &SAMPLES, 1e-10);
    assert!(cert.pass, "{}", cert.verdict);
    assert_eq!(cert.exact_rank_t0, Some(8));
    let f2 = certify_su3(&hypo(FamilyId::F2, &[("r", rat(1, 1))]), &SAMPLES, 1e-8);
    assert!(f2.pass);
    assert_eq!(f2.rank.rank, 8);
}

#[test]
fn g2_certificates() {
    let cert = certify_g2(&Solution::explicit_g2(), &SAMPLES, 1e-10);
    assert!(cert.pass, "{}", cert.verdict);
    assert_eq!(cert.rank.rank, 14);
    let p = params(&[("a", rat(0, 1)), ("b", rat(0, 1)), ("a1", rat(0, 1))]);
    let product = Solution::hitchin(HitchinKind::K, &p, 0.1, 1e-10, &SAMPLES).unwrap();
    let c = certify_g2(&product, &SAMPLES, 1e-8);
    assert!(c.residuals.all_below(1e-8));
    assert!(c.rank.rank <= 8);
    assert!(!c.pass);
    let p = params(&[("r", rat(1, 10)), ("a2", rat(-2, 1))]);
    let kt = Solution::hitchin(HitchinKind::KTilde, &p, 0.1, 1e-10, &SAMPLES).unwrap();
    assert!(certify_g2(&kt, &SAMPLES, 1e-8).pass);
}

#[test]
fn hitchin_lift_of_hypo_flows() {
    let third = [(rat(1, 1), rat(0, 1)), (rat(0, 1), rat(1, 1)), (rat(3, 5), rat(4, 5))];
    for sol in [Solution::explicit_su3(), hypo(FamilyId::F4, &[("rho", rat(0, 1))])] {
        for (l, m) in &third {
            let r = verify_hitchin_lift(&sol, &SAMPLES, l, m).unwrap();
            assert!(r.all_below(1e-10), "{} {r:?}", sol.label);
        }
    }
}

#[test]
fn frozen_coefficients_reproduce_spatial_curvature() {
    let s = hypo(FamilyId::F5, &[("r", rat(1, 1))]);
    let frame = frame_at(&s, 0.05).unwrap();
    let rep = frame.curvature_forms();
    let n = frame.dim();
    for i in 0..5 {
        for j in (i + 1)..5 {
            for b in 0..n {
                let v: Vector<f64> = frame.frozen_curvature(i, j, b);
                for a in 0..n {
                    let mine = rep.curvature[a][b].coeff(&[i + 1, j + 1]);
                    assert!((mine - v.components[a]).abs() < 1e-10, "{a}{b} on {i}{j}: {mine} vs {}", v.components[a]);
                }
            }
        }
    }
}

#[test]
fn product_forms_compatible_at_zero() {
    let ones = vec![Jet2::constant(rat(1, 1)); 5];
    let [f, p, m] = su3_product_forms(&su2_at(&ones));
    let val = |x: &Form<Jet2<Rational>>| x.map(|c| c.v.clone());
    assert!(val(&f).wedge(&val(&p)).is_zero());
    assert!(val(&f).wedge(&val(&m)).is_zero());
}
