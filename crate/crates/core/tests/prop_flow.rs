mod common;

use common::*;
use holonomy_core::catalog::{params, FamilyId};
use holonomy_core::flow::{build_hypo_ode, first_integral_drift, integrate, IntegrateOptions};
use holonomy_core::scalars::{jet_pow, rat, rational_to_f64, Jet2, Rational};
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn jet_matches_finite_differences(u0 in 0.5f64..2.0, c in -1.0f64..1.0, p in exponent()) {
        let j = jet_pow(&Jet2::new(u0, c, 0.0), &p).unwrap();
        let pf = rational_to_f64(&p);
        let f = |t: f64| (u0 + c * t).powf(pf);
        let h = 1e-3;
        let d1 = (f(h) - f(-h)) / (2.0 * h);
        let d2 = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        let scale = 1.0 + j.v.abs() + j.d1.abs() + j.d2.abs();
        prop_assert!((j.v - f(0.0)).abs() < 1e-12 * scale);
        prop_assert!((d1 - j.d1).abs() < 1e-4 * scale, "d1 {} vs {}", d1, j.d1);
        prop_assert!((d2 - j.d2).abs() < 1e-3 * scale, "d2 {} vs {}", d2, j.d2);
    }

    #[test]
    fn jet_product_rule(u0 in 0.5f64..2.0, c in -1.0f64..1.0, k in -1.0f64..1.0, p in exponent(), q in exponent()) {
        let u = Jet2::new(u0, c, k);
        let a = jet_pow(&u, &p).unwrap();
        let b = jet_pow(&u, &q).unwrap();
        let prod = a * b;
        let direct = jet_pow(&u, &(p + q)).unwrap();
        let scale = 1.0 + direct.v.abs() + direct.d1.abs() + direct.d2.abs();
        prop_assert!((prod.v - direct.v).abs() < 1e-12 * scale);
        prop_assert!((prod.d1 - direct.d1).abs() < 1e-12 * scale);
        prop_assert!((prod.d2 - direct.d2).abs() < 1e-11 * scale);
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn first_integral_is_conserved(which in 0usize..4, k in 0i64..=4) {
        let id = [FamilyId::F1, FamilyId::F2, FamilyId::F4, FamilyId::F5][which];
        let value = rat(k, 2);
        let p = if id == FamilyId::F4 { params(&[("rho", value)]) } else { params(&[("r", value)]) };
        let ode = build_hypo_ode(id, &p).unwrap();
        let traj = integrate(&ode.second_order_system(), 0.05, &IntegrateOptions::new(1e-11)).unwrap();
        let drift = first_integral_drift(&ode, &traj);
        prop_assert!(drift < 1e-9, "{} {:?}: drift {:e}", id, p, drift);
    }
}
