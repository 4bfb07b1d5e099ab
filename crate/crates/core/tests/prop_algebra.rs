mod common;

use common::*;
use holonomy_core::scalars::rat;
use proptest::prelude::*;

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn poly_ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert!((a.clone() - a).is_zero());
    }

    #[test]
    fn d_squared_vanishes(g in family_algebra(), alpha in (1usize..=3).prop_flat_map(|p| form(5, p))) {
        prop_assert!(g.d_form(&g.d_form(&alpha)).is_zero());
    }

    #[test]
    fn d_is_an_antiderivation(g in family_algebra(), alpha in form(5, 1), beta in form(5, 2), gamma in form(5, 2)) {
        // degree 1 then degree 2 exercise both signs
        for (x, y, p) in [(&alpha, &beta, 1), (&beta, &gamma, 2)] {
            let sign = if p % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
            let lhs = g.d_form(&x.wedge(y));
            let rhs = g.d_form(x).wedge(y) + x.wedge(&g.d_form(y)).scale(&sign);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn wedge_is_graded_commutative(alpha in form(5, 1), beta in form(5, 2), gamma in form(5, 1)) {
        prop_assert_eq!(alpha.wedge(&beta), beta.wedge(&alpha));
        prop_assert_eq!(alpha.wedge(&gamma), gamma.wedge(&alpha).scale(&rat(-1, 1)));
        prop_assert!(alpha.wedge(&alpha).is_zero());
    }
}
