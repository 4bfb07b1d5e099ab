mod common;

use common::*;
use holonomy_core::curvature::{levi_civita, ricci, riemann_tensor, Metric};
use holonomy_core::scalars::{rat, Rational};
use holonomy_core::{Coeff, Vector};
use proptest::prelude::*;

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=4, 1i64..=2).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn levi_civita_is_torsion_free_and_metric(g in family_algebra(), diag in prop::collection::vec(positive(), 5)) {
        let m = Metric::diagonal(diag).unwrap();
        let lc = levi_civita(&g, &m).unwrap();
        let e = |k: usize| Vector::<Rational>::basis(5, k);
        let minus = rat(-1, 1);
        for x in 1..=5 {
            for y in 1..=5 {
                let torsion = lc.nabla(&e(x), &e(y)).add(&lc.nabla(&e(y), &e(x)).scale(&minus)).add(&g.bracket(&e(x), &e(y)).scale(&minus));
                prop_assert!(torsion.is_zero(), "torsion at ({}, {})", x, y);
                for z in 1..=5 {
                    let s = m.inner(&lc.nabla(&e(x), &e(y)), &e(z)) + m.inner(&e(y), &lc.nabla(&e(x), &e(z)));
                    prop_assert!(s.is_zero(), "metric compatibility at ({}, {}, {})", x, y, z);
                }
            }
        }
    }

    #[test]
    fn first_bianchi_and_ricci_symmetry(g in family_algebra(), diag in prop::collection::vec(positive(), 5)) {
        let m = Metric::diagonal(diag).unwrap();
        let lc = levi_civita(&g, &m).unwrap();
        let r = riemann_tensor(&g, &lc);
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    for l in 0..5 {
                        let s = r[a][b][c][l].clone() + r[b][c][a][l].clone() + r[c][a][b][l].clone();
                        prop_assert!(s.is_zero());
                        prop_assert_eq!(r[a][b][c][l].clone(), -r[b][a][c][l].clone());
                    }
                }
            }
        }
        let rc = ricci(&g, &m).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                prop_assert_eq!(&rc.ricci[i][j], &rc.ricci[j][i]);
            }
        }
    }
}
