#![allow(dead_code)]

use holonomy_core::catalog::{family, FamilyId, Params};
use holonomy_core::scalars::{rat, Poly, Rational};
use holonomy_core::{Form, LieAlgebra};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

pub const SEED: u64 = 0x5eed_2024;

pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..Config::default() }
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=6, 1i64..=4, any::<bool>()).prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d))
}

/// Laurent polynomials in `r` and `a` with up to four terms.
pub fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((nonzero_rational(), 0i32..3, -1i32..3), 0..4).prop_map(|terms| {
        terms.into_iter().fold(Poly::zero(), |acc, (c, e0, e1)| acc + Poly::monomial(c, &[("r", e0), ("a", e1)]))
    })
}

/// A catalog family at random nonzero rational parameters.
pub fn family_algebra() -> impl Strategy<Value = LieAlgebra<Rational>> {
    (0usize..6, nonzero_rational(), nonzero_rational()).prop_map(|(k, x, y)| {
        let id = FamilyId::ALL[k];
        let p: Params = id.params().iter().zip([x, y]).map(|(n, v)| (n.to_string(), v)).collect();
        family(id, &p).expect("valid parameters").rational_algebra().expect("all bound")
    })
}

pub fn form(dim: usize, degree: usize) -> impl Strategy<Value = Form<Rational>> {
    let indices: Vec<usize> = (1..=dim).collect();
    prop::collection::vec((rational(), prop::sample::subsequence(indices, degree)), 1..5)
        .prop_map(move |terms| terms.into_iter().fold(Form::zero(dim), |acc, (c, idx)| acc + Form::term(dim, c, &idx)))
}
