//! Randomized properties across modules.

use std::collections::BTreeMap;

use proptest::prelude::*;
use quasilin::flow::{heisenberg_oracle, numeric_flow, qosc_closed_flow, series_flow, AdAction};
use quasilin::linalg::max_abs;
use quasilin::ncrewrite::{NcExpression, RewriteSystem, Strategy as Order};
use quasilin::poisson::{affine_transform, classify_canonical_30, satisfies_jacobi, CaseLabel, PoissonStructure};
use quasilin::poly::{parse_poly, PolyN, RationalComplex};
use quasilin::reps::rep_q_oscillator;

fn rational() -> impl Strategy<Value = RationalComplex> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| RationalComplex::from_ratio(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = RationalComplex> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn word() -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(vec!["X", "Y", "Z"]), 0..=5)
}

fn oscillator_word() -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(vec!["X", "Y"]), 0..=5)
}

fn expression() -> impl Strategy<Value = NcExpression> {
    prop::collection::vec((word(), rational()), 1..4).prop_map(|terms| {
        terms.into_iter().fold(NcExpression::zero(), |acc, (w, c)| acc.add(&NcExpression::word(&w, c)))
    })
}

fn polynomial() -> impl Strategy<Value = PolyN> {
    prop::collection::vec((prop::collection::vec(0u32..3, 3), rational()), 0..6)
        .prop_map(|terms| PolyN::from_terms(3, terms))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    #[test]
    fn normal_form_is_independent_of_reduction_order(
        q in nonzero_rational(), c1 in rational(), c2 in rational(), c3 in rational(),
        aw_words in prop::collection::vec((word(), rational()), 1..4),
        osc_words in prop::collection::vec((oscillator_word(), rational()), 1..4),
    ) {
        let build = |terms: &[(Vec<&str>, RationalComplex)]| {
            terms.iter().fold(NcExpression::zero(), |acc, (w, c)| acc.add(&NcExpression::word(w, c.clone())))
        };
        let systems = [
            (RewriteSystem::aw_z(q.clone(), c1, c2, c3).unwrap(), build(&aw_words)),
            (RewriteSystem::q_oscillator(q), build(&osc_words)),
        ];
        for (sys, e) in &systems {
            let left = sys.normal_form_with(e, Order::LeftmostInversion, 1_000_000).unwrap();
            let right = sys.normal_form_with(e, Order::RightmostInversion, 1_000_000).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn askey_wilson_normal_form_is_multiplicative(
        q in nonzero_rational(), c1 in rational(), c2 in rational(), c3 in rational(),
        a in expression(), b in expression(),
    ) {
        let sys = RewriteSystem::aw_z(q, c1, c2, c3).unwrap();
        let left = sys.normal_form(&a).unwrap();
        prop_assert!(sys.is_normal(&left).unwrap());
        let product = sys.normal_form(&a.mul(&b)).unwrap();
        let reduced = sys.normal_form(&left.mul(&sys.normal_form(&b).unwrap())).unwrap();
        prop_assert_eq!(product, reduced);
    }

    #[test]
    fn polynomial_display_parses_back(p in polynomial()) {
        let names = ["x", "y", "z"];
        let text = p.display_with(&names).to_string();
        prop_assert_eq!(parse_poly(&text, &names).unwrap(), p);
    }

    #[test]
    fn q_oscillator_flow_matches_oracle(num in -4i64..=4, t in -0.3f64..0.3) {
        let q = RationalComplex::from_ratio(num, 5);
        prop_assume!(!(RationalComplex::one() - &q).is_zero());
        let rep = rep_q_oscillator(24, &q).unwrap();
        let (y, x) = rep.pair().unwrap();
        let oracle = heisenberg_oracle(y, x, t).unwrap();
        let closed = qosc_closed_flow(y, x, &q, t).unwrap();
        prop_assert!(max_abs(&(&closed - &oracle).columns(0, 12).into_owned()) < 1e-10);
        let numeric = numeric_flow(&AdAction::q_oscillator(&q), y, rep.ops(), t).unwrap();
        prop_assert!(max_abs(&(&numeric["X"] - &oracle).columns(0, 12).into_owned()) < 1e-10);
    }

    #[test]
    fn truncated_series_converges_to_block_exponential(num in -4i64..=4, t in -0.2f64..0.2) {
        let q = RationalComplex::from_ratio(num, 3);
        let action = AdAction::weyl(&q);
        let rep = rep_q_oscillator(10, &RationalComplex::from_ratio(1, 2)).unwrap();
        let (y, _) = rep.pair().unwrap();
        let exact = numeric_flow(&action, y, rep.ops(), t).unwrap();
        let series = series_flow(&action, 25).evaluate(&action, y, rep.ops(), t).unwrap();
        prop_assert!(max_abs(&(&exact["X"] - &series["X"])) < 1e-10);
    }

    #[test]
    fn case_label_is_affine_invariant(
        xi in prop::collection::vec(nonzero_rational(), 3),
        eta in prop::collection::vec(rational(), 3),
    ) {
        let s = PoissonStructure::parse(
            &["x", "y", "z"],
            &[("y", "z", "2*y*z + x + 1"), ("z", "x", "2*x*z + y - 3"), ("x", "y", "2*x*y + z + 5")],
            &BTreeMap::new(),
        ).unwrap();
        let image = affine_transform(&s, &xi, &eta).unwrap();
        prop_assert!(satisfies_jacobi(&image));
        prop_assert_eq!(classify_canonical_30(&image).unwrap().case_label, CaseLabel::I);
    }
}
