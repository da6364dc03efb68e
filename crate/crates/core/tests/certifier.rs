mod common;

use common::*;
use polyknot_core::certify::{difference_quotients, verify_witness};
use polyknot_core::oracle::default_grid;
use polyknot_core::{certify_embedding, sampling_oracle, Scalar, Verdict};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quotient_diagonal_is_derivative(k in exact_knot(6)) {
        for q in difference_quotients(&k).unwrap() {
            let p = k.table().exact_component(q.component).unwrap();
            prop_assert_eq!(q.diagonal(), p.derivative());
        }
    }

    #[test]
    fn quotients_are_symmetric_difference_ratios(k in exact_knot(6), s in rational(), t in rational()) {
        prop_assume!(s != t);
        for q in difference_quotients(&k).unwrap() {
            let p = k.table().exact_component(q.component).unwrap();
            prop_assert_eq!(q.eval_st(&s, &t), q.eval_st(&t, &s));
            prop_assert_eq!(q.eval_st(&s, &t), (p.eval(&s) - p.eval(&t)) / (&s - &t));
        }
    }

    #[test]
    fn refutations_verify(k in exact_knot(5)) {
        if let Verdict::Refuted { s, t } = certify_embedding(&k).verdict {
            prop_assert!(verify_witness(&k, &s, &t));
        }
    }

    #[test]
    fn certified_knots_survive_the_oracle(k in exact_knot(5)) {
        if certify_embedding(&k).verdict.is_certified() {
            let outcome = sampling_oracle(&k, &default_grid(&k, 61)).unwrap();
            prop_assert!(!outcome.is_refuted(), "{:?}", outcome);
        }
    }

    #[test]
    fn zero_components_do_not_matter(k in exact_knot(5), extra in 1u32..3) {
        let wider = k.with_dimension(k.dimension() + extra).unwrap();
        prop_assert_eq!(
            certify_embedding(&k).verdict.tag(),
            certify_embedding(&wider).verdict.tag()
        );
    }

    #[test]
    fn scaling_does_not_matter(k in exact_knot(5), c in nonzero_rational()) {
        let c = Scalar::Exact(c);
        let scaled = polyknot_core::PolynomialKnot::from_table(k.dimension(), k.table().map(|_, v| &c * v)).unwrap();
        prop_assert_eq!(
            certify_embedding(&k).verdict.tag(),
            certify_embedding(&scaled).verdict.tag()
        );
    }
}

#[test]
fn refuted_witnesses_are_distinct_or_critical() {
    let k = polyknot_core::PolynomialKnot::from_int_terms(2, &[(1, 2, 1), (2, 3, 1), (2, 1, -1)]).unwrap();
    match certify_embedding(&k).verdict {
        Verdict::Refuted { s, t } => {
            assert!(verify_witness(&k, &s, &t));
        }
        v => panic!("{v:?}"),
    }
}
