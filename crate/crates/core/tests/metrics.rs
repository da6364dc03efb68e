mod common;

use common::*;
use polyknot_core::certify::certify_knot;
use polyknot_core::scalar::rat;
use polyknot_core::{
    distance, embed_linear, project_linear, seq_distance, CertifyOptions, MetricTag, Rational, Scalar,
};
use proptest::prelude::*;

fn tol() -> Rational {
    rat(1, 1_000_000_000_000)
}

fn metric() -> impl Strategy<Value = MetricTag> {
    prop_oneof![
        Just(MetricTag::Inf),
        Just(MetricTag::int(1)),
        Just(MetricTag::ratio(3, 2)),
        Just(MetricTag::int(2)),
        Just(MetricTag::ratio(7, 3)),
        Just(MetricTag::int(3)),
    ]
}

fn finite_pair() -> impl Strategy<Value = (Rational, Rational)> {
    ((1i64..=12, 1i64..=4), (1i64..=12, 1i64..=4)).prop_map(|((a, b), (c, d))| {
        let (x, y) = (rat(a, b).max(rat(1, 1)), rat(c, d).max(rat(1, 1)));
        if x >= y { (x, y) } else { (y, x) }
    })
}

fn certified(k: polyknot_core::PolynomialKnot) -> polyknot_core::PolynomialKnot {
    let (k, _) = certify_knot(k, &CertifyOptions::default());
    assert!(k.is_certified());
    k
}

proptest! {
    #[test]
    fn symmetric_and_separating(a in exact_knot(5), b in exact_knot(5), m in metric()) {
        let (ab, ba) = (distance(a.table(), b.table(), &m), distance(b.table(), a.table(), &m));
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(distance(a.table(), a.table(), &m), Scalar::zero());
        if a.table() != b.table() {
            prop_assert!(ab.lo() > rat(0, 1));
        }
    }

    #[test]
    fn triangle_inequality(a in exact_knot(6), b in exact_knot(6), c in exact_knot(6), m in metric()) {
        let ac = distance(a.table(), c.table(), &m);
        let via = &distance(a.table(), b.table(), &m) + &distance(b.table(), c.table(), &m);
        prop_assert!(ac.le_within(&via, &tol()), "{} > {}", ac, via);
    }

    #[test]
    fn triangle_enclosures_are_consistent(a in any_knot(), b in any_knot(), c in any_knot(), m in metric()) {
        let ac = distance(a.table(), c.table(), &m);
        let via = &distance(a.table(), b.table(), &m) + &distance(b.table(), c.table(), &m);
        prop_assert!(ac.lo() <= via.hi() + tol(), "{} > {}", ac, via);
    }

    #[test]
    fn metric_chain(a in exact_knot(6), b in exact_knot(6), (r, s) in finite_pair()) {
        let d = |m: MetricTag| distance(a.table(), b.table(), &m);
        let chain = [
            d(MetricTag::Inf),
            d(MetricTag::finite(r).unwrap()),
            d(MetricTag::finite(s).unwrap()),
            d(MetricTag::int(1)),
        ];
        for w in chain.windows(2) {
            prop_assert!(w[0].le_within(&w[1], &tol()), "{} > {}", w[0], w[1]);
        }
    }

    #[test]
    fn projection_and_embedding_are_lipschitz(
        a in linear_first_knot(),
        b in linear_first_knot(),
        x in sequence_point(),
        y in sequence_point(),
        m in metric(),
    ) {
        let (a, b) = (certified(a), certified(b));
        let (fa, fb) = (project_linear(&a).unwrap(), project_linear(&b).unwrap());
        let rho = seq_distance(&fa, &fb, &m);
        prop_assert!(rho.le_within(&distance(a.table(), b.table(), &m), &tol()));
        let d = distance(embed_linear(&x).table(), embed_linear(&y).table(), &m);
        prop_assert!(d.le_within(&seq_distance(&x, &y, &m), &tol()));
    }

    #[test]
    fn linear_knots_match_sequence_distance(x in sequence_point(), y in sequence_point(), m in metric()) {
        let d = distance(embed_linear(&x).table(), embed_linear(&y).table(), &m);
        let rho = seq_distance(&x, &y, &m);
        prop_assert!(d.le_within(&rho, &tol()) && rho.le_within(&d, &tol()));
    }
}
