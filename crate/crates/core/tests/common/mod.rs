#![allow(dead_code)]

use std::collections::BTreeMap;

use polyknot_core::scalar::rat;
use polyknot_core::table::make_knot;
use polyknot_core::{Index, Interval, PolynomialKnot, Rational, Scalar, SequencePoint};
use proptest::prelude::*;

pub fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| *r != rat(0, 1))
}

pub fn interval_scalar() -> impl Strategy<Value = Scalar> {
    (rational(), 1i64..=64).prop_map(|(lo, w)| Scalar::from_interval(Interval::new(lo.clone(), lo + rat(1, w))))
}

pub fn scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![4 => rational().prop_map(Scalar::Exact), 1 => interval_scalar()]
}

fn knot_from(n: u32, entries: BTreeMap<(u32, u32), Scalar>) -> Option<PolynomialKnot> {
    let entries: Vec<_> = entries.into_iter().filter(|((i, _), _)| *i <= n).collect();
    make_knot(n, entries.into_iter().map(|((i, j), v)| (Index::new(i, j), v))).ok()
}

/// Exact knots in `ℝ¹..ℝ³` of degree at most `deg`.
pub fn exact_knot(deg: u32) -> impl Strategy<Value = PolynomialKnot> {
    (1u32..=3)
        .prop_flat_map(move |n| {
            (Just(n), prop::collection::btree_map((1..=n, 0..=deg), rational().prop_map(Scalar::Exact), 1..8))
        })
        .prop_filter_map("nonempty table", |(n, e)| knot_from(n, e))
}

/// Knots in `ℝ¹..ℝ⁴` that may carry interval coefficients.
pub fn any_knot() -> impl Strategy<Value = PolynomialKnot> {
    (1u32..=4)
        .prop_flat_map(|n| (Just(n), prop::collection::btree_map((1..=n, 0u32..=7), scalar(), 1..10)))
        .prop_filter_map("nonempty table", |(n, e)| knot_from(n, e))
}

/// Knots whose first component is `a t + c` with `a ≠ 0`, hence embeddings.
pub fn linear_first_knot() -> impl Strategy<Value = PolynomialKnot> {
    (2u32..=3, nonzero_rational(), rational())
        .prop_flat_map(|(n, a, c)| {
            (
                Just((n, a, c)),
                prop::collection::btree_map((2..=n, 0u32..=4), rational().prop_map(Scalar::Exact), 0..6),
            )
        })
        .prop_filter_map("nonempty table", |((n, a, c), mut e)| {
            e.insert((1, 1), Scalar::Exact(a));
            e.insert((1, 0), Scalar::Exact(c));
            knot_from(n, e)
        })
}

pub fn sequence_point() -> impl Strategy<Value = SequencePoint> {
    prop::collection::btree_map(1u32..=6, rational().prop_map(Scalar::Exact), 1..6)
        .prop_filter_map("nonzero", |e| SequencePoint::new(e).ok())
}

pub fn unit_parameter() -> impl Strategy<Value = Rational> {
    (0i64..=12).prop_map(|k| rat(k, 12))
}
