//! Coefficientwise `ℓ^r` and sup metrics on knot tables and sequences.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::scalar::{default_precision, parse_rational, rat, rational_string, Rational, Scalar, MAX_PRECISION_BITS};
use crate::table::{CoefficientTable, PolynomialKnot, SequencePoint};

/// Exponent of an `ℓ^r` metric: a rational `r >= 1`, or `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MetricTag {
    Finite(Rational),
    Inf,
}

impl MetricTag {
    pub fn finite(r: Rational) -> Result<Self> {
        if r < Rational::one() {
            return Err(Error::InvalidExponent(format!("r = {} < 1", rational_string(&r))));
        }
        Ok(MetricTag::Finite(r))
    }

    pub fn int(r: i64) -> Self {
        MetricTag::finite(Rational::from_integer(r.into())).expect("r >= 1")
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        MetricTag::finite(rat(p, q)).expect("r >= 1")
    }

    /// `"inf"`, `"∞"`, or a decimal / `p/q` exponent.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity") || s == "∞" {
            return Ok(MetricTag::Inf);
        }
        let r = parse_rational(s).ok_or_else(|| Error::InvalidExponent(format!("cannot read exponent {s:?}")))?;
        MetricTag::finite(r)
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, MetricTag::Inf)
    }
}

impl PartialOrd for MetricTag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MetricTag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (MetricTag::Inf, MetricTag::Inf) => Ordering::Equal,
            (MetricTag::Inf, _) => Ordering::Greater,
            (_, MetricTag::Inf) => Ordering::Less,
            (MetricTag::Finite(a), MetricTag::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for MetricTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricTag::Inf => f.write_str("inf"),
            MetricTag::Finite(r) => f.write_str(&rational_string(r)),
        }
    }
}

/// `(Σ |v|^r)^{1/r}`, or `max |v|` for `∞`.
pub fn lr_norm(values: &[Scalar], m: &MetricTag, prec: u32) -> Scalar {
    let abs: Vec<Scalar> = values.iter().map(Scalar::abs).collect();
    match m {
        MetricTag::Inf => abs.iter().fold(Scalar::zero(), |acc, v| acc.max(v)),
        MetricTag::Finite(r) if r.is_one() => abs.iter().fold(Scalar::zero(), |acc, v| &acc + v),
        MetricTag::Finite(r) => {
            let sum = abs.iter().fold(Scalar::zero(), |acc, v| {
                &acc + &v.pow_ratio(r, prec + 8).expect("nonnegative base")
            });
            sum.pow_ratio(&r.recip(), prec).expect("nonnegative base")
        }
    }
}

fn table_diffs(a: &CoefficientTable, b: &CoefficientTable) -> Vec<Scalar> {
    let idx: BTreeSet<_> = a.indices().chain(b.indices()).copied().collect();
    idx.iter().map(|i| &a.get(i) - &b.get(i)).collect()
}

fn seq_diffs(x: &SequencePoint, y: &SequencePoint) -> Vec<Scalar> {
    let idx: BTreeSet<u32> = x.iter().chain(y.iter()).map(|(i, _)| *i).collect();
    idx.iter().map(|&i| &x.get(i) - &y.get(i)).collect()
}

/// `d_r(a, b)` at the default working precision.
pub fn distance(a: &CoefficientTable, b: &CoefficientTable, m: &MetricTag) -> Scalar {
    distance_at(a, b, m, default_precision())
}

pub fn distance_at(a: &CoefficientTable, b: &CoefficientTable, m: &MetricTag, prec: u32) -> Scalar {
    lr_norm(&table_diffs(a, b), m, prec)
}

/// `ρ_r(x, y)` at the default working precision.
pub fn seq_distance(x: &SequencePoint, y: &SequencePoint, m: &MetricTag) -> Scalar {
    seq_distance_at(x, y, m, default_precision())
}

pub fn seq_distance_at(x: &SequencePoint, y: &SequencePoint, m: &MetricTag, prec: u32) -> Scalar {
    lr_norm(&seq_diffs(x, y), m, prec)
}

pub const MONOTONICITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityCheck {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub holds: bool,
}

/// Compares `‖a‖_r` with `‖a‖_s` for `r >= s >= 1`.
pub fn norm_monotonicity_check(a: &[Scalar], r: &MetricTag, s: &MetricTag) -> Result<MonotonicityCheck> {
    if a.iter().any(|v| v.lo().is_negative()) {
        return Err(Error::NegativeInput);
    }
    if r < s {
        return Err(Error::BadExponents { r: r.to_string(), s: s.to_string() });
    }
    let prec = default_precision();
    let lhs = lr_norm(a, r, prec);
    let rhs = lr_norm(a, s, prec);
    let tol = Rational::from_float(MONOTONICITY_TOL).expect("finite");
    let holds = lhs.hi() <= rhs.lo() + tol;
    Ok(MonotonicityCheck { lhs, rhs, holds })
}

/// Ambient set a ball lives in: `𝓛`, `𝓛ⁿ`, `ℰ` or `ℰⁿ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Knots,
    KnotsDim(u32),
    Sequences,
    SequencesDim(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Knot(PolynomialKnot),
    Sequence(SequencePoint),
}

impl Space {
    pub fn admits(&self, p: &Point) -> bool {
        match (self, p) {
            (Space::Knots, Point::Knot(_)) | (Space::Sequences, Point::Sequence(_)) => true,
            (Space::KnotsDim(n), Point::Knot(k)) => k.table().max_component() <= *n,
            (Space::SequencesDim(n), Point::Sequence(x)) => x.max_index() <= *n,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallSpec {
    pub center: Point,
    pub radius: Scalar,
    pub metric: MetricTag,
    pub space: Space,
}

impl BallSpec {
    pub fn new(center: Point, radius: Scalar, metric: MetricTag, space: Space) -> Result<Self> {
        if radius.sign() != Some(Ordering::Greater) {
            return Err(Error::Domain("ball radius must be positive".into()));
        }
        if !space.admits(&center) {
            return Err(Error::SpaceMismatch);
        }
        Ok(BallSpec { center, radius, metric, space })
    }

    /// `B(φ, δ)` in `𝓛`.
    pub fn knot(center: &PolynomialKnot, radius: Scalar, metric: MetricTag) -> Result<Self> {
        BallSpec::new(Point::Knot(center.clone()), radius, metric, Space::Knots)
    }

    fn distance_to(&self, p: &Point, prec: u32) -> Result<Scalar> {
        match (&self.center, p) {
            (Point::Knot(c), Point::Knot(k)) => Ok(distance_at(c.table(), k.table(), &self.metric, prec)),
            (Point::Sequence(c), Point::Sequence(x)) => Ok(seq_distance_at(c, x, &self.metric, prec)),
            _ => Err(Error::SpaceMismatch),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    Undecidable,
}

impl Membership {
    pub fn is_in(self) -> bool {
        self == Membership::In
    }

    pub fn is_out(self) -> bool {
        self == Membership::Out
    }
}

/// Strict test `dist(center, p) < radius`, doubling the working precision
/// on ambiguous enclosures up to the cap.
pub fn ball_contains(ball: &BallSpec, p: &Point) -> Result<Membership> {
    if !ball.space.admits(p) {
        return Err(Error::SpaceMismatch);
    }
    ball.distance_to(p, default_precision())?;
    Ok(strictly_below(|prec| ball.distance_to(p, prec).expect("checked above"), &ball.radius))
}

/// Membership of a bare coefficient table in a knot ball.
pub fn table_in_ball(ball: &BallSpec, t: &CoefficientTable) -> Result<Membership> {
    let center = match (&ball.center, ball.space) {
        (Point::Knot(c), Space::Knots) => c,
        (Point::Knot(c), Space::KnotsDim(n)) if t.max_component() <= n => c,
        _ => return Err(Error::SpaceMismatch),
    };
    Ok(strictly_below(|prec| distance_at(center.table(), t, &ball.metric, prec), &ball.radius))
}

fn strictly_below<F: Fn(u32) -> Scalar>(dist: F, radius: &Scalar) -> Membership {
    let mut prec = default_precision();
    loop {
        let d = dist(prec);
        match d.cmp_certain(radius) {
            Some(Ordering::Less) => return Membership::In,
            Some(_) => return Membership::Out,
            None if prec >= MAX_PRECISION_BITS || (d.is_exact() && radius.is_exact()) => {
                return Membership::Undecidable
            }
            None => prec = (prec * 2).min(MAX_PRECISION_BITS),
        }
    }
}

/// Convenience wrapper for knot points.
pub fn knot_in_ball(ball: &BallSpec, k: &PolynomialKnot) -> Result<Membership> {
    ball_contains(ball, &Point::Knot(k.clone()))
}

impl Scalar {
    /// `self <= other + tol` on enclosures.
    pub fn le_within(&self, other: &Scalar, tol: &Rational) -> bool {
        self.hi() <= other.lo() + tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Interval};
    use crate::table::project_linear;

    fn knot(n: u32, terms: &[(u32, u32, i64)]) -> PolynomialKnot {
        PolynomialKnot::from_int_terms(n, terms).unwrap()
    }

    #[test]
    fn tag_parsing() {
        assert_eq!(MetricTag::parse("inf").unwrap(), MetricTag::Inf);
        assert_eq!(MetricTag::parse("2.5").unwrap(), MetricTag::ratio(5, 2));
        assert!(MetricTag::parse("0.5").is_err());
        assert!(MetricTag::parse("x").is_err());
        assert!(MetricTag::int(2) < MetricTag::Inf);
    }

    #[test]
    fn sup_distance_of_line_and_cubic() {
        let phi = knot(2, &[(1, 1, 1)]);
        let psi = knot(2, &[(1, 3, 1), (1, 1, 1)]);
        assert_eq!(distance(phi.table(), psi.table(), &MetricTag::Inf), Scalar::one());
        assert_eq!(distance(phi.table(), phi.table(), &MetricTag::int(3)), Scalar::zero());
    }

    #[test]
    fn sqrt_five_enclosure() {
        let a = knot(2, &[(1, 1, 1), (1, 0, 1), (2, 3, 1), (2, 0, 2)]);
        let b = knot(2, &[(1, 1, 1), (2, 3, 1)]);
        let d = distance(a.table(), b.table(), &MetricTag::int(2));
        let iv = d.to_interval();
        assert!(!d.is_exact());
        assert!(iv.lo() * iv.lo() <= int(5) && iv.hi() * iv.hi() >= int(5));
        assert!(iv.width() < crate::scalar::rat(1, 1 << 60));
        assert_eq!(distance(a.table(), b.table(), &MetricTag::int(1)), Scalar::from_int(3));
    }

    #[test]
    fn exact_when_perfect_power() {
        let a = SequencePoint::from_ints(&[3, 4]).unwrap();
        let b = SequencePoint::from_ints(&[0, 0, 1]).unwrap();
        // (3, 4, −1): 9 + 16 + 1 = 26, not a square
        assert!(!seq_distance(&a, &b, &MetricTag::int(2)).is_exact());
        let z = SequencePoint::from_ints(&[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]).unwrap();
        let d = seq_distance(&a, &z, &MetricTag::int(2));
        assert!(!d.is_exact());
        let c = SequencePoint::from_ints(&[2, 0]).unwrap();
        let e = SequencePoint::from_ints(&[5, 4]).unwrap();
        assert_eq!(seq_distance(&c, &e, &MetricTag::int(2)), Scalar::from_int(5));
    }

    #[test]
    fn sequence_examples() {
        let e1 = SequencePoint::from_ints(&[1]).unwrap();
        let e2 = SequencePoint::from_ints(&[0, 1]).unwrap();
        assert_eq!(seq_distance(&e1, &e2, &MetricTag::Inf), Scalar::one());
        let a = SequencePoint::from_ints(&[2, 4]).unwrap();
        let b = SequencePoint::from_ints(&[2]).unwrap();
        assert_eq!(seq_distance(&a, &b, &MetricTag::int(1)), Scalar::from_int(4));
    }

    #[test]
    fn monotonicity_examples() {
        let a = [Scalar::from_int(3), Scalar::from_int(4)];
        let c = norm_monotonicity_check(&a, &MetricTag::int(2), &MetricTag::int(1)).unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds), (Scalar::from_int(5), Scalar::from_int(7), true));
        let single = [Scalar::ratio(7, 3)];
        let c = norm_monotonicity_check(&single, &MetricTag::ratio(5, 2), &MetricTag::ratio(3, 2)).unwrap();
        assert!(c.holds);
        assert!(c.lhs.to_interval().contains(&rat(7, 3)) && c.rhs.to_interval().contains(&rat(7, 3)));
        let ones = vec![Scalar::one(); 7];
        let c = norm_monotonicity_check(&ones, &MetricTag::int(2), &MetricTag::int(1)).unwrap();
        assert!(c.holds);
        assert_eq!(c.rhs, Scalar::from_int(7));
        let iv = c.lhs.to_interval();
        assert!(iv.lo() * iv.lo() <= int(7) && iv.hi() * iv.hi() >= int(7));
        assert_eq!(
            norm_monotonicity_check(&[Scalar::from_int(-1)], &MetricTag::int(2), &MetricTag::int(1)).unwrap_err(),
            Error::NegativeInput
        );
        assert!(matches!(
            norm_monotonicity_check(&ones, &MetricTag::int(1), &MetricTag::int(2)),
            Err(Error::BadExponents { .. })
        ));
    }

    #[test]
    fn balls() {
        let phi = knot(3, &[(1, 1, 1)]);
        let psi = knot(3, &[(1, 3, 1), (1, 1, 1)]);
        let b = BallSpec::knot(&phi, Scalar::ratio(1, 2), MetricTag::Inf).unwrap();
        assert_eq!(knot_in_ball(&b, &psi).unwrap(), Membership::Out);
        assert_eq!(knot_in_ball(&b, &phi).unwrap(), Membership::In);
        let tiny = BallSpec::knot(&phi, Scalar::ratio(1, 1_000_000), MetricTag::ratio(7, 3)).unwrap();
        assert_eq!(knot_in_ball(&tiny, &phi).unwrap(), Membership::In);
        // boundary is excluded
        let unit = BallSpec::knot(&phi, Scalar::one(), MetricTag::Inf).unwrap();
        assert_eq!(knot_in_ball(&unit, &psi).unwrap(), Membership::Out);
        assert!(BallSpec::knot(&phi, Scalar::zero(), MetricTag::Inf).is_err());
        let seq = Point::Sequence(SequencePoint::from_ints(&[1]).unwrap());
        assert_eq!(ball_contains(&b, &seq).unwrap_err(), Error::SpaceMismatch);
        let small = BallSpec::new(Point::Knot(phi.clone()), Scalar::one(), MetricTag::Inf, Space::KnotsDim(1)).unwrap();
        let wide = knot(3, &[(1, 1, 1), (3, 2, 1)]);
        assert_eq!(ball_contains(&small, &Point::Knot(wide)).unwrap_err(), Error::SpaceMismatch);
    }

    #[test]
    fn irrational_radius_compared_by_escalation() {
        // distance √2 against radius enclosing √2 tightly from above
        let a = SequencePoint::from_ints(&[1, 1]).unwrap();
        let b = SequencePoint::from_ints(&[2]).unwrap();
        let d = seq_distance(&a, &b, &MetricTag::int(2));
        assert!(!d.is_exact());
        let above = Scalar::Exact(rat(14142135623730951, 10000000000000000));
        let ball = BallSpec::new(Point::Sequence(b.clone()), above, MetricTag::int(2), Space::Sequences).unwrap();
        assert_eq!(ball_contains(&ball, &Point::Sequence(a.clone())).unwrap(), Membership::In);
        let below = Scalar::Exact(rat(1414213562373095, 1000000000000000));
        let ball = BallSpec::new(Point::Sequence(b.clone()), below, MetricTag::int(2), Space::Sequences).unwrap();
        assert_eq!(ball_contains(&ball, &Point::Sequence(a.clone())).unwrap(), Membership::Out);
        let fuzzy = Scalar::Approx(Interval::new(rat(1, 1), rat(2, 1)));
        let ball = BallSpec::new(Point::Sequence(b), fuzzy, MetricTag::int(2), Space::Sequences).unwrap();
        assert_eq!(ball_contains(&ball, &Point::Sequence(a)).unwrap(), Membership::Undecidable);
    }

    #[test]
    fn linear_rows_match_sequence_distance() {
        let phi = knot(3, &[(1, 1, 2), (3, 1, -1)]).with_verdict(crate::table::Verdict::Certified);
        let psi = knot(3, &[(2, 1, 5)]).with_verdict(crate::table::Verdict::Certified);
        let x = project_linear(&phi).unwrap();
        let y = project_linear(&psi).unwrap();
        for m in [MetricTag::Inf, MetricTag::int(1), MetricTag::int(2), MetricTag::ratio(3, 2)] {
            assert_eq!(distance(phi.table(), psi.table(), &m), seq_distance(&x, &y, &m));
        }
    }
}
