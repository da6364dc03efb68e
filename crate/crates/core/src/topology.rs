//! Finitely representable open sets of the box and product topologies,
//! inclusion witnesses between the metric and box/product topologies, and the
//! knot families showing each inclusion is strict.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::certify::certify_embedding;
use crate::error::{Error, Result};
use crate::metric::{distance_at, table_in_ball, BallSpec, MetricTag, Membership, Point, Space};
use crate::scalar::{default_precision, int, rat, rational_string, Rational, Scalar, MAX_PRECISION_BITS};
use crate::table::{CoefficientTable, Index, PolynomialKnot};

/// Open interval with rational endpoints; `None` is an infinite end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenInterval {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
}

impl OpenInterval {
    pub fn new(lo: Option<Rational>, hi: Option<Rational>) -> Result<Self> {
        if let (Some(a), Some(b)) = (&lo, &hi) {
            if a >= b {
                return Err(Error::Domain(format!(
                    "empty interval ({}, {})",
                    rational_string(a),
                    rational_string(b)
                )));
            }
        }
        Ok(OpenInterval { lo, hi })
    }

    pub fn bounded(lo: Rational, hi: Rational) -> Result<Self> {
        OpenInterval::new(Some(lo), Some(hi))
    }

    pub fn reals() -> Self {
        OpenInterval { lo: None, hi: None }
    }

    pub fn membership(&self, v: &Scalar) -> Membership {
        let above = match &self.lo {
            None => Some(true),
            Some(a) if &v.lo() > a => Some(true),
            Some(a) if &v.hi() <= a => Some(false),
            Some(_) => None,
        };
        let below = match &self.hi {
            None => Some(true),
            Some(b) if &v.hi() < b => Some(true),
            Some(b) if &v.lo() >= b => Some(false),
            Some(_) => None,
        };
        match (above, below) {
            (Some(false), _) | (_, Some(false)) => Membership::Out,
            (Some(true), Some(true)) => Membership::In,
            _ => Membership::Undecidable,
        }
    }

    /// Certain distance from `v` to the complement, if finite.
    fn margin(&self, v: &Scalar) -> Option<Rational> {
        let left = self.lo.as_ref().map(|a| v.lo() - a);
        let right = self.hi.as_ref().map(|b| b - v.hi());
        match (left, right) {
            (Some(l), Some(r)) => Some(l.min(r)),
            (Some(m), None) | (None, Some(m)) => Some(m),
            (None, None) => None,
        }
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lo.as_ref().map_or_else(|| "-inf".to_string(), rational_string);
        let hi = self.hi.as_ref().map_or_else(|| "inf".to_string(), rational_string);
        write!(f, "({lo}, {hi})")
    }
}

fn combine(ms: impl IntoIterator<Item = Membership>) -> Membership {
    let mut out = Membership::In;
    for m in ms {
        match m {
            Membership::Out => return Membership::Out,
            Membership::Undecidable => out = Membership::Undecidable,
            Membership::In => {}
        }
    }
    out
}

/// Basic open set of the product topology: finitely many constrained indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProductOpenSpec {
    pub explicit: BTreeMap<Index, OpenInterval>,
}

impl ProductOpenSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constrain(mut self, idx: Index, iv: OpenInterval) -> Self {
        self.explicit.insert(idx, iv);
        self
    }

    pub fn membership(&self, t: &CoefficientTable) -> Membership {
        combine(self.explicit.iter().map(|(idx, iv)| iv.membership(&t.get(idx))))
    }
}

/// How a box open set constrains indices without an explicit interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoxRule {
    AllReals,
    /// `(ψ_ij − δ^{4i(j+1)}, ψ_ij + δ^{4i(j+1)})` around `center = ψ`.
    SymmetricPower { delta: Rational, center: CoefficientTable },
    /// `(−1, 3/(i(j+1)))`.
    Harmonic,
}

/// Basic open set of the box topology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxOpenSpec {
    pub explicit: BTreeMap<Index, OpenInterval>,
    pub rule: BoxRule,
}

/// Window of admissible values at one index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Window {
    Interval(OpenInterval),
    /// `|v − center| < half_width`.
    Centered { center: Scalar, half_width: Rational },
}

impl Window {
    pub fn membership(&self, v: &Scalar) -> Membership {
        match self {
            Window::Interval(iv) => iv.membership(v),
            Window::Centered { center, half_width } => {
                match (v - center).abs().cmp_certain(&Scalar::Exact(half_width.clone())) {
                    Some(Ordering::Less) => Membership::In,
                    Some(_) => Membership::Out,
                    None => Membership::Undecidable,
                }
            }
        }
    }
}

/// `δ^{4i(j+1)}`.
pub fn power_rule_width(delta: &Rational, idx: &Index) -> Rational {
    let e = 4 * idx.component as usize * (idx.power as usize + 1);
    num_traits::pow(delta.clone(), e)
}

impl BoxOpenSpec {
    pub fn new(rule: BoxRule) -> Result<Self> {
        if let BoxRule::SymmetricPower { delta, .. } = &rule {
            if !delta.is_positive() || delta > &rat(1, 2) {
                return Err(Error::ParameterBoundViolated(format!(
                    "0 < δ <= 1/2 (got δ = {})",
                    rational_string(delta)
                )));
            }
        }
        Ok(BoxOpenSpec { explicit: BTreeMap::new(), rule })
    }

    pub fn harmonic() -> Self {
        BoxOpenSpec { explicit: BTreeMap::new(), rule: BoxRule::Harmonic }
    }

    pub fn constrain(mut self, idx: Index, iv: OpenInterval) -> Self {
        self.explicit.insert(idx, iv);
        self
    }

    pub fn window(&self, idx: &Index) -> Window {
        if let Some(iv) = self.explicit.get(idx) {
            return Window::Interval(iv.clone());
        }
        match &self.rule {
            BoxRule::AllReals => Window::Interval(OpenInterval::reals()),
            BoxRule::SymmetricPower { delta, center } => {
                Window::Centered { center: center.get(idx), half_width: power_rule_width(delta, idx) }
            }
            BoxRule::Harmonic => {
                let hi = rat(3, idx.component as i64 * (idx.power as i64 + 1));
                Window::Interval(OpenInterval { lo: Some(int(-1)), hi: Some(hi) })
            }
        }
    }

    /// Indices where a zero coefficient might fall outside its window.
    fn critical_indices(&self) -> BTreeSet<Index> {
        let mut out: BTreeSet<Index> = self.explicit.keys().copied().collect();
        if let BoxRule::SymmetricPower { center, .. } = &self.rule {
            out.extend(center.indices().copied());
        }
        out
    }

    pub fn membership(&self, t: &CoefficientTable) -> Membership {
        let mut idx = self.critical_indices();
        idx.extend(t.indices().copied());
        combine(idx.iter().map(|i| self.window(i).membership(&t.get(i))))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpenSpec {
    Product(ProductOpenSpec),
    Box(BoxOpenSpec),
}

impl OpenSpec {
    pub fn membership(&self, t: &CoefficientTable) -> Membership {
        match self {
            OpenSpec::Product(p) => p.membership(t),
            OpenSpec::Box(b) => b.membership(t),
        }
    }
}

/// Whether every coefficient of `knot` lies in its window.
pub fn open_contains(spec: &OpenSpec, knot: &PolynomialKnot) -> bool {
    spec.membership(knot.table()).is_in()
}

/// A region of coefficient space used on either side of an inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    Ball(BallSpec),
    Open(OpenSpec),
}

impl Region {
    pub fn membership(&self, t: &CoefficientTable) -> Membership {
        match self {
            Region::Ball(b) => table_in_ball(b, t).unwrap_or(Membership::Out),
            Region::Open(o) => o.membership(t),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Region::Ball(b) => {
                let center = match &b.center {
                    Point::Knot(k) => table_text(k.table()),
                    Point::Sequence(_) => "sequence".into(),
                };
                format!("B_{}({}, {})", b.metric, center, b.radius.to_exact_string())
            }
            Region::Open(OpenSpec::Product(p)) => {
                let parts: Vec<String> = p.explicit.iter().map(|(i, iv)| format!("U{i} = {iv}")).collect();
                format!("product open {{{}}}", parts.join("; "))
            }
            Region::Open(OpenSpec::Box(b)) => {
                let rule = match &b.rule {
                    BoxRule::AllReals => "R elsewhere".to_string(),
                    BoxRule::SymmetricPower { delta, center } => format!(
                        "(c_ij - d^(4i(j+1)), c_ij + d^(4i(j+1))) with d = {}, c = {}",
                        rational_string(delta),
                        table_text(center)
                    ),
                    BoxRule::Harmonic => "(-1, 3/(i(j+1)))".to_string(),
                };
                let parts: Vec<String> = b.explicit.iter().map(|(i, iv)| format!("U{i} = {iv}")).collect();
                if parts.is_empty() {
                    format!("box open {rule}")
                } else {
                    format!("box open {{{}}}, {rule}", parts.join("; "))
                }
            }
        }
    }
}

/// Compact `c*t^j` listing of a table, one component per bracket.
pub fn table_text(t: &CoefficientTable) -> String {
    if t.is_empty() {
        return "0".into();
    }
    let mut comps: BTreeMap<u32, Vec<String>> = BTreeMap::new();
    for (idx, v) in t.iter() {
        comps.entry(idx.component).or_default().push(format!("{}*t^{}", v, idx.power));
    }
    let parts: Vec<String> = comps.iter().map(|(i, terms)| format!("x{i}: {}", terms.join(" + "))).collect();
    parts.join("; ")
}

/// `gap / 2` as a certified rational lower bound, escalating precision.
fn half_gap<F: Fn(u32) -> Scalar>(radius: &Scalar, dist: F) -> Result<Rational> {
    let mut prec = default_precision();
    loop {
        let gap = &Scalar::Exact(radius.lo()) - &dist(prec);
        if gap.lo().is_positive() {
            return Ok(gap.lo() / int(2));
        }
        if !gap.hi().is_positive() || prec >= MAX_PRECISION_BITS {
            return Err(Error::NotMember);
        }
        prec = (prec * 2).min(MAX_PRECISION_BITS);
    }
}

fn ball_center(ball: &BallSpec) -> Result<&PolynomialKnot> {
    match &ball.center {
        Point::Knot(k) => Ok(k),
        Point::Sequence(_) => Err(Error::SpaceMismatch),
    }
}

/// `δ` with `B_∞(φ, δ) ⊆ U`: half the smallest margin, or 1 when `U` is unconstrained.
pub fn witness_product_in_inf(u: &ProductOpenSpec, phi: &PolynomialKnot) -> Result<Rational> {
    if !u.membership(phi.table()).is_in() {
        return Err(Error::NotMember);
    }
    let margin = u.explicit.iter().filter_map(|(idx, iv)| iv.margin(&phi.table().get(idx))).min();
    Ok(margin.map_or_else(Rational::one, |m| m / int(2)))
}

/// `δ = (ε − d_∞(φ, ψ))/2`, so that `B_r(ψ, δ) ⊆ B_∞(φ, ε)`.
pub fn witness_inf_in_r(ball: &BallSpec, psi: &PolynomialKnot, r: &MetricTag) -> Result<Rational> {
    if !ball.metric.is_inf() {
        return Err(Error::Domain(format!("expected a sup-metric ball, got metric {}", ball.metric)));
    }
    if r.is_inf() {
        return Err(Error::InvalidExponent("r must be finite".into()));
    }
    let phi = ball_center(ball)?;
    half_gap(&ball.radius, |p| distance_at(phi.table(), psi.table(), &MetricTag::Inf, p))
}

/// `δ = (ε − d_r(φ, ψ))/2`, so that `B_s(ψ, δ) ⊆ B_r(φ, ε)` for `s <= r`.
pub fn witness_r_in_s(ball: &BallSpec, psi: &PolynomialKnot, s: &MetricTag) -> Result<Rational> {
    if s > &ball.metric || s.is_inf() {
        return Err(Error::BadExponents { r: ball.metric.to_string(), s: s.to_string() });
    }
    let phi = ball_center(ball)?;
    half_gap(&ball.radius, |p| distance_at(phi.table(), psi.table(), &ball.metric, p))
}

/// Box open set `V ∋ ψ` with `V ⊆ B_s(φ, ε)`, built from
/// `δ = min(1/2, ε − d_s(φ, ψ))`.
pub fn witness_s_in_box(ball: &BallSpec, psi: &PolynomialKnot) -> Result<BoxOpenSpec> {
    let phi = ball_center(ball)?;
    if !psi.table().is_exact() {
        return Err(Error::Domain("box centre must have exact coefficients".into()));
    }
    let twice = half_gap(&ball.radius, |p| distance_at(phi.table(), psi.table(), &ball.metric, p))? * int(2);
    let delta = twice.min(rat(1, 2));
    BoxOpenSpec::new(BoxRule::SymmetricPower { delta, center: psi.table().clone() })
}

/// Which of the four comparisons `𝒯_p ⊆ 𝒯_∞ ⊆ 𝒯_r ⊆ 𝒯_s ⊆ 𝒯_b` is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Comparison {
    ProductInf,
    InfR,
    RS,
    SBox,
}

impl Comparison {
    pub const ALL: [Comparison; 4] = [Comparison::ProductInf, Comparison::InfR, Comparison::RS, Comparison::SBox];

    pub fn tag(self) -> &'static str {
        match self {
            Comparison::ProductInf => "p-inf",
            Comparison::InfR => "inf-r",
            Comparison::RS => "r-s",
            Comparison::SBox => "s-box",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Comparison::ALL.into_iter().find(|c| c.tag() == s)
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// An inner region shown to lie inside an outer one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionWitness {
    pub kind: Comparison,
    pub member: PolynomialKnot,
    pub delta: Rational,
    pub inner: Region,
    pub outer: Region,
}

fn ball(center: &PolynomialKnot, radius: Scalar, metric: MetricTag) -> Result<BallSpec> {
    BallSpec::new(Point::Knot(center.clone()), radius, metric, Space::Knots)
}

/// `B_∞(φ, δ) ⊆ U`.
pub fn inclusion_product_inf(u: &ProductOpenSpec, phi: &PolynomialKnot) -> Result<InclusionWitness> {
    let delta = witness_product_in_inf(u, phi)?;
    Ok(InclusionWitness {
        kind: Comparison::ProductInf,
        member: phi.clone(),
        inner: Region::Ball(ball(phi, Scalar::Exact(delta.clone()), MetricTag::Inf)?),
        outer: Region::Open(OpenSpec::Product(u.clone())),
        delta,
    })
}

/// `B_r(ψ, δ) ⊆ B_∞(φ, ε)`.
pub fn inclusion_inf_r(phi: &PolynomialKnot, eps: &Rational, psi: &PolynomialKnot, r: &MetricTag) -> Result<InclusionWitness> {
    let outer = ball(phi, Scalar::Exact(eps.clone()), MetricTag::Inf)?;
    let delta = witness_inf_in_r(&outer, psi, r)?;
    Ok(InclusionWitness {
        kind: Comparison::InfR,
        member: psi.clone(),
        inner: Region::Ball(ball(psi, Scalar::Exact(delta.clone()), r.clone())?),
        outer: Region::Ball(outer),
        delta,
    })
}

/// `B_s(ψ, δ) ⊆ B_r(φ, ε)`.
pub fn inclusion_r_s(
    phi: &PolynomialKnot,
    eps: &Rational,
    psi: &PolynomialKnot,
    r: &MetricTag,
    s: &MetricTag,
) -> Result<InclusionWitness> {
    if r.is_inf() {
        return Err(Error::InvalidExponent("r must be finite".into()));
    }
    let outer = ball(phi, Scalar::Exact(eps.clone()), r.clone())?;
    let delta = witness_r_in_s(&outer, psi, s)?;
    Ok(InclusionWitness {
        kind: Comparison::RS,
        member: psi.clone(),
        inner: Region::Ball(ball(psi, Scalar::Exact(delta.clone()), s.clone())?),
        outer: Region::Ball(outer),
        delta,
    })
}

/// `V ⊆ B_s(φ, ε)` for the power-rule box `V` around `ψ`.
pub fn inclusion_s_box(phi: &PolynomialKnot, eps: &Rational, psi: &PolynomialKnot, s: &MetricTag) -> Result<InclusionWitness> {
    let outer = ball(phi, Scalar::Exact(eps.clone()), s.clone())?;
    let v = witness_s_in_box(&outer, psi)?;
    let BoxRule::SymmetricPower { delta, .. } = &v.rule else { unreachable!() };
    Ok(InclusionWitness {
        kind: Comparison::SBox,
        member: psi.clone(),
        delta: delta.clone(),
        inner: Region::Open(OpenSpec::Box(v)),
        outer: Region::Ball(outer),
    })
}

const UNIT_BITS: u32 = 20;

/// Uniform dyadic in the open interval `(−1, 1)`.
fn unit_open<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let m = 1i64 << UNIT_BITS;
    rat(rng.random_range(1 - m..m), m)
}

/// Uniform dyadic in `(0, 1)`.
fn unit_positive<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let m = 1i64 << UNIT_BITS;
    rat(rng.random_range(1..m), m)
}

/// Where samples may place an extra coefficient beyond the centre's support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSpace {
    pub max_component: u32,
    pub max_power: u32,
    pub hints: Vec<Index>,
}

impl SampleSpace {
    pub fn around(center: &CoefficientTable, outer: &Region) -> Self {
        let mut hints: Vec<Index> = Vec::new();
        match outer {
            Region::Open(OpenSpec::Product(p)) => hints.extend(p.explicit.keys().copied()),
            Region::Open(OpenSpec::Box(b)) => hints.extend(b.critical_indices()),
            Region::Ball(b) => {
                if let Point::Knot(k) = &b.center {
                    hints.extend(k.table().indices().copied());
                }
            }
        }
        SampleSpace {
            max_component: center.max_component().max(1) + 1,
            max_power: center.max_power() + 2,
            hints,
        }
    }

    fn extra_index<R: Rng + ?Sized>(&self, taken: &BTreeSet<Index>, rng: &mut R) -> Option<Index> {
        let mut pool: Vec<Index> = self.hints.iter().filter(|i| !taken.contains(i)).copied().collect();
        if pool.is_empty() || rng.random_bool(0.5) {
            for _ in 0..8 {
                let idx = Index::new(rng.random_range(1..=self.max_component), rng.random_range(0..=self.max_power));
                if !taken.contains(&idx) {
                    pool = vec![idx];
                    break;
                }
            }
        }
        if pool.is_empty() {
            None
        } else {
            Some(pool[rng.random_range(0..pool.len())])
        }
    }
}

/// Probability of activating one index outside the centre's support.
pub const EXTRA_INDEX_PROBABILITY: f64 = 0.25;

fn sample_window<R: Rng + ?Sized>(w: &Window, rng: &mut R) -> Scalar {
    match w {
        Window::Centered { center, half_width } => center + &Scalar::Exact(unit_open(rng) * half_width),
        Window::Interval(iv) => Scalar::Exact(match (&iv.lo, &iv.hi) {
            (Some(a), Some(b)) => a + (b - a) * unit_positive(rng),
            (Some(a), None) => a + unit_positive(rng),
            (None, Some(b)) => b - unit_positive(rng),
            (None, None) => unit_open(rng),
        }),
    }
}

/// Random point of `region`, perturbing the support of `center` and, with
/// probability 1/4, one further index.
pub fn sample_region<R: Rng + ?Sized>(
    region: &Region,
    center: &CoefficientTable,
    space: &SampleSpace,
    rng: &mut R,
) -> Result<CoefficientTable> {
    let mut idx: BTreeSet<Index> = center.indices().copied().collect();
    if let Region::Open(spec) = region {
        match spec {
            OpenSpec::Product(p) => idx.extend(p.explicit.keys().copied()),
            OpenSpec::Box(b) => idx.extend(b.critical_indices()),
        }
    }
    if rng.random_bool(EXTRA_INDEX_PROBABILITY) {
        if let Some(extra) = space.extra_index(&idx, rng) {
            idx.insert(extra);
        }
    }
    let mut out = CoefficientTable::new();
    match region {
        Region::Ball(b) => {
            let c = ball_center(b)?.table();
            let rho = b.radius.lo();
            if !rho.is_positive() {
                return Err(Error::Domain("ball radius has no positive lower bound".into()));
            }
            if b.metric.is_inf() {
                for i in &idx {
                    out.set(*i, &c.get(i) + &Scalar::Exact(unit_open(rng) * &rho));
                }
            } else {
                // d_1 < ρ forces d_r < ρ for every r >= 1.
                let weights: Vec<Rational> = idx.iter().map(|_| unit_open(rng)).collect();
                let total: Rational = weights.iter().map(|w| w.abs()).sum();
                let scale = if total.is_zero() { Rational::zero() } else { &rho * unit_positive(rng) / total };
                for (i, w) in idx.iter().zip(&weights) {
                    out.set(*i, &c.get(i) + &Scalar::Exact(w * &scale));
                }
            }
        }
        Region::Open(OpenSpec::Product(p)) => {
            for i in &idx {
                let w = match p.explicit.get(i) {
                    Some(iv) => Window::Interval(iv.clone()),
                    None => Window::Centered { center: center.get(i), half_width: int(1) },
                };
                out.set(*i, sample_window(&w, rng));
            }
        }
        Region::Open(OpenSpec::Box(b)) => {
            for i in &idx {
                out.set(*i, sample_window(&b.window(i), rng));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SampleStats {
    pub drawn: usize,
    pub inner_ok: usize,
    pub outer_ok: usize,
    /// Samples meeting `d_1(ψ, ω) <= δ²`; only tracked for box witnesses.
    pub d1_bound_ok: Option<usize>,
}

impl SampleStats {
    pub fn all_pass(&self) -> bool {
        self.inner_ok == self.drawn && self.outer_ok == self.drawn && self.d1_bound_ok.is_none_or(|n| n == self.drawn)
    }
}

impl InclusionWitness {
    /// Whether the witnessed member lies in both regions.
    pub fn member_checks(&self) -> (Membership, Membership) {
        (self.inner.membership(self.member.table()), self.outer.membership(self.member.table()))
    }

    /// Draws `n` points of the inner region and checks each lies in the outer one.
    pub fn check_samples<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<SampleStats> {
        let space = SampleSpace::around(self.member.table(), &self.outer);
        let mut stats = SampleStats {
            d1_bound_ok: (self.kind == Comparison::SBox).then_some(0),
            ..SampleStats::default()
        };
        let d1_bound = Scalar::Exact(&self.delta * &self.delta);
        for _ in 0..n {
            let w = sample_region(&self.inner, self.member.table(), &space, rng)?;
            stats.drawn += 1;
            if self.inner.membership(&w).is_in() {
                stats.inner_ok += 1;
            }
            if self.outer.membership(&w).is_in() {
                stats.outer_ok += 1;
            }
            if let Some(ok) = stats.d1_bound_ok.as_mut() {
                let d1 = distance_at(self.member.table(), &w, &MetricTag::int(1), default_precision());
                if d1.cmp_certain(&d1_bound).is_some_and(|o| o != Ordering::Greater) {
                    *ok += 1;
                }
            }
        }
        Ok(stats)
    }
}

/// Parameters of a strictness family; unset fields take per-kind defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StrictnessParams {
    pub n: Option<u32>,
    pub r: Option<Rational>,
    pub s: Option<Rational>,
    pub delta: Option<Rational>,
    pub k: Option<u64>,
}

pub const DEFAULT_DIMENSION: u32 = 3;
pub const MAX_FAMILY_SIZE: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub label: String,
    pub metric: MetricTag,
    pub value: Scalar,
}

/// A knot in an inner region but not in an outer region that the weaker
/// topology would force to contain it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictnessInstance {
    pub kind: Comparison,
    pub n: u32,
    pub r: Option<Rational>,
    pub s: Option<Rational>,
    pub delta: Option<Rational>,
    pub k: u64,
    pub base: PolynomialKnot,
    pub member: PolynomialKnot,
    pub inner: Region,
    pub outer: Region,
    pub closed_forms: Vec<ClosedForm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormCheck {
    pub label: String,
    pub expected: Scalar,
    pub computed: Scalar,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictnessCheck {
    pub certified: bool,
    pub inner: Membership,
    pub outer: Membership,
    pub closed_forms: Vec<ClosedFormCheck>,
}

impl StrictnessCheck {
    pub fn pass(&self) -> bool {
        self.certified && self.inner.is_in() && self.outer.is_out() && self.closed_forms.iter().all(|c| c.pass)
    }
}

pub const CLOSED_FORM_TOL: f64 = 1e-12;

/// Smallest integer strictly above the value enclosed by `x(prec)`.
fn smallest_int_above<F: Fn(u32) -> Scalar>(x: F) -> u64 {
    let mut prec = default_precision();
    loop {
        let v = x(prec);
        let lo = v.lo().floor();
        if lo == v.hi().floor() && (v.is_exact() || !v.hi().is_integer()) {
            return (lo.to_integer() + BigInt::one()).to_u64().unwrap_or(u64::MAX);
        }
        assert!(prec < MAX_PRECISION_BITS * 4, "cannot separate value from an integer");
        prec *= 2;
    }
}

fn line_knot(n: u32) -> Result<PolynomialKnot> {
    PolynomialKnot::from_int_terms(n, &[(1, 1, 1)])
}

/// `t + c·(t³ + t⁵ + ⋯ + t^{2k+1})`.
fn odd_tail(n: u32, k: u64, c: &Scalar) -> Result<PolynomialKnot> {
    let mut t = CoefficientTable::new();
    t.set(Index::new(1, 1), Scalar::one());
    for m in 1..=k {
        t.set(Index::new(1, 2 * m as u32 + 1), c.clone());
    }
    PolynomialKnot::from_table(n, t)
}

fn require_delta(params: &StrictnessParams) -> Result<Rational> {
    let d = params.delta.clone().ok_or_else(|| Error::ParameterBoundViolated("δ is required".into()))?;
    if !d.is_positive() {
        return Err(Error::ParameterBoundViolated(format!("δ > 0 (got δ = {})", rational_string(&d))));
    }
    Ok(d)
}

fn check_size(k: u64) -> Result<u64> {
    if k > MAX_FAMILY_SIZE {
        return Err(Error::ParameterBoundViolated(format!("k = {k} exceeds the supported size {MAX_FAMILY_SIZE}")));
    }
    Ok(k)
}

/// Builds the strictness family member for `kind`.
pub fn strictness_instance(kind: Comparison, params: &StrictnessParams) -> Result<StrictnessInstance> {
    let n = params.n.unwrap_or(DEFAULT_DIMENSION);
    if n == 0 {
        return Err(Error::ParameterBoundViolated("n >= 1".into()));
    }
    let prec = default_precision();
    let phi = line_knot(n)?;
    let half = Scalar::ratio(1, 2);
    let mut inst = StrictnessInstance {
        kind,
        n,
        r: None,
        s: None,
        delta: None,
        k: 0,
        base: phi.clone(),
        member: phi.clone(),
        inner: Region::Ball(ball(&phi, half.clone(), MetricTag::Inf)?),
        outer: Region::Ball(ball(&phi, half.clone(), MetricTag::Inf)?),
        closed_forms: Vec::new(),
    };
    match kind {
        Comparison::ProductInf => {
            let k = params.k.unwrap_or(3);
            if k <= 1 || k.is_even() {
                return Err(Error::ParameterBoundViolated(format!("k odd and k > 1 (got k = {k})")));
            }
            let k = check_size(k)?;
            let member = PolynomialKnot::from_int_terms(n, &[(1, k as u32, 1), (1, 1, 1)])?;
            let mut u = ProductOpenSpec::new();
            for i in 1..=n {
                for j in 0..k as u32 {
                    let c = phi.table().get(&Index::new(i, j)).lo();
                    u = u.constrain(Index::new(i, j), OpenInterval::bounded(&c - rat(1, 4), &c + rat(1, 4))?);
                }
            }
            inst.k = k;
            inst.member = member;
            inst.inner = Region::Open(OpenSpec::Product(u));
            inst.closed_forms.push(ClosedForm { label: "d_inf".into(), metric: MetricTag::Inf, value: Scalar::one() });
        }
        Comparison::InfR => {
            let r = params.r.clone().unwrap_or_else(|| int(2));
            let rt = MetricTag::finite(r.clone()).map_err(|_| Error::ParameterBoundViolated("r >= 1".into()))?;
            let delta = require_delta(params)?;
            let bound = |p: u32| Scalar::Exact(delta.recip()).pow_ratio(&r, p).expect("positive base");
            let k_min = smallest_int_above(bound);
            let k = check_size(params.k.unwrap_or(k_min))?;
            if k < k_min {
                return Err(Error::ParameterBoundViolated(format!(
                    "k > δ^(-r) = {} (got k = {k})",
                    bound(prec)
                )));
            }
            let c = Scalar::from_int(k as i64).pow_ratio(&-r.recip(), prec)?;
            inst.member = odd_tail(n, k, &c)?;
            inst.inner = Region::Ball(ball(&phi, Scalar::Exact(delta.clone()), MetricTag::Inf)?);
            inst.outer = Region::Ball(ball(&phi, half, rt.clone())?);
            inst.closed_forms = vec![
                ClosedForm { label: "d_inf".into(), metric: MetricTag::Inf, value: c },
                ClosedForm { label: format!("d_{rt}"), metric: rt, value: Scalar::one() },
            ];
            inst.k = k;
            inst.r = Some(r);
            inst.delta = Some(delta);
        }
        Comparison::RS => {
            let r = params.r.clone().unwrap_or_else(|| int(2));
            let s = params.s.clone().unwrap_or_else(|| int(1));
            if !(r > s && s >= Rational::one()) {
                return Err(Error::ParameterBoundViolated(format!(
                    "r > s >= 1 (got r = {}, s = {})",
                    rational_string(&r),
                    rational_string(&s)
                )));
            }
            let delta = require_delta(params)?;
            let e = &r * &s / (&r - &s);
            let bound = |p: u32| Scalar::Exact(delta.recip()).pow_ratio(&e, p).expect("positive base");
            let k_min = smallest_int_above(bound);
            let k = check_size(params.k.unwrap_or(k_min))?;
            if k < k_min {
                return Err(Error::ParameterBoundViolated(format!(
                    "k > δ^(rs/(s-r)) = {} (got k = {k})",
                    bound(prec)
                )));
            }
            let c = Scalar::from_int(k as i64).pow_ratio(&-s.recip(), prec)?;
            let dr = Scalar::from_int(k as i64).pow_ratio(&((&s - &r) / (&r * &s)), prec)?;
            let (rt, st) = (MetricTag::Finite(r.clone()), MetricTag::Finite(s.clone()));
            inst.member = odd_tail(n, k, &c)?;
            inst.inner = Region::Ball(ball(&phi, Scalar::Exact(delta.clone()), rt.clone())?);
            inst.outer = Region::Ball(ball(&phi, half, st.clone())?);
            inst.closed_forms = vec![
                ClosedForm { label: format!("d_{rt}"), metric: rt, value: dr },
                ClosedForm { label: format!("d_{st}"), metric: st, value: Scalar::one() },
            ];
            inst.k = k;
            inst.r = Some(r);
            inst.s = Some(s);
            inst.delta = Some(delta);
        }
        Comparison::SBox => {
            let s = params.s.clone().unwrap_or_else(|| int(1));
            let st = MetricTag::finite(s.clone()).map_err(|_| Error::ParameterBoundViolated("s >= 1".into()))?;
            let delta = require_delta(params)?;
            let bound = (int(4) - &delta) / &delta;
            let mut k_min = bound.floor().to_integer().to_u64().unwrap_or(u64::MAX).saturating_add(1);
            if k_min.is_even() {
                k_min += 1;
            }
            let k = check_size(params.k.unwrap_or(k_min))?;
            if Rational::from_integer(k.into()) <= bound || k.is_even() {
                return Err(Error::ParameterBoundViolated(format!(
                    "k odd and k > (4-δ)/δ = {} (got k = {k})",
                    rational_string(&bound)
                )));
            }
            let c = rat(4, k as i64 + 1);
            let mut t = CoefficientTable::new();
            t.set(Index::new(1, 1), Scalar::one());
            t.set(Index::new(1, k as u32), Scalar::Exact(c.clone()));
            inst.member = PolynomialKnot::from_table(n, t)?;
            inst.inner = Region::Ball(ball(&phi, Scalar::Exact(delta.clone()), st.clone())?);
            inst.outer = Region::Open(OpenSpec::Box(BoxOpenSpec::harmonic()));
            inst.closed_forms = vec![ClosedForm { label: format!("d_{st}"), metric: st, value: Scalar::Exact(c) }];
            inst.k = k;
            inst.s = Some(s);
            inst.delta = Some(delta);
        }
    }
    Ok(inst)
}

impl StrictnessInstance {
    pub fn verify(&self) -> StrictnessCheck {
        let tol = Rational::from_float(CLOSED_FORM_TOL).expect("finite");
        let closed_forms = self
            .closed_forms
            .iter()
            .map(|cf| {
                let computed = distance_at(self.base.table(), self.member.table(), &cf.metric, default_precision());
                let gap = (&computed - &cf.value).abs();
                ClosedFormCheck { label: cf.label.clone(), expected: cf.value.clone(), computed, pass: gap.hi() <= tol }
            })
            .collect();
        StrictnessCheck {
            certified: certify_embedding(&self.member).verdict.is_certified(),
            inner: self.inner.membership(self.member.table()),
            outer: self.outer.membership(self.member.table()),
            closed_forms,
        }
    }
}
