//! Exact certification that a polynomial map `ℝ → ℝⁿ` is a smooth embedding.
//!
//! For each component the symmetric difference quotient
//! `q_i(s, t) = (φ_i(s) − φ_i(t)) / (s − t)` is rewritten in the elementary
//! symmetric coordinates `e₁ = s + t`, `e₂ = st`. The map fails to be an
//! embedding exactly when all `q_i` share a zero with `e₁² − 4e₂ ≥ 0`; on the
//! boundary `e₁² = 4e₂` the quotient restricts to `φ_i'`.
//!
//! The decision runs in stages:
//!
//! 1. a component of degree one, or a strictly monotone component, certifies;
//! 2. common real roots of all `φ_i'` refute (diagonal case `s = t`);
//! 3. the common factor `g = gcd(p_i)` is a curve. Vertical lines and sample
//!    lines between the critical values of `g` are searched exactly with
//!    Sturm counts; isolated real points of `g` are singular and join the
//!    zero-dimensional stage;
//! 4. the cofactors `p_i / g` (and the singular system of `g`) have finitely
//!    many common zeros. Their coordinates are roots of two resultants; every
//!    candidate box is refined to unit width, then halved up to `depth` times
//!    and excluded by interval evaluation. A zero is reported only when it is
//!    proved: an exact rational point, or a Krawczyk contraction for a system
//!    of exactly two polynomials, strictly inside `e₁² > 4e₂`. Boxes that
//!    survive without proof leave the verdict inconclusive.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::sturm::{positive_on_half_line, separate};
use crate::poly::{isolate_real_roots, isolate_real_roots_in, BPoly, RealRoot, SturmChain, UPoly};
use crate::scalar::{default_precision, dyadic, int, Interval, Rational, Scalar};
use crate::table::{PolynomialKnot, Verdict};

pub const DEFAULT_DEPTH: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Halvings applied to each candidate box before giving up on it.
    pub depth: u32,
    /// Bits used for irrational witness coordinates.
    pub precision: u32,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { depth: DEFAULT_DEPTH, precision: default_precision() }
    }
}

/// Difference quotient of component `component` in `(e₁, e₂)` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateSymmetricPoly {
    pub component: u32,
    pub poly: BPoly,
}

impl BivariateSymmetricPoly {
    /// Restriction to the diagonal `s = t`, i.e. `p(2t, t²)`.
    pub fn diagonal(&self) -> UPoly {
        self.poly.compose(&UPoly::from_ints(&[0, 2]), &UPoly::from_ints(&[0, 0, 1]))
    }

    /// Value of `q(s, t)`.
    pub fn eval_st(&self, s: &Rational, t: &Rational) -> Rational {
        self.poly.eval(&(s + t), &(s * t))
    }
}

/// `h_k(s, t) = Σ_{m=0}^{k} s^m t^{k−m}` in `(e₁, e₂)`, for `k = 0..=max`.
fn complete_homogeneous(max: usize) -> Vec<BPoly> {
    let mut h = vec![BPoly::constant(Rational::one())];
    if max >= 1 {
        h.push(BPoly::x());
    }
    for k in 2..=max {
        let next = &(&BPoly::x() * &h[k - 1]) - &(&BPoly::y() * &h[k - 2]);
        h.push(next);
    }
    h
}

fn quotient_of(p: &UPoly, h: &[BPoly]) -> BPoly {
    let mut q = BPoly::zero();
    for (j, c) in p.coeffs().iter().enumerate().skip(1) {
        if !c.is_zero() {
            q = &q + &h[j - 1].scale(c);
        }
    }
    q
}

/// Difference quotients of every exact component of `knot`.
pub fn difference_quotients(knot: &PolynomialKnot) -> Result<Vec<BivariateSymmetricPoly>> {
    let h = complete_homogeneous(knot.degree() as usize);
    (1..=knot.dimension())
        .map(|i| {
            let p = knot
                .table()
                .exact_component(i)
                .ok_or_else(|| Error::Domain("difference quotients need exact coefficients".into()))?;
            Ok(BivariateSymmetricPoly { component: i, poly: quotient_of(&p, &h) })
        })
        .collect()
}

/// Isolating intervals for the distinct real roots of `p`, optionally
/// restricted to the closed range `[lo, hi]`. Exact roots come back as
/// degenerate intervals.
pub fn sturm_real_roots(p: &UPoly, range: Option<(&Rational, &Rational)>) -> Result<Vec<Interval>> {
    let iso = match range {
        Some((lo, hi)) => isolate_real_roots_in(p, lo, hi)?,
        None => isolate_real_roots(p)?,
    };
    Ok(iso.roots.iter().map(RealRoot::enclosure).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exclusion {
    /// `e₁² − 4e₂ < 0` on the box: the pair `(s, t)` is complex.
    Complex,
    /// Some quotient is bounded away from zero on the box.
    Nonzero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    LinearComponent { component: u32 },
    MonotoneComponent { component: u32 },
    ConstantMap,
    DerivativeRoot { t: Interval },
    VerticalLine { e1: Interval },
    SampleLine { e1: Rational, crossings: usize },
    ExcludedBox { e1: Interval, e2: Interval, reason: Exclusion },
    ZeroBox { e1: Interval, e2: Interval },
    UnresolvedBox { e1: Interval, e2: Interval },
    DegenerateSystem,
    IntervalCoefficients,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertCertificate {
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
}

impl CertCertificate {
    fn new(verdict: Verdict, evidence: Vec<Evidence>) -> Self {
        CertCertificate { verdict, evidence }
    }
}

/// Decides whether `knot` is a smooth embedding.
pub fn certify_embedding(knot: &PolynomialKnot) -> CertCertificate {
    certify_with(knot, &CertifyOptions::default())
}

pub fn certify_with(knot: &PolynomialKnot, opts: &CertifyOptions) -> CertCertificate {
    if knot.table().is_exact() {
        certify_exact(knot, opts)
    } else {
        certify_interval(knot)
    }
}

/// Certifies and stores the verdict on the knot.
pub fn certify_knot(knot: PolynomialKnot, opts: &CertifyOptions) -> (PolynomialKnot, CertCertificate) {
    let cert = certify_with(&knot, opts);
    (knot.with_verdict(cert.verdict.clone()), cert)
}

fn witness_width(opts: &CertifyOptions) -> Rational {
    dyadic(One::one(), opts.precision as i64)
}

fn root_scalar(mut root: RealRoot, p: &UPoly, width: &Rational) -> Scalar {
    root.refine_to(p, width);
    match root {
        RealRoot::Exact(x) => Scalar::Exact(x),
        RealRoot::Isolated { lo, hi, .. } => Scalar::Approx(Interval::new(lo, hi)),
    }
}

fn certify_exact(knot: &PolynomialKnot, opts: &CertifyOptions) -> CertCertificate {
    let comps: Vec<(u32, UPoly)> = (1..=knot.dimension())
        .filter_map(|i| knot.table().exact_component(i).map(|p| (i, p)))
        .filter(|(_, p)| p.degree().unwrap_or(0) >= 1)
        .collect();
    if comps.is_empty() {
        return CertCertificate::new(
            Verdict::Refuted { s: Scalar::zero(), t: Scalar::one() },
            vec![Evidence::ConstantMap],
        );
    }
    if let Some((i, _)) = comps.iter().find(|(_, p)| p.degree() == Some(1)) {
        return CertCertificate::new(Verdict::Certified, vec![Evidence::LinearComponent { component: *i }]);
    }

    let derivs: Vec<UPoly> = comps.iter().map(|(_, p)| p.derivative()).collect();
    for ((i, _), d) in comps.iter().zip(&derivs) {
        if positive_on_half_line(d, true) && positive_on_half_line(d, false)
            || positive_on_half_line(&-d, true) && positive_on_half_line(&-d, false)
        {
            return CertCertificate::new(Verdict::Certified, vec![Evidence::MonotoneComponent { component: *i }]);
        }
    }

    let h = complete_homogeneous(knot.degree() as usize);
    let quotients: Vec<BPoly> = comps.iter().map(|(_, p)| quotient_of(p, &h)).collect();
    let g = quotients.iter().fold(BPoly::zero(), |acc, q| acc.gcd(q));

    // Vertical lines e₁ = α meet e₁² − 4e₂ > 0 at e₂ = α²/4 − 1, i.e. s, t = α/2 ∓ 1.
    let content = g.content_y();
    if !content.is_constant() {
        let iso = isolate_real_roots(&content).expect("nonzero content");
        if let Some(root) = iso.roots.into_iter().next() {
            let alpha = root_scalar(root, &iso.squarefree, &witness_width(opts));
            let half = &alpha * &Scalar::ratio(1, 2);
            let ev = Evidence::VerticalLine { e1: alpha.to_interval() };
            let verdict = Verdict::Refuted { s: &half - &Scalar::one(), t: &half + &Scalar::one() };
            return CertCertificate::new(verdict, vec![ev]);
        }
    }

    let common = derivs.iter().fold(UPoly::zero(), |g, d| g.gcd(d));
    if !common.is_constant() {
        let iso = isolate_real_roots(&common).expect("nonzero gcd");
        if let Some(root) = iso.roots.into_iter().next() {
            let t = root_scalar(root, &iso.squarefree, &witness_width(opts));
            let ev = Evidence::DerivativeRoot { t: t.to_interval() };
            return CertCertificate::new(Verdict::Refuted { s: t.clone(), t }, vec![ev]);
        }
    }
    let mut evidence = Vec::new();
    let mut systems: Vec<Vec<BPoly>> = Vec::new();

    if !g.is_nonzero_constant() {
        match search_curve(&g, opts, &mut evidence) {
            CurveSearch::Zero { s, t } => return CertCertificate::new(Verdict::Refuted { s, t }, evidence),
            CurveSearch::Singular(sys) => systems.extend(sys),
        }
    }
    let cofactors: Vec<BPoly> = quotients.iter().map(|q| q.div_exact(&g).expect("gcd divides")).collect();
    systems.insert(0, cofactors);

    let mut unresolved = false;
    for sys in systems {
        match solve_zero_dim(&sys, opts, &mut evidence) {
            ZeroDim::None => {}
            ZeroDim::Zero { e1, e2 } => {
                let (s, t) = witness_from_symmetric(&e1, &e2, opts.precision);
                return CertCertificate::new(Verdict::Refuted { s, t }, evidence);
            }
            ZeroDim::Unresolved => unresolved = true,
        }
    }
    if unresolved {
        CertCertificate::new(Verdict::Inconclusive { depth: opts.depth }, evidence)
    } else {
        CertCertificate::new(Verdict::Certified, evidence)
    }
}

/// Roots of `z² − e₁z + e₂`, the larger first.
fn witness_from_symmetric(e1: &Scalar, e2: &Scalar, prec: u32) -> (Scalar, Scalar) {
    let disc = &(e1 * e1) - &(&Scalar::from_int(4) * e2);
    let root = disc.nth_root(2, prec);
    let half = Scalar::ratio(1, 2);
    let s = &(e1 + &root) * &half;
    let t = &(e1 - &root) * &half;
    (s, t)
}

enum CurveSearch {
    Zero { s: Scalar, t: Scalar },
    Singular(Vec<Vec<BPoly>>),
}

fn search_curve(g: &BPoly, opts: &CertifyOptions, evidence: &mut Vec<Evidence>) -> CurveSearch {
    let core = g.primitive_y().squarefree();
    if core.deg_y().unwrap_or(0) == 0 {
        return CurveSearch::Singular(Vec::new());
    }

    let crit = {
        let res = core.resultant_y(&core.diff_y());
        &core.lc_y() * &res
    };
    let mut iso = isolate_real_roots(&crit).expect("discriminant is nonzero for squarefree input");
    let mut samples = Vec::new();
    if iso.roots.is_empty() {
        samples.push(Rational::zero());
    } else {
        samples.push(iso.roots[0].enclosure().lo() - int(1));
        for k in 0..iso.roots.len() - 1 {
            let (left, right) = iso.roots.split_at_mut(k + 1);
            samples.push(separate(&mut left[k], &mut right[0], &iso.squarefree));
        }
        samples.push(iso.roots.last().unwrap().enclosure().hi() + int(1));
    }

    for c in samples {
        let fibre = core.eval_x(&c);
        let parabola = &c * &c / int(4);
        let fibre_iso = isolate_real_roots(&fibre).expect("leading coefficient is nonzero off critical values");
        let below: Vec<RealRoot> = fibre_iso
            .roots
            .into_iter()
            .filter(|r| r.enclosure().lo() < &parabola)
            .collect();
        evidence.push(Evidence::SampleLine { e1: c.clone(), crossings: below.len() });
        for mut r in below {
            // Roots on the parabola were ruled out by the derivative stage.
            while r.enclosure().contains(&parabola) {
                r.bisect(&fibre_iso.squarefree);
            }
            if r.enclosure().hi() < &parabola {
                let e2 = root_scalar(r, &fibre_iso.squarefree, &witness_width(opts));
                let (s, t) = witness_from_symmetric(&Scalar::Exact(c.clone()), &e2, opts.precision);
                return CurveSearch::Zero { s, t };
            }
        }
    }
    let singular = vec![core.clone(), core.diff_x(), core.diff_y()];
    CurveSearch::Singular(vec![singular])
}

enum ZeroDim {
    None,
    Zero { e1: Scalar, e2: Scalar },
    Unresolved,
}

fn coprime_pair(polys: &[BPoly]) -> Option<(BPoly, BPoly)> {
    let coprime = |a: &BPoly, b: &BPoly| a.gcd(b).is_nonzero_constant();
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            if coprime(&polys[i], &polys[j]) {
                return Some((polys[i].clone(), polys[j].clone()));
            }
        }
    }
    let weights: [fn(usize) -> i64; 4] = [
        |k| k as i64 + 1,
        |k| if k % 2 == 0 { k as i64 / 2 + 1 } else { -(k as i64 / 2 + 1) },
        |k| [2, 3, 5, 7, 11, 13, 17, 19][k % 8] * (k as i64 / 8 + 1),
        |k| (k as i64 + 1) * (k as i64 + 1),
    ];
    for first in 0..polys.len() {
        for w in weights {
            let mut combo = BPoly::zero();
            for (k, p) in polys.iter().enumerate().filter(|(k, _)| *k != first) {
                combo = &combo + &p.scale(&int(w(k)));
            }
            if coprime(&polys[first], &combo) {
                return Some((polys[first].clone(), combo));
            }
        }
    }
    None
}

fn solve_zero_dim(system: &[BPoly], opts: &CertifyOptions, evidence: &mut Vec<Evidence>) -> ZeroDim {
    let polys: Vec<BPoly> = system.iter().filter(|p| !p.is_zero()).cloned().collect();
    if polys.iter().any(BPoly::is_nonzero_constant) {
        return ZeroDim::None;
    }
    if polys.len() < 2 {
        evidence.push(Evidence::DegenerateSystem);
        return ZeroDim::Unresolved;
    }
    let Some((p, q)) = coprime_pair(&polys) else {
        evidence.push(Evidence::DegenerateSystem);
        return ZeroDim::Unresolved;
    };
    let r1 = p.resultant_y(&q);
    let r2 = p.resultant_x(&q);
    if r1.is_zero() || r2.is_zero() {
        evidence.push(Evidence::DegenerateSystem);
        return ZeroDim::Unresolved;
    }
    let iso1 = isolate_real_roots(&r1).expect("nonzero");
    let iso2 = isolate_real_roots(&r2).expect("nonzero");
    let candidates: Vec<(RealRoot, RealRoot)> = iso1
        .roots
        .iter()
        .flat_map(|a| iso2.roots.iter().map(move |b| (a.clone(), b.clone())))
        .collect();

    let newton = (polys.len() == 2).then(|| Newton::new(&polys[0], &polys[1]));
    let outcomes: Vec<BoxOutcome> = candidates
        .into_par_iter()
        .map(|(a, b)| classify_box(&polys, newton.as_ref(), a, &iso1.squarefree, b, &iso2.squarefree, opts))
        .collect();

    let mut result = ZeroDim::None;
    for outcome in outcomes {
        match outcome {
            BoxOutcome::Excluded { e1, e2, reason } => evidence.push(Evidence::ExcludedBox { e1, e2, reason }),
            BoxOutcome::Zero { e1, e2 } => {
                evidence.push(Evidence::ZeroBox { e1: e1.to_interval(), e2: e2.to_interval() });
                if !matches!(result, ZeroDim::Zero { .. }) {
                    result = ZeroDim::Zero { e1, e2 };
                }
            }
            BoxOutcome::Unresolved { e1, e2 } => {
                evidence.push(Evidence::UnresolvedBox { e1, e2 });
                if matches!(result, ZeroDim::None) {
                    result = ZeroDim::Unresolved;
                }
            }
        }
    }
    result
}

enum BoxOutcome {
    Excluded { e1: Interval, e2: Interval, reason: Exclusion },
    Zero { e1: Scalar, e2: Scalar },
    Unresolved { e1: Interval, e2: Interval },
}

/// A two-polynomial system with its Jacobian entries.
struct Newton {
    f: [BPoly; 2],
    jac: [[BPoly; 2]; 2],
}

impl Newton {
    fn new(p: &BPoly, q: &BPoly) -> Self {
        Newton { f: [p.clone(), q.clone()], jac: [[p.diff_x(), p.diff_y()], [q.diff_x(), q.diff_y()]] }
    }

    /// Krawczyk test: `true` proves a unique zero of the system in `xs × ys`.
    fn contracts(&self, xs: &Interval, ys: &Interval, prec: u32) -> bool {
        let (mx, my) = (xs.mid(), ys.mid());
        let f = [self.f[0].eval(&mx, &my), self.f[1].eval(&mx, &my)];
        let j = |r: usize, c: usize| self.jac[r][c].eval(&mx, &my);
        let det = j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0);
        if det.is_zero() {
            return false;
        }
        let inv = [[j(1, 1) / &det, -j(0, 1) / &det], [-j(1, 0) / &det, j(0, 0) / &det]];
        let jx: Vec<Vec<Interval>> =
            (0..2).map(|r| (0..2).map(|c| self.jac[r][c].eval_box(xs, ys).tidy(prec)).collect()).collect();
        let d = [xs - &Interval::point(mx.clone()), ys - &Interval::point(my.clone())];
        let centre = [&mx, &my];
        let boxes = [xs, ys];
        (0..2).all(|r| {
            let newton = centre[r] - (&inv[r][0] * &f[0] + &inv[r][1] * &f[1]);
            let mut k = Interval::point(newton);
            for c in 0..2 {
                let mut m = Interval::point(if r == c { int(1) } else { int(0) });
                for (l, row) in inv[r].iter().enumerate() {
                    m = &m - &(&Interval::point(row.clone()) * &jx[l][c]);
                }
                k = &k + &(&m.tidy(prec) * &d[c]);
            }
            k.lo() > boxes[r].lo() && k.hi() < boxes[r].hi()
        })
    }
}

/// Common zeros of `polys` on the line `x = c` (or `y = c`) inside the open
/// interval `range` exist.
fn fibre_zero(polys: &[BPoly], c: &Rational, vertical: bool, range: &Interval) -> bool {
    let mut g = UPoly::zero();
    for p in polys {
        let f = if vertical { p.eval_x(c) } else { p.eval_y(c) };
        g = g.gcd(&f);
    }
    if g.is_zero() {
        return true;
    }
    !g.is_constant() && SturmChain::new(&g).count(range.lo(), range.hi()) > 0
}

const WITNESS_BITS: i64 = 64;

fn classify_box(
    polys: &[BPoly],
    newton: Option<&Newton>,
    mut a: RealRoot,
    pa: &UPoly,
    mut b: RealRoot,
    pb: &UPoly,
    opts: &CertifyOptions,
) -> BoxOutcome {
    let four = Interval::point(int(4));
    let unit = Rational::one();
    a.refine_to(pa, &unit);
    b.refine_to(pb, &unit);
    let mut proved = false;
    let mut step = 0;
    loop {
        let xs = a.enclosure();
        let ys = b.enclosure();
        let disc = &xs.pow(2) - &(&four * &ys);
        if disc.hi().is_negative() {
            return BoxOutcome::Excluded { e1: xs, e2: ys, reason: Exclusion::Complex };
        }
        if polys.iter().any(|p| !p.eval_box(&xs, &ys).contains_zero()) {
            return BoxOutcome::Excluded { e1: xs, e2: ys, reason: Exclusion::Nonzero };
        }
        let exact = a.is_exact() && b.is_exact();
        if exact && !disc.lo().is_negative() {
            return BoxOutcome::Zero { e1: Scalar::Exact(xs.lo().clone()), e2: Scalar::Exact(ys.lo().clone()) };
        }
        if !proved {
            let fibre = match (&a, &b) {
                (RealRoot::Exact(c), _) => Some(fibre_zero(polys, c, true, &ys)),
                (_, RealRoot::Exact(c)) => Some(fibre_zero(polys, c, false, &xs)),
                _ => None,
            };
            match fibre {
                Some(false) => return BoxOutcome::Excluded { e1: xs, e2: ys, reason: Exclusion::Nonzero },
                Some(true) => proved = true,
                None => proved = newton.is_some_and(|n| n.contracts(&xs, &ys, opts.precision)),
            }
        }
        if proved && disc.lo().is_positive() {
            let width = dyadic(One::one(), WITNESS_BITS);
            a.refine_to(pa, &width);
            b.refine_to(pb, &width);
            let as_scalar = |r: &RealRoot| match r {
                RealRoot::Exact(v) => Scalar::Exact(v.clone()),
                r => Scalar::from_interval(r.enclosure()),
            };
            return BoxOutcome::Zero { e1: as_scalar(&a), e2: as_scalar(&b) };
        }
        if step >= opts.depth {
            return BoxOutcome::Unresolved { e1: xs, e2: ys };
        }
        a.bisect(pa);
        b.bisect(pb);
        step += 1;
    }
}

/// Interval-coefficient knots: certified only when some component is
/// robustly linear or robustly monotone over the whole coefficient box.
fn certify_interval(knot: &PolynomialKnot) -> CertCertificate {
    let mut any_active = false;
    for i in 1..=knot.dimension() {
        let terms: Vec<(u32, Scalar)> =
            knot.table().component(i).filter(|(j, _)| *j >= 1).map(|(j, v)| (j, v.clone())).collect();
        if terms.is_empty() {
            continue;
        }
        any_active = true;
        if terms.len() == 1 && terms[0].0 == 1 && !terms[0].1.contains_zero() {
            return CertCertificate::new(Verdict::Certified, vec![Evidence::LinearComponent { component: i }]);
        }
        let deg = terms.iter().map(|t| t.0).max().unwrap() as usize;
        let mut lo = vec![Rational::zero(); deg];
        let mut hi = vec![Rational::zero(); deg];
        for (j, v) in &terms {
            let k = *j as usize - 1;
            let scale = int(*j as i64);
            lo[k] = v.lo() * &scale;
            hi[k] = v.hi() * &scale;
        }
        // Lower envelopes of φ_i' over the coefficient box on t >= 0 and t <= 0.
        let pick = |even_lo: bool, odd_lo: bool| {
            UPoly::new(
                (0..deg)
                    .map(|k| {
                        let use_lo = if k % 2 == 0 { even_lo } else { odd_lo };
                        if use_lo { lo[k].clone() } else { hi[k].clone() }
                    })
                    .collect(),
            )
        };
        let positive = positive_on_half_line(&pick(true, true), true) && positive_on_half_line(&pick(true, false), false);
        let negative =
            positive_on_half_line(&-&pick(false, false), true) && positive_on_half_line(&-&pick(false, true), false);
        if positive || negative {
            return CertCertificate::new(Verdict::Certified, vec![Evidence::MonotoneComponent { component: i }]);
        }
    }
    if !any_active {
        return CertCertificate::new(
            Verdict::Refuted { s: Scalar::zero(), t: Scalar::one() },
            vec![Evidence::ConstantMap],
        );
    }
    CertCertificate::new(Verdict::Inconclusive { depth: 0 }, vec![Evidence::IntervalCoefficients])
}

/// Re-checks a refutation witness by direct evaluation.
pub fn verify_witness(knot: &PolynomialKnot, s: &Scalar, t: &Scalar) -> bool {
    if s == t {
        return knot.evaluate_derivative(s).iter().all(Scalar::contains_zero);
    }
    if (s - t).sign().is_none_or(|o| o == Ordering::Equal) {
        return false;
    }
    let a = knot.evaluate(s);
    let b = knot.evaluate(t);
    a.iter().zip(&b).all(|(x, y)| (x - y).contains_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::table::PolynomialKnot;

    fn knot(n: u32, terms: &[(u32, u32, i64)]) -> PolynomialKnot {
        PolynomialKnot::from_int_terms(n, terms).unwrap()
    }

    fn verdict(k: &PolynomialKnot) -> Verdict {
        certify_embedding(k).verdict
    }

    #[test]
    fn quotient_examples() {
        let q = difference_quotients(&knot(1, &[(1, 1, 1)])).unwrap();
        assert_eq!(q[0].poly, BPoly::constant(int(1)));
        let q = difference_quotients(&knot(1, &[(1, 2, 1)])).unwrap();
        assert_eq!(q[0].poly, BPoly::x());
        // t^3 + t → e1² − e2 + 1
        let q = difference_quotients(&knot(1, &[(1, 3, 1), (1, 1, 1)])).unwrap();
        let expected = BPoly::from_terms(&[(2, 0, int(1)), (0, 1, int(-1)), (0, 0, int(1))]);
        assert_eq!(q[0].poly, expected);
        assert_eq!(q[0].diagonal(), UPoly::from_ints(&[1, 0, 3]));
    }

    #[test]
    fn sturm_examples() {
        assert!(sturm_real_roots(&UPoly::from_ints(&[1, 0, 1]), None).unwrap().is_empty());
        let r = sturm_real_roots(&UPoly::from_ints(&[-2, 0, 1]), None).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].hi() <= &int(0) && r[1].lo() >= &int(0));
        assert!(sturm_real_roots(&UPoly::from_ints(&[1, 0, 3]), None).unwrap().is_empty());
        assert_eq!(sturm_real_roots(&UPoly::zero(), None).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn certify_examples() {
        assert_eq!(verdict(&knot(3, &[(1, 1, 1)])), Verdict::Certified);
        assert_eq!(verdict(&knot(2, &[(1, 3, 1), (1, 1, 1)])), Verdict::Certified);
        let trefoil = knot(3, &[(1, 3, 1), (1, 1, -3), (2, 4, 1), (2, 2, -4), (3, 5, 1), (3, 1, -10)]);
        assert_eq!(verdict(&trefoil), Verdict::Certified);
    }

    #[test]
    fn even_map_is_refuted() {
        let k = knot(2, &[(1, 2, 1)]);
        match verdict(&k) {
            Verdict::Refuted { s, t } => {
                assert_eq!((s.clone(), t.clone()), (Scalar::from_int(-1), Scalar::from_int(1)));
                assert!(verify_witness(&k, &s, &t));
            }
            v => panic!("unexpected {v:?}"),
        }
        // t ↦ (t², t⁴): derivative vanishes at 0 as well
        let k = knot(2, &[(1, 2, 1), (2, 4, 1)]);
        assert!(matches!(verdict(&k), Verdict::Refuted { .. }));
    }

    #[test]
    fn even_curve_refuted_off_diagonal() {
        // planar node: crosses itself at t = ±1
        let k = knot(2, &[(1, 2, 1), (1, 0, -1), (2, 3, 1), (2, 1, -1)]);
        match verdict(&k) {
            Verdict::Refuted { s, t } => {
                assert!(verify_witness(&k, &s, &t));
                let mut pair = [s.to_f64(), t.to_f64()];
                pair.sort_by(f64::total_cmp);
                assert!((pair[0] + 1.0).abs() < 1e-9 && (pair[1] - 1.0).abs() < 1e-9);
            }
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn cusp_is_refuted_on_diagonal() {
        let k = knot(2, &[(1, 3, 1)]);
        assert_eq!(verdict(&k), Verdict::Refuted { s: Scalar::zero(), t: Scalar::zero() });
    }

    #[test]
    fn composite_map_certified_through_common_factor() {
        // (u² + u, u³) with u = t³ + t: every quotient shares the factor of u
        let u = UPoly::from_ints(&[0, 1, 0, 1]);
        let c1 = &(&u * &u) + &u;
        let c2 = &(&u * &u) * &u;
        let mut terms = Vec::new();
        for (i, c) in [(1u32, &c1), (2, &c2)] {
            for (j, v) in c.coeffs().iter().enumerate() {
                if !v.is_zero() {
                    terms.push((crate::table::Index::new(i, j as u32), Scalar::Exact(v.clone())));
                }
            }
        }
        let k = crate::table::make_knot(2, terms).unwrap();
        let cert = certify_embedding(&k);
        assert_eq!(cert.verdict, Verdict::Certified);
        assert!(cert.evidence.iter().any(|e| matches!(e, Evidence::SampleLine { .. })));
    }

    #[test]
    fn constant_map_refuted() {
        let k = knot(2, &[(1, 0, 3)]);
        assert_eq!(verdict(&k), Verdict::Refuted { s: Scalar::zero(), t: Scalar::one() });
    }

    #[test]
    fn interval_coefficients_use_robust_monotonicity() {
        let c = Scalar::from_int(12).pow_ratio(&rat(-1, 2), 128).unwrap();
        let mut entries = vec![(crate::table::Index::new(1, 1), Scalar::one())];
        for j in (3..=25).step_by(2) {
            entries.push((crate::table::Index::new(1, j), c.clone()));
        }
        let k = crate::table::make_knot(2, entries).unwrap();
        assert_eq!(verdict(&k), Verdict::Certified);

        let wobble = crate::table::make_knot(
            2,
            [
                (crate::table::Index::new(1, 3), Scalar::Approx(Interval::new(rat(9, 10), rat(11, 10)))),
                (crate::table::Index::new(1, 1), Scalar::Approx(Interval::new(rat(-1, 10), rat(1, 10)))),
                (crate::table::Index::new(2, 2), Scalar::one()),
            ],
        )
        .unwrap();
        assert!(matches!(verdict(&wobble), Verdict::Inconclusive { .. }));
    }

    fn refuted_irrationally(k: &PolynomialKnot) {
        match verdict(k) {
            Verdict::Refuted { s, t } => {
                assert!(!s.is_exact() && !t.is_exact());
                assert!(s.radius() < rat(1, 1 << 40));
                assert!(verify_witness(k, &s, &t));
            }
            v => panic!("expected a refutation, got {v:?}"),
        }
    }

    #[test]
    fn double_point_on_rational_line() {
        // φ₁ forces s + t = 1/3; the crossing sits at 1/6 ± √23/6
        refuted_irrationally(&knot(2, &[(1, 0, 1), (1, 1, 1), (1, 2, -3), (2, 1, 1), (2, 3, -2), (2, 4, 1)]));
    }

    #[test]
    fn double_point_by_contraction() {
        refuted_irrationally(&knot(2, &[(1, 0, 1), (1, 2, -3), (1, 3, 1), (2, 1, 1), (2, 2, 1), (2, 3, -4), (2, 4, 1)]));
    }

    #[test]
    fn wide_candidate_boxes_are_not_zeros() {
        let k = crate::table::make_knot(
            3,
            [
                ((1, 3), rat(5, 1000)),
                ((1, 5), rat(-1, 10000)),
                ((2, 1), int(-1)),
                ((2, 2), rat(4, 10)),
                ((2, 3), rat(4, 300)),
                ((2, 6), rat(7, 200000)),
                ((3, 0), rat(-13, 40)),
                ((3, 1), int(5)),
                ((3, 3), rat(-1, 100)),
                ((3, 6), rat(5, 100000)),
            ]
            .map(|((i, j), v)| (crate::table::Index::new(i, j), Scalar::Exact(v))),
        )
        .unwrap();
        assert_eq!(verdict(&k), Verdict::Certified);
    }
}
