//! Sturm sequences and exact real root isolation over ℚ.

use std::cmp::Ordering;

use num_traits::Zero;

use super::upoly::UPoly;
use crate::error::{Error, Result};
use crate::scalar::{int, Interval, Rational};

#[derive(Clone, Debug)]
pub struct SturmChain {
    seq: Vec<UPoly>,
}

impl SturmChain {
    pub fn new(p: &UPoly) -> Self {
        let mut seq = vec![p.clone()];
        let mut prev = p.clone();
        let mut cur = p.derivative();
        while !cur.is_zero() {
            seq.push(cur.clone());
            let r = -&prev.rem(&cur);
            prev = cur;
            cur = r;
        }
        SturmChain { seq }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    fn variations<I: Iterator<Item = Ordering>>(signs: I) -> usize {
        let mut last = None;
        let mut v = 0;
        for s in signs.filter(|s| *s != Ordering::Equal) {
            if let Some(l) = last {
                if l != s {
                    v += 1;
                }
            }
            last = Some(s);
        }
        v
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::variations(self.seq.iter().map(|p| p.eval(x).cmp(&Rational::zero())))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|p| {
            let s = p.leading().cmp(&Rational::zero());
            if p.degree().unwrap_or(0) % 2 == 1 {
                s.reverse()
            } else {
                s
            }
        }))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|p| p.leading().cmp(&Rational::zero())))
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Number of distinct real roots in `(-∞, b]`.
    pub fn count_below(&self, b: &Rational) -> usize {
        self.variations_at_neg_inf().saturating_sub(self.variations_at(b))
    }

    /// Number of distinct real roots in `(a, +∞)`.
    pub fn count_above(&self, a: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at_pos_inf())
    }

    /// Number of distinct real roots.
    pub fn count_all(&self) -> usize {
        self.variations_at_neg_inf().saturating_sub(self.variations_at_pos_inf())
    }
}

/// A real root of a squarefree polynomial: exactly known, or the unique
/// root in the open interval `(lo, hi)` where the polynomial changes sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealRoot {
    Exact(Rational),
    Isolated { lo: Rational, hi: Rational, lo_sign: Ordering },
}

impl RealRoot {
    pub fn enclosure(&self) -> Interval {
        match self {
            RealRoot::Exact(x) => Interval::point(x.clone()),
            RealRoot::Isolated { lo, hi, .. } => Interval::new(lo.clone(), hi.clone()),
        }
    }

    pub fn width(&self) -> Rational {
        match self {
            RealRoot::Exact(_) => Rational::zero(),
            RealRoot::Isolated { lo, hi, .. } => hi - lo,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RealRoot::Exact(_))
    }

    /// One bisection step; `p` must be the polynomial the root was isolated for.
    pub fn bisect(&mut self, p: &UPoly) {
        if let RealRoot::Isolated { lo, hi, lo_sign } = self {
            let m = (&*lo + &*hi) / int(2);
            let v = p.eval(&m).cmp(&Rational::zero());
            if v == Ordering::Equal {
                *self = RealRoot::Exact(m);
            } else if v == *lo_sign {
                *lo = m;
            } else {
                *hi = m;
            }
        }
    }

    pub fn refine_to(&mut self, p: &UPoly, width: &Rational) {
        while &self.width() > width {
            self.bisect(p);
        }
    }
}

/// Isolating data for all real roots of a polynomial, sorted increasingly.
#[derive(Clone, Debug)]
pub struct RootIsolation {
    pub squarefree: UPoly,
    pub roots: Vec<RealRoot>,
}

impl RootIsolation {
    pub fn refine_all(&mut self, width: &Rational) {
        for r in &mut self.roots {
            r.refine_to(&self.squarefree, width);
        }
    }
}

fn sign(p: &UPoly, x: &Rational) -> Ordering {
    p.eval(x).cmp(&Rational::zero())
}

/// Turns "exactly one root in `(a, b]`" into a [`RealRoot`].
fn settle(p: &UPoly, chain: &SturmChain, mut a: Rational, mut b: Rational) -> RealRoot {
    if sign(p, &b) == Ordering::Equal {
        return RealRoot::Exact(b);
    }
    loop {
        let sa = sign(p, &a);
        if sa != Ordering::Equal {
            return RealRoot::Isolated { lo: a, hi: b, lo_sign: sa };
        }
        let m = (&a + &b) / int(2);
        if sign(p, &m) == Ordering::Equal {
            return RealRoot::Exact(m);
        }
        if chain.count(&m, &b) == 1 {
            a = m;
        } else {
            b = m;
        }
    }
}

fn isolate_half_open(p: &UPoly, chain: &SturmChain, a: Rational, b: Rational, out: &mut Vec<RealRoot>) {
    let mut stack = vec![(a, b)];
    while let Some((a, b)) = stack.pop() {
        match chain.count(&a, &b) {
            0 => {}
            1 => out.push(settle(p, chain, a, b)),
            _ => {
                let m = (&a + &b) / int(2);
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
}

fn sort_roots(roots: &mut [RealRoot]) {
    roots.sort_by(|x, y| x.enclosure().lo().cmp(y.enclosure().lo()));
}

/// Isolates every distinct real root of `p`.
pub fn isolate_real_roots(p: &UPoly) -> Result<RootIsolation> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sq = p.squarefree();
    let mut roots = Vec::new();
    if sq.degree().unwrap_or(0) >= 1 {
        let chain = SturmChain::new(&sq);
        let b = sq.cauchy_bound();
        isolate_half_open(&sq, &chain, -&b, b, &mut roots);
    }
    sort_roots(&mut roots);
    Ok(RootIsolation { squarefree: sq, roots })
}

/// Isolates the distinct real roots of `p` lying in the closed interval `[lo, hi]`.
pub fn isolate_real_roots_in(p: &UPoly, lo: &Rational, hi: &Rational) -> Result<RootIsolation> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sq = p.squarefree();
    let mut roots = Vec::new();
    if sq.degree().unwrap_or(0) >= 1 && lo <= hi {
        if sq.eval(lo).is_zero() {
            roots.push(RealRoot::Exact(lo.clone()));
        }
        if lo < hi {
            let chain = SturmChain::new(&sq);
            isolate_half_open(&sq, &chain, lo.clone(), hi.clone(), &mut roots);
        }
    }
    sort_roots(&mut roots);
    Ok(RootIsolation { squarefree: sq, roots })
}

/// Number of distinct real roots of `p` in `(-∞, b]`.
pub fn count_roots_below(p: &UPoly, b: &Rational) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sq = p.squarefree();
    if sq.is_constant() {
        return Ok(0);
    }
    Ok(SturmChain::new(&sq).count_below(b))
}

/// Whether `p` has no real root at all.
pub fn has_no_real_roots(p: &UPoly) -> bool {
    if p.is_zero() {
        return false;
    }
    let sq = p.squarefree();
    sq.is_constant() || SturmChain::new(&sq).count_all() == 0
}

/// Whether `p(t) > 0` for every `t >= 0` (`nonnegative`) or every `t <= 0`.
pub fn positive_on_half_line(p: &UPoly, nonnegative: bool) -> bool {
    if p.eval(&Rational::zero()) <= Rational::zero() {
        return false;
    }
    let sq = p.squarefree();
    if sq.is_constant() {
        return true;
    }
    let chain = SturmChain::new(&sq);
    let zero = Rational::zero();
    if nonnegative {
        chain.count_above(&zero) == 0
    } else {
        chain.count_below(&zero) == 0
    }
}

/// A rational strictly between two distinct roots of `p`, `left` below `right`.
pub(crate) fn separate(left: &mut RealRoot, right: &mut RealRoot, p: &UPoly) -> Rational {
    loop {
        let l = left.enclosure();
        let r = right.enclosure();
        if l.hi() < r.lo() {
            return (l.hi() + r.lo()) / int(2);
        }
        left.bisect(p);
        right.bisect(p);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn no_real_roots() {
        let p = UPoly::from_ints(&[1, 0, 1]);
        assert!(isolate_real_roots(&p).unwrap().roots.is_empty());
        // derivative of t^3 + t
        let p = UPoly::from_ints(&[1, 0, 3]);
        assert!(isolate_real_roots(&p).unwrap().roots.is_empty());
        assert!(has_no_real_roots(&p));
    }

    #[test]
    fn sqrt_two_is_isolated() {
        let p = UPoly::from_ints(&[-2, 0, 1]);
        let mut iso = isolate_real_roots(&p).unwrap();
        assert_eq!(iso.roots.len(), 2);
        iso.refine_all(&rat(1, 1 << 20));
        let a = iso.roots[0].enclosure();
        let b = iso.roots[1].enclosure();
        assert!(a.hi() < &rat(-14142, 10000) && a.lo() > &rat(-14143, 10000));
        assert!(b.lo() > &rat(14142, 10000) && b.hi() < &rat(14143, 10000));
    }

    #[test]
    fn rational_roots_become_exact() {
        // (t)(t-1)(t+1/2)
        let p = UPoly::new(vec![rat(0, 1), rat(-1, 2), rat(-1, 2), rat(1, 1)]);
        let mut iso = isolate_real_roots(&p).unwrap();
        assert_eq!(iso.roots.len(), 3);
        iso.refine_all(&rat(1, 1 << 30));
        let pts: Vec<_> = iso.roots.iter().map(|r| r.enclosure()).collect();
        assert!(pts[0].contains(&rat(-1, 2)));
        assert!(pts[1].contains(&rat(0, 1)));
        assert!(pts[2].contains(&rat(1, 1)));
    }

    #[test]
    fn multiple_roots_counted_once() {
        let p = UPoly::from_ints(&[0, 0, 0, 1]);
        let mut iso = isolate_real_roots(&p).unwrap();
        assert_eq!(iso.roots.len(), 1);
        iso.refine_all(&rat(1, 4));
        assert_eq!(iso.roots, vec![RealRoot::Exact(rat(0, 1))]);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(isolate_real_roots(&UPoly::zero()).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn closed_range_includes_endpoints() {
        let p = UPoly::from_ints(&[-1, 0, 1]);
        let iso = isolate_real_roots_in(&p, &rat(-1, 1), &rat(1, 1)).unwrap();
        assert_eq!(iso.roots.len(), 2);
        let iso = isolate_real_roots_in(&p, &rat(0, 1), &rat(1, 2)).unwrap();
        assert!(iso.roots.is_empty());
        assert_eq!(count_roots_below(&p, &rat(0, 1)).unwrap(), 1);
        assert_eq!(count_roots_below(&p, &rat(1, 1)).unwrap(), 2);
    }
}
