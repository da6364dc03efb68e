//! Bivariate polynomials over ℚ, viewed as polynomials in `y` with
//! coefficients in `ℚ[x]`.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::upoly::UPoly;
use crate::scalar::{int, Interval, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BPoly {
    /// `c[k]` is the coefficient of `y^k`.
    c: Vec<UPoly>,
}

impl BPoly {
    pub fn new(mut c: Vec<UPoly>) -> Self {
        while c.last().is_some_and(|p| p.is_zero()) {
            c.pop();
        }
        BPoly { c }
    }

    pub fn zero() -> Self {
        BPoly { c: Vec::new() }
    }

    pub fn constant(k: Rational) -> Self {
        BPoly::new(vec![UPoly::constant(k)])
    }

    pub fn x() -> Self {
        BPoly::new(vec![UPoly::x()])
    }

    pub fn y() -> Self {
        BPoly::new(vec![UPoly::zero(), UPoly::one()])
    }

    pub fn from_upoly_x(p: UPoly) -> Self {
        BPoly::new(vec![p])
    }

    /// Builds `Σ c · x^i y^j` from `(i, j, c)` triples.
    pub fn from_terms(terms: &[(usize, usize, Rational)]) -> Self {
        let ny = terms.iter().map(|t| t.1 + 1).max().unwrap_or(0);
        let mut c = vec![UPoly::zero(); ny];
        for (i, j, v) in terms {
            c[*j] = &c[*j] + &UPoly::monomial(v.clone(), *i);
        }
        BPoly::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg_y(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg_x(&self) -> Option<usize> {
        self.c.iter().filter_map(|p| p.degree()).max()
    }

    /// Nonzero and free of both variables.
    pub fn is_nonzero_constant(&self) -> bool {
        self.c.len() == 1 && self.c[0].degree() == Some(0)
    }

    pub fn coeff_y(&self, k: usize) -> UPoly {
        self.c.get(k).cloned().unwrap_or_else(UPoly::zero)
    }

    pub fn lc_y(&self) -> UPoly {
        self.c.last().cloned().unwrap_or_else(UPoly::zero)
    }

    pub fn scale(&self, k: &Rational) -> BPoly {
        BPoly::new(self.c.iter().map(|p| p.scale(k)).collect())
    }

    pub fn mul_x(&self, p: &UPoly) -> BPoly {
        BPoly::new(self.c.iter().map(|q| q * p).collect())
    }

    fn shift_y(&self, k: usize) -> BPoly {
        let mut c = vec![UPoly::zero(); k];
        c.extend(self.c.iter().cloned());
        BPoly::new(c)
    }

    /// Specialises `x := a`, giving a polynomial in `y`.
    pub fn eval_x(&self, a: &Rational) -> UPoly {
        UPoly::new(self.c.iter().map(|p| p.eval(a)).collect())
    }

    /// Specialises `y := b`, giving a polynomial in `x`.
    pub fn eval_y(&self, b: &Rational) -> UPoly {
        let mut acc = UPoly::zero();
        for p in self.c.iter().rev() {
            acc = &acc.scale(b) + p;
        }
        acc
    }

    pub fn eval(&self, a: &Rational, b: &Rational) -> Rational {
        self.eval_x(a).eval(b)
    }

    /// Natural interval extension over the box `xs × ys`.
    pub fn eval_box(&self, xs: &Interval, ys: &Interval) -> Interval {
        let mut acc = Interval::point(Rational::zero());
        for p in self.c.iter().rev() {
            acc = &(&acc * ys) + &p.eval_interval(xs);
        }
        acc
    }

    /// Substitutes `x := a(t)`, `y := b(t)`.
    pub fn compose(&self, a: &UPoly, b: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for p in self.c.iter().rev() {
            let mut px = UPoly::zero();
            for coef in p.coeffs().iter().rev() {
                px = &(&px * a) + &UPoly::constant(coef.clone());
            }
            acc = &(&acc * b) + &px;
        }
        acc
    }

    pub fn diff_x(&self) -> BPoly {
        BPoly::new(self.c.iter().map(|p| p.derivative()).collect())
    }

    pub fn diff_y(&self) -> BPoly {
        BPoly::new(self.c.iter().enumerate().skip(1).map(|(k, p)| p.scale(&int(k as i64))).collect())
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap(&self) -> BPoly {
        let nx = self.deg_x().map_or(0, |d| d + 1);
        let mut c = vec![Vec::new(); nx];
        for (j, p) in self.c.iter().enumerate() {
            for (i, v) in p.coeffs().iter().enumerate() {
                if c[i].len() <= j {
                    c[i].resize(j + 1, Rational::zero());
                }
                c[i][j] = v.clone();
            }
        }
        BPoly::new(c.into_iter().map(UPoly::new).collect())
    }

    /// Monic gcd of the `y`-coefficients.
    pub fn content_y(&self) -> UPoly {
        self.c.iter().fold(UPoly::zero(), |g, p| g.gcd(p))
    }

    pub fn primitive_y(&self) -> BPoly {
        if self.is_zero() {
            return BPoly::zero();
        }
        let g = self.content_y();
        BPoly::new(self.c.iter().map(|p| p.div_exact(&g).expect("content divides")).collect())
    }

    /// Scales so the leading coefficient of the leading `y`-coefficient is one.
    pub fn normalized(&self) -> BPoly {
        if self.is_zero() {
            return BPoly::zero();
        }
        self.scale(&self.lc_y().leading().recip())
    }

    /// Pseudo-remainder with respect to `y`.
    pub fn prem(&self, d: &BPoly) -> BPoly {
        let n = d.deg_y().expect("pseudo-division by zero");
        let lc = d.lc_y();
        let mut r = self.clone();
        while let Some(m) = r.deg_y() {
            if m < n {
                break;
            }
            let t = r.lc_y();
            r = &r.mul_x(&lc) - &d.shift_y(m - n).mul_x(&t);
        }
        r
    }

    /// Quotient when `d` divides `self` in `ℚ[x, y]`.
    pub fn div_exact(&self, d: &BPoly) -> Option<BPoly> {
        let n = d.deg_y()?;
        let lc = d.lc_y();
        let mut q = vec![UPoly::zero(); self.c.len().saturating_sub(n).max(1)];
        let mut r = self.clone();
        while let Some(m) = r.deg_y() {
            if m < n {
                return None;
            }
            let t = r.lc_y().div_exact(&lc)?;
            r = &r - &d.shift_y(m - n).mul_x(&t);
            q[m - n] = t;
        }
        Some(BPoly::new(q))
    }

    /// Normalised greatest common divisor in `ℚ[x, y]`.
    pub fn gcd(&self, other: &BPoly) -> BPoly {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let cont = self.content_y().gcd(&other.content_y());
        let mut a = self.primitive_y();
        let mut b = other.primitive_y();
        if a.deg_y() < b.deg_y() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_y() };
        }
        let core = if a.deg_y() == Some(0) { BPoly::constant(Rational::one()) } else { a };
        core.mul_x(&cont).normalized()
    }

    /// Removes repeated factors (content included).
    pub fn squarefree(&self) -> BPoly {
        if self.is_zero() {
            return BPoly::zero();
        }
        let cont = self.content_y();
        let pp = self.primitive_y();
        let core = if pp.deg_y().unwrap_or(0) == 0 {
            BPoly::constant(Rational::one())
        } else {
            let g = pp.gcd(&pp.diff_y());
            pp.div_exact(&g).expect("gcd divides")
        };
        core.mul_x(&cont.squarefree()).normalized()
    }

    /// Resultant with respect to `y`, a polynomial in `x`.
    pub fn resultant_y(&self, other: &BPoly) -> UPoly {
        let (m, n) = match (self.deg_y(), other.deg_y()) {
            (Some(m), Some(n)) => (m, n),
            _ => return UPoly::zero(),
        };
        if m == 0 && n == 0 {
            return UPoly::one();
        }
        if m == 0 {
            return upow(&self.c[0], n);
        }
        if n == 0 {
            return upow(&other.c[0], m);
        }
        let size = m + n;
        let mut mat = vec![vec![UPoly::zero(); size]; size];
        for i in 0..n {
            for k in 0..=m {
                mat[i][i + k] = self.c[m - k].clone();
            }
        }
        for i in 0..m {
            for k in 0..=n {
                mat[n + i][i + k] = other.c[n - k].clone();
            }
        }
        bareiss_det(mat)
    }

    /// Resultant with respect to `x`, a polynomial in `y`.
    pub fn resultant_x(&self, other: &BPoly) -> UPoly {
        self.swap().resultant_y(&other.swap())
    }
}

fn upow(p: &UPoly, n: usize) -> UPoly {
    (0..n).fold(UPoly::one(), |acc, _| &acc * p)
}

/// Fraction-free determinant over `ℚ[x]`.
fn bareiss_det(mut m: Vec<Vec<UPoly>>) -> UPoly {
    let n = m.len();
    let mut sign = Rational::one();
    let mut prev = UPoly::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return UPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = UPoly::zero();
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].scale(&sign)
}

impl Add for &BPoly {
    type Output = BPoly;
    fn add(self, o: &BPoly) -> BPoly {
        let n = self.c.len().max(o.c.len());
        BPoly::new((0..n).map(|k| &self.coeff_y(k) + &o.coeff_y(k)).collect())
    }
}

impl Sub for &BPoly {
    type Output = BPoly;
    fn sub(self, o: &BPoly) -> BPoly {
        let n = self.c.len().max(o.c.len());
        BPoly::new((0..n).map(|k| &self.coeff_y(k) - &o.coeff_y(k)).collect())
    }
}

impl Mul for &BPoly {
    type Output = BPoly;
    fn mul(self, o: &BPoly) -> BPoly {
        if self.is_zero() || o.is_zero() {
            return BPoly::zero();
        }
        let mut c = vec![UPoly::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        BPoly::new(c)
    }
}

impl Neg for &BPoly {
    type Output = BPoly;
    fn neg(self) -> BPoly {
        BPoly::new(self.c.iter().map(|p| -p).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(terms: &[(usize, usize, i64)]) -> BPoly {
        BPoly::from_terms(&terms.iter().map(|&(i, j, c)| (i, j, int(c))).collect::<Vec<_>>())
    }

    #[test]
    fn resultant_of_circle_and_line() {
        // x^2 + y^2 - 1 and y - x: eliminating y gives 2x^2 - 1
        let circle = b(&[(2, 0, 1), (0, 2, 1), (0, 0, -1)]);
        let line = b(&[(0, 1, 1), (1, 0, -1)]);
        let r = circle.resultant_y(&line);
        assert_eq!(r.monic(), UPoly::new(vec![Rational::new((-1).into(), 2.into()), Rational::zero(), Rational::one()]));
    }

    #[test]
    fn gcd_finds_common_factor() {
        let f = b(&[(1, 0, 1), (0, 1, 1)]); // x + y
        let g1 = &f * &b(&[(0, 1, 1), (0, 0, 3)]);
        let g2 = &f * &b(&[(2, 0, 1), (0, 0, 1)]);
        assert_eq!(g1.gcd(&g2), f.normalized());
        let h = b(&[(2, 0, 1), (0, 1, -1)]);
        assert!(h.gcd(&b(&[(0, 1, 1), (0, 0, -1)])).is_nonzero_constant());
    }

    #[test]
    fn gcd_with_x_only_content() {
        let f = b(&[(1, 0, 1), (0, 0, -2)]); // x - 2
        let g1 = &f * &b(&[(0, 1, 1)]);
        let g2 = &f * &b(&[(0, 2, 1), (0, 0, 1)]);
        assert_eq!(g1.gcd(&g2), f.normalized());
    }

    #[test]
    fn exact_division_round_trips() {
        let a = b(&[(1, 1, 2), (0, 0, 1)]);
        let c = b(&[(2, 0, 1), (0, 2, -1), (1, 1, 3)]);
        let prod = &a * &c;
        assert_eq!(prod.div_exact(&c), Some(a.clone()));
        assert_eq!(prod.div_exact(&a), Some(c));
    }

    #[test]
    fn swap_is_involutive() {
        let p = b(&[(3, 0, 1), (1, 2, -4), (0, 1, 5)]);
        assert_eq!(p.swap().swap(), p);
        assert_eq!(p.swap().eval(&int(2), &int(3)), p.eval(&int(3), &int(2)));
    }

    #[test]
    fn squarefree_strips_powers() {
        let f = b(&[(1, 0, 1), (0, 1, 1)]);
        let sq = &f * &f;
        assert_eq!(sq.squarefree(), f.normalized());
    }
}
