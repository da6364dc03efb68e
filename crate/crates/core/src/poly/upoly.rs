use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::scalar::{int, Interval, Rational};

/// Dense univariate polynomial over ℚ, coefficients stored lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UPoly::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        UPoly::new(vec![c])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        UPoly::new(coeffs)
    }

    pub fn x() -> Self {
        UPoly::monomial(Rational::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_interval(&self, x: &Interval) -> Interval {
        if x.is_point() {
            return Interval::point(self.eval(x.lo()));
        }
        let mut acc = Interval::point(Rational::zero());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Interval::point(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> UPoly {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        self.scale(&self.leading().recip())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        let n = r.len();
        if n <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    r[k + i] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).1
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn squarefree(&self) -> UPoly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Strict bound on the absolute value of every complex root.
    pub fn cauchy_bound(&self) -> Rational {
        let lc = self.leading().abs();
        let m = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(Rational::zero);
        m + Rational::one()
    }

    /// Makes all coefficients integers with content one and positive leading coefficient.
    pub fn primitive_integer(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        use num_integer::Integer;
        let lcm = self.coeffs.iter().fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<_> = self.coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -num_bigint::BigInt::one() } else { num_bigint::BigInt::one() };
        UPoly::new(ints.into_iter().map(|c| Rational::from_integer(c * &sign / &g)).collect())
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => {}
                _ => write!(f, "{a}*")?,
            }
            match k {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}
