//! Dual-mode scalars: exact rationals and certified rational-endpoint intervals.
//!
//! Interval endpoints are arbitrary rationals. Only the irrational operations
//! (`q`-th roots and non-integer powers) round, and they round outward to a
//! caller-supplied number of significant bits.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub const DEFAULT_PRECISION_BITS: u32 = 128;
pub const MAX_PRECISION_BITS: u32 = 1024;
pub const PRECISION_ENV: &str = "POLYKNOT_PRECISION_BITS";

/// Working precision in bits, honouring `POLYKNOT_PRECISION_BITS`.
pub fn default_precision() -> u32 {
    static BITS: OnceLock<u32> = OnceLock::new();
    *BITS.get_or_init(|| {
        std::env::var(PRECISION_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .filter(|&b| b >= 16)
            .map(|b| b.min(MAX_PRECISION_BITS))
            .unwrap_or(DEFAULT_PRECISION_BITS)
    })
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `m / 2^k` for any signed `k`.
pub(crate) fn dyadic(m: BigInt, k: i64) -> Rational {
    if k >= 0 {
        Rational::new(m, BigInt::one() << (k as usize))
    } else {
        Rational::from_integer(m << ((-k) as usize))
    }
}

/// Rough `log2 |x|`, off by at most one.
fn log2_estimate(x: &Rational) -> i64 {
    x.numer().bits() as i64 - x.denom().bits() as i64
}

fn bit_size(x: &Rational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// Largest dyadic with about `prec` significant bits that is `<= x`.
pub fn round_down(x: &Rational, prec: u32) -> Rational {
    if x.is_zero() || bit_size(x) <= 2 * prec as u64 + 8 {
        return x.clone();
    }
    let k = prec as i64 - log2_estimate(x);
    let (n, d) = (x.numer(), x.denom());
    let m = if k >= 0 {
        (n << (k as usize)).div_floor(d)
    } else {
        n.div_floor(&(d << ((-k) as usize)))
    };
    dyadic(m, k)
}

/// Smallest dyadic with about `prec` significant bits that is `>= x`.
pub fn round_up(x: &Rational, prec: u32) -> Rational {
    -round_down(&-x, prec)
}

/// Exact `q`-th root of a nonnegative rational, when it is rational.
pub fn exact_root(x: &Rational, q: u32) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    if q == 1 {
        return Some(x.clone());
    }
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    let rn = n.nth_root(q);
    let rd = d.nth_root(q);
    if rn.pow(q) == *n && rd.pow(q) == *d {
        Some(Rational::new(BigInt::from(rn), BigInt::from(rd)))
    } else {
        None
    }
}

/// Enclosure `[lo, hi]` of `x^(1/q)` for `x >= 0`, with about `prec` bits.
pub fn root_bounds(x: &Rational, q: u32, prec: u32) -> (Rational, Rational) {
    assert!(!x.is_negative(), "root of a negative rational");
    assert!(q >= 1);
    if let Some(r) = exact_root(x, q) {
        return (r.clone(), r);
    }
    let k = prec as i64 - Integer::div_floor(&log2_estimate(x), &(q as i64));
    let shift = k * q as i64;
    let (n, d) = (x.numer(), x.denom());
    let scaled = if shift >= 0 {
        (n << (shift as usize)).div_floor(d)
    } else {
        n.div_floor(&(d << ((-shift) as usize)))
    };
    let m: BigUint = scaled.magnitude().nth_root(q);
    let m = BigInt::from_biguint(Sign::Plus, m);
    (dyadic(m.clone(), k), dyadic(m + 1, k))
}

/// Enclosure of `x^p` for `x >= 0`, rounding intermediate results outward.
fn pow_bounds(x: &Rational, p: u32, prec: u32) -> (Rational, Rational) {
    let guard = prec + 32;
    let mut lo = Rational::one();
    let mut hi = Rational::one();
    let mut base_lo = x.clone();
    let mut base_hi = x.clone();
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            lo = round_down(&(&lo * &base_lo), guard);
            hi = round_up(&(&hi * &base_hi), guard);
        }
        e >>= 1;
        if e > 0 {
            base_lo = round_down(&(&base_lo * &base_lo), guard);
            base_hi = round_up(&(&base_hi * &base_hi), guard);
        }
    }
    (lo, hi)
}

/// Parses `"p/q"`, integers and decimal strings (`"0.25"`, `"-1.5e-3"`) exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{ip}{fp}").parse().ok()?;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Some(value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundDir {
    Down,
    Up,
    Nearest,
}

/// Decimal rendering with `sig` significant digits, rounded in direction `dir`.
pub fn decimal_string(x: &Rational, sig: u32, dir: RoundDir) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if x.is_negative() {
        let flipped = match dir {
            RoundDir::Down => RoundDir::Up,
            RoundDir::Up => RoundDir::Down,
            RoundDir::Nearest => RoundDir::Nearest,
        };
        return format!("-{}", decimal_string(&-x, sig, flipped));
    }
    let est = {
        let bits = log2_estimate(x) as f64;
        (bits * std::f64::consts::LOG10_2).floor() as i64
    };
    let shift = sig as i64 - 1 - est;
    let ten = BigInt::from(10);
    let scaled = if shift >= 0 {
        x * Rational::from_integer(num_traits::pow(ten, shift as usize))
    } else {
        x / Rational::from_integer(num_traits::pow(ten, (-shift) as usize))
    };
    let n = match dir {
        RoundDir::Down => scaled.floor(),
        RoundDir::Up => scaled.ceil(),
        RoundDir::Nearest => scaled.round(),
    }
    .to_integer();
    let digits = n.to_string();
    let mut out = if shift <= 0 {
        format!("{digits}{}", "0".repeat((-shift) as usize))
    } else if digits.len() as i64 > shift {
        let cut = digits.len() - shift as usize;
        format!("{}.{}", &digits[..cut], &digits[cut..])
    } else {
        format!("0.{}{}", "0".repeat((shift as usize) - digits.len()), digits)
    };
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

pub fn rational_string(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn radius(&self) -> Rational {
        (&self.hi - &self.lo) / int(2)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Sign of every member, if it is the same for all of them.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            Interval::new(-&self.hi, -&self.lo)
        } else {
            let m = if -&self.lo > self.hi { -&self.lo } else { self.hi.clone() };
            Interval::new(Rational::zero(), m)
        }
    }

    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            None
        } else {
            Some(Interval::new(self.hi.recip(), self.lo.recip()))
        }
    }

    pub fn pow(&self, n: u32) -> Interval {
        if n == 0 {
            return Interval::point(Rational::one());
        }
        if n % 2 == 1 {
            Interval::new(num_traits::pow(self.lo.clone(), n as usize), num_traits::pow(self.hi.clone(), n as usize))
        } else {
            let a = self.abs();
            Interval::new(num_traits::pow(a.lo, n as usize), num_traits::pow(a.hi, n as usize))
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.clone().min(other.lo.clone()), self.hi.clone().max(other.hi.clone()))
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.clone().max(other.lo.clone()), self.hi.clone().max(other.hi.clone()))
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.clone().min(other.lo.clone()), self.hi.clone().min(other.hi.clone()))
    }

    /// Rounds endpoints outward when they have grown past `prec` bits.
    pub fn tidy(&self, prec: u32) -> Interval {
        Interval::new(round_down(&self.lo, prec), round_up(&self.hi, prec))
    }

    /// `[lo, hi]^(1/q)` for a nonnegative interval.
    pub fn nth_root(&self, q: u32, prec: u32) -> Interval {
        let lo = if self.lo.is_negative() { Rational::zero() } else { self.lo.clone() };
        let (l, _) = root_bounds(&lo, q, prec);
        let (_, h) = root_bounds(&self.hi, q, prec);
        Interval::new(l, h)
    }

    pub fn sqrt(&self, prec: u32) -> Interval {
        self.nth_root(2, prec)
    }

    /// `[lo, hi]^e` for a nonnegative interval and positive rational `e`.
    pub fn pow_ratio(&self, e: &Rational, prec: u32) -> Interval {
        assert!(e.is_positive());
        let p = e.numer().to_u32().expect("exponent numerator too large");
        let q = e.denom().to_u32().expect("exponent denominator too large");
        let lo = if self.lo.is_negative() { Rational::zero() } else { self.lo.clone() };
        let (lo_p, _) = pow_bounds(&lo, p, prec);
        let (_, hi_p) = pow_bounds(&self.hi, p, prec);
        let (l, _) = root_bounds(&lo_p, q, prec);
        let (_, h) = root_bounds(&hi_p, q, prec);
        Interval::new(round_down(&l, prec + 16), round_up(&h, prec + 16))
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        if self.is_point() && o.is_point() {
            return Interval::point(&self.lo * &o.lo);
        }
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            decimal_string(&self.lo, 17, RoundDir::Down),
            decimal_string(&self.hi, 17, RoundDir::Up)
        )
    }
}

/// A real number, either known exactly or enclosed by an interval.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Exact(Rational),
    Approx(Interval),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Exact(rat(n, d))
    }

    /// Wraps an interval, collapsing degenerate ones to exact values.
    pub fn from_interval(iv: Interval) -> Self {
        if iv.is_point() {
            Scalar::Exact(iv.lo)
        } else {
            Scalar::Approx(iv)
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, Scalar::Exact(x) if x.is_zero())
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(x) => Some(x),
            Scalar::Approx(_) => None,
        }
    }

    pub fn to_interval(&self) -> Interval {
        match self {
            Scalar::Exact(x) => Interval::point(x.clone()),
            Scalar::Approx(iv) => iv.clone(),
        }
    }

    pub fn lo(&self) -> Rational {
        match self {
            Scalar::Exact(x) => x.clone(),
            Scalar::Approx(iv) => iv.lo.clone(),
        }
    }

    pub fn hi(&self) -> Rational {
        match self {
            Scalar::Exact(x) => x.clone(),
            Scalar::Approx(iv) => iv.hi.clone(),
        }
    }

    pub fn mid(&self) -> Rational {
        match self {
            Scalar::Exact(x) => x.clone(),
            Scalar::Approx(iv) => iv.mid(),
        }
    }

    pub fn radius(&self) -> Rational {
        match self {
            Scalar::Exact(_) => Rational::zero(),
            Scalar::Approx(iv) => iv.radius(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    pub fn contains_zero(&self) -> bool {
        match self {
            Scalar::Exact(x) => x.is_zero(),
            Scalar::Approx(iv) => iv.contains_zero(),
        }
    }

    /// Certain sign, `None` when the enclosure straddles zero.
    pub fn sign(&self) -> Option<Ordering> {
        match self {
            Scalar::Exact(x) => Some(x.cmp(&Rational::zero())),
            Scalar::Approx(iv) => iv.sign(),
        }
    }

    /// Certain ordering against another scalar.
    pub fn cmp_certain(&self, other: &Scalar) -> Option<Ordering> {
        (self - other).sign()
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(x) => Scalar::Exact(x.abs()),
            Scalar::Approx(iv) => Scalar::from_interval(iv.abs()),
        }
    }

    pub fn recip(&self) -> Option<Scalar> {
        match self {
            Scalar::Exact(x) if x.is_zero() => None,
            Scalar::Exact(x) => Some(Scalar::Exact(x.recip())),
            Scalar::Approx(iv) => iv.recip().map(Scalar::from_interval),
        }
    }

    pub fn pow(&self, n: u32) -> Scalar {
        match self {
            Scalar::Exact(x) => Scalar::Exact(num_traits::pow(x.clone(), n as usize)),
            Scalar::Approx(iv) => Scalar::from_interval(iv.pow(n)),
        }
    }

    /// `self^e` for a rational exponent. Non-integer exponents need `self >= 0`.
    /// The result is exact whenever the power is rational.
    pub fn pow_ratio(&self, e: &Rational, prec: u32) -> Result<Scalar> {
        if e.is_zero() {
            return Ok(Scalar::one());
        }
        if e.is_negative() {
            return self
                .pow_ratio(&-e, prec)?
                .recip()
                .ok_or_else(|| Error::Domain("negative power of zero".into()));
        }
        if e.is_integer() {
            let p = e.to_integer().to_u32().ok_or_else(|| Error::Domain("exponent too large".into()))?;
            return Ok(self.pow(p));
        }
        if self.sign() == Some(Ordering::Less) {
            return Err(Error::Domain("fractional power of a negative number".into()));
        }
        let p = e.numer().to_u32().ok_or_else(|| Error::Domain("exponent too large".into()))?;
        let q = e.denom().to_u32().ok_or_else(|| Error::Domain("exponent too large".into()))?;
        match self {
            Scalar::Exact(x) => {
                if x.is_zero() {
                    return Ok(Scalar::zero());
                }
                if let Some(r) = exact_root(x, q) {
                    return Ok(Scalar::Exact(num_traits::pow(r, p as usize)));
                }
                Ok(Scalar::from_interval(Interval::point(x.clone()).pow_ratio(e, prec)))
            }
            Scalar::Approx(iv) => Ok(Scalar::from_interval(iv.pow_ratio(e, prec))),
        }
    }

    /// `self^(1/q)` for `self >= 0`.
    pub fn nth_root(&self, q: u32, prec: u32) -> Scalar {
        match self {
            Scalar::Exact(x) => match exact_root(x, q) {
                Some(r) => Scalar::Exact(r),
                None => Scalar::from_interval(Interval::point(x.clone()).nth_root(q, prec)),
            },
            Scalar::Approx(iv) => Scalar::from_interval(iv.nth_root(q, prec)),
        }
    }

    pub fn max(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.clone().max(b.clone())),
            _ => Scalar::from_interval(self.to_interval().max(&other.to_interval())),
        }
    }

    pub fn min(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.clone().min(b.clone())),
            _ => Scalar::from_interval(self.to_interval().min(&other.to_interval())),
        }
    }

    /// Lossless text form: `"p/q"` or `"[p/q, r/s]"`.
    pub fn to_exact_string(&self) -> String {
        match self {
            Scalar::Exact(x) => rational_string(x),
            Scalar::Approx(iv) => format!("[{}, {}]", rational_string(&iv.lo), rational_string(&iv.hi)),
        }
    }

    /// Inverse of [`Scalar::to_exact_string`], also accepting decimals.
    pub fn parse(s: &str) -> Option<Scalar> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let (a, b) = inner.split_once(',')?;
            let lo = parse_rational(a)?;
            let hi = parse_rational(b)?;
            if lo > hi {
                return None;
            }
            return Some(Scalar::from_interval(Interval::new(lo, hi)));
        }
        parse_rational(s).map(Scalar::Exact)
    }
}

impl From<Rational> for Scalar {
    fn from(x: Rational) -> Self {
        Scalar::Exact(x)
    }
}

impl From<i64> for Scalar {
    fn from(x: i64) -> Self {
        Scalar::from_int(x)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(x) => f.write_str(&rational_string(x)),
            Scalar::Approx(iv) => iv.fmt(f),
        }
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                match (self, o) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.$m(b)),
                    _ => Scalar::from_interval((&self.to_interval()).$m(&o.to_interval())),
                }
            }
        }
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}

scalar_binop!(Add, add);
scalar_binop!(Sub, sub);
scalar_binop!(Mul, mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(x) => Scalar::Exact(-x),
            Scalar::Approx(iv) => Scalar::Approx(-iv),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
