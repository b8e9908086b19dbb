//! Exact arithmetic in the real quadratic field `Q(√d)`.
//!
//! Elements are stored as `a + b√d` with rational `a`, `b` and a squarefree
//! radicand `d ≥ 2`. Elements with `b = 0` carry `d = 0`, so every value has a
//! single canonical representation and derived equality is field equality.
//! Combining elements of two different fields is a programming error and
//! panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    a: BigRational,
    b: BigRational,
    d: i64,
}

impl QuadNum {
    /// Builds `a + b√d`. `d` must be squarefree (or 0/1 when `b = 0`).
    pub fn new(a: BigRational, b: BigRational, d: i64) -> QuadNum {
        if b.is_zero() || d == 0 {
            assert!(b.is_zero(), "nonzero radical part requires a radicand");
            return QuadNum { a, b, d: 0 };
        }
        assert!(d >= 2 && squarefree_part(d as u64).0 == 1, "radicand {d} is not squarefree");
        QuadNum { a, b, d }
    }

    pub fn rational(q: BigRational) -> QuadNum {
        QuadNum { a: q, b: BigRational::zero(), d: 0 }
    }

    pub fn from_int(n: i64) -> QuadNum {
        QuadNum::rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, m: i64) -> QuadNum {
        QuadNum::rational(BigRational::new(n.into(), m.into()))
    }

    /// Positive square root of a positive rational, exact.
    pub fn sqrt_of(q: &BigRational) -> Result<QuadNum, Error> {
        if !q.is_positive() {
            return Err(Error::InvalidInput(format!("square root of non-positive {q}")));
        }
        // √(p/s) = √(p·s)/s and p·s = k²·d with d squarefree.
        let p = q.numer().to_u64().ok_or_else(|| Error::InvalidInput(format!("{q} too large")))?;
        let s = q.denom().to_u64().ok_or_else(|| Error::InvalidInput(format!("{q} too large")))?;
        let prod = (p as u128) * (s as u128);
        let prod = u64::try_from(prod).map_err(|_| Error::InvalidInput(format!("{q} too large")))?;
        let (k, d) = squarefree_part(prod);
        let coeff = BigRational::new(BigInt::from(k), BigInt::from(s));
        if d == 1 {
            Ok(QuadNum::rational(coeff))
        } else {
            Ok(QuadNum::new(BigRational::zero(), coeff, d as i64))
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    /// Radicand of this element; 0 when the element is rational.
    pub fn radicand(&self) -> i64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.a.clone())
    }

    fn join(&self, other: &QuadNum) -> i64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (x, y) if x == y => x,
            (x, y) => panic!("mixing Q(√{x}) and Q(√{y})"),
        }
    }

    /// Galois conjugate `a − b√d`.
    pub fn galois(&self) -> QuadNum {
        QuadNum { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.into())
    }

    /// Exact sign: −1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with d·b²
        let a2 = &self.a * &self.a;
        let db2 = &self.b * &self.b * BigRational::from_integer(self.d.into());
        match a2.cmp(&db2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        a + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    pub fn pow(&self, k: u32) -> QuadNum {
        let mut acc = QuadNum::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

fn sign_of(q: &BigRational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Splits `n = k²·d` with `d` squarefree; returns `(k, d)`.
pub(crate) fn squarefree_part(mut n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 0);
    }
    let mut k = 1u64;
    let mut d = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
        p += 1;
    }
    (k, d * n)
}

/// Canonical `p/q` (or `p`) string of a rational.
pub fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q`, `p` or a finite decimal like `0.25` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let p = BigInt::from_str(&digits).map_err(|_| bad())?;
        let q = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(p, q));
    }
    Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?))
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", rational_string(&self.a));
        }
        let radical = if self.b.is_one() {
            format!("√{}", self.d)
        } else if (-self.b.clone()).is_one() {
            format!("-√{}", self.d)
        } else {
            format!("{}·√{}", rational_string(&self.b), self.d)
        };
        if self.a.is_zero() {
            write!(f, "{radical}")
        } else if self.b.is_positive() {
            write!(f, "{} + {}", rational_string(&self.a), radical)
        } else {
            write!(f, "{} - {}", rational_string(&self.a), radical.trim_start_matches('-'))
        }
    }
}

impl Zero for QuadNum {
    fn zero() -> Self {
        QuadNum::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadNum {
    fn one() -> Self {
        QuadNum::rational(BigRational::one())
    }
}

impl<'a> Add<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn add(self, rhs: &QuadNum) -> QuadNum {
        let d = self.join(rhs);
        QuadNum::new(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl<'a> Sub<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn sub(self, rhs: &QuadNum) -> QuadNum {
        let d = self.join(rhs);
        QuadNum::new(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl<'a> Mul<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn mul(self, rhs: &QuadNum) -> QuadNum {
        let d = self.join(rhs);
        let dq = BigRational::from_integer(d.into());
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dq;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadNum::new(a, b, d)
    }
}

impl<'a> Div<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn div(self, rhs: &QuadNum) -> QuadNum {
        let n = rhs.norm();
        assert!(!n.is_zero(), "division by zero in Q(√d)");
        let inv = QuadNum::new(&rhs.a / &n, -(&rhs.b / &n), rhs.d);
        self * &inv
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: QuadNum) -> QuadNum { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: &QuadNum) -> QuadNum { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);
