use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{floor_div, is_perfect_square, Rat};
use crate::error::{Error, Result};

/// The real number `(a + b·√d)/c`.
///
/// Canonical form: `c > 0`, `gcd(a, b, c) = 1`, `d` square-free when it fits
/// in 64 bits, and `b = 0 ⇔ d = 0` so that rationals have a unique encoding.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

fn squarefree_split(d: &BigInt) -> (BigInt, BigInt) {
    // d = s² · r with r square-free (only attempted for d < 2^64).
    let Some(mut r) = d.to_u64() else {
        return (BigInt::one(), d.clone());
    };
    let mut s: u64 = 1;
    let mut p: u64 = 2;
    while p.saturating_mul(p) <= r {
        let pp = p * p;
        while r % pp == 0 {
            r /= pp;
            s *= p;
        }
        p += if p == 2 { 1 } else { 2 };
        if p > 2_000_000 {
            break;
        }
    }
    (BigInt::from(s), BigInt::from(r))
}

impl QuadraticSurd {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        if d.is_negative() {
            return Err(Error::Parse("negative radicand".into()));
        }
        Ok(Self::canonical(a, b, c, d))
    }

    fn canonical(mut a: BigInt, mut b: BigInt, mut c: BigInt, mut d: BigInt) -> Self {
        if !b.is_zero() && !d.is_zero() {
            if is_perfect_square(&d) {
                a += &b * d.sqrt();
                b = BigInt::zero();
            } else {
                let (s, r) = squarefree_split(&d);
                b *= s;
                d = r;
            }
        }
        if b.is_zero() || d.is_zero() {
            b = BigInt::zero();
            d = BigInt::zero();
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() && !g.is_zero() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Self { a, b, c, d }
    }

    pub fn from_int(v: BigInt) -> Self {
        Self {
            a: v,
            b: BigInt::zero(),
            c: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    pub fn from_rational(r: &Rat) -> Self {
        Self {
            a: r.numer().clone(),
            b: BigInt::zero(),
            c: r.denom().clone(),
            d: BigInt::zero(),
        }
    }

    /// `√d` for a non-negative integer `d`.
    pub fn sqrt(d: BigInt) -> Result<Self> {
        Self::new(BigInt::zero(), BigInt::one(), BigInt::one(), d)
    }

    pub fn zero() -> Self {
        Self::from_int(BigInt::zero())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rat> {
        self.is_rational().then(|| Rat::new(self.a.clone(), self.c.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn compatible(&self, other: &Self) -> bool {
        self.d.is_zero() || other.d.is_zero() || self.d == other.d
    }

    fn radicand(&self, other: &Self) -> BigInt {
        assert!(
            self.compatible(other),
            "incompatible radicands {} and {}",
            self.d,
            other.d
        );
        if self.d.is_zero() {
            other.d.clone()
        } else {
            self.d.clone()
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if !self.compatible(other) {
            return Err(Error::Radicand(self.d.to_string(), other.d.to_string()));
        }
        Ok(self + other)
    }

    /// Sign of the value as an ordering against zero.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.sign();
        let sb = self.b.sign();
        use num_bigint::Sign::*;
        match (sa, sb) {
            (_, NoSign) => self.a.cmp(&BigInt::zero()),
            (NoSign, _) => self.b.cmp(&BigInt::zero()),
            (Plus, Plus) => Ordering::Greater,
            (Minus, Minus) => Ordering::Less,
            (Plus, Minus) => (&self.a * &self.a).cmp(&(&self.b * &self.b * &self.d)),
            (Minus, Plus) => (&self.b * &self.b * &self.d).cmp(&(&self.a * &self.a)),
        }
    }

    pub fn cmp_rational(&self, r: &Rat) -> Ordering {
        (self - &Self::from_rational(r)).signum()
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn conj(&self) -> Self {
        Self::canonical(self.a.clone(), -&self.b, self.c.clone(), self.d.clone())
    }

    pub fn add_rat(&self, r: &Rat) -> Self {
        self + &Self::from_rational(r)
    }

    pub fn mul_rat(&self, r: &Rat) -> Self {
        Self::canonical(
            &self.a * r.numer(),
            &self.b * r.numer(),
            &self.c * r.denom(),
            self.d.clone(),
        )
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::canonical(&self.a * k, &self.b * k, self.c.clone(), self.d.clone())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // c/(a + b√d) = c(a − b√d)/(a² − b²d)
        let n = &self.a * &self.a - &self.b * &self.b * &self.d;
        Some(Self::canonical(
            &self.c * &self.a,
            -(&self.c * &self.b),
            n,
            self.d.clone(),
        ))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::from_int(BigInt::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Floor of `b·√d` as an integer.
    fn floor_irr(&self) -> BigInt {
        if self.b.is_zero() {
            return BigInt::zero();
        }
        let s = (&self.b * &self.b * &self.d).sqrt();
        if self.b.is_positive() {
            s
        } else {
            -s - 1
        }
    }

    pub fn floor(&self) -> BigInt {
        floor_div(&(&self.a + self.floor_irr()), &self.c)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// `x - floor(x)`, in `[0, 1)`.
    pub fn frac(&self) -> Self {
        self - &Self::from_int(self.floor())
    }

    /// `floor(x · 2^bits)`.
    pub fn floor_scaled(&self, bits: u32) -> BigInt {
        self.mul_int(&(BigInt::one() << bits as usize)).floor()
    }

    /// `‖q·x‖` together with the nearest integer to `q·x`.
    pub fn nearest_int_dist(&self, q: &BigInt) -> (Self, BigInt) {
        let y = self.mul_int(q);
        let f = y.floor();
        let lo = &y - &Self::from_int(f.clone());
        let hi = &Self::from_int(f.clone() + 1) - &y;
        if lo <= hi {
            (lo, f)
        } else {
            (hi, f + 1)
        }
    }

    /// Display-only approximation.
    pub fn to_f64(&self) -> f64 {
        self.floor_scaled(64).to_f64().unwrap_or(f64::NAN) / 2f64.powi(64)
    }

    /// Rational enclosure `[lo, lo + 2^-bits]` of the value.
    pub fn enclose(&self, bits: u32) -> (Rat, Rat) {
        let f = self.floor_scaled(bits);
        let den = BigInt::one() << bits as usize;
        (Rat::new(f.clone(), den.clone()), Rat::new(f + 1, den))
    }

    /// Continued fraction expansion: finite for rationals, eventually
    /// periodic for quadratic irrationals.
    pub fn continued_fraction(&self) -> ContinuedFraction {
        if self.is_rational() {
            let mut out = Vec::new();
            let (mut n, mut d) = (self.a.clone(), self.c.clone());
            while !d.is_zero() {
                let q = floor_div(&n, &d);
                let r = &n - &q * &d;
                out.push(q);
                n = d;
                d = r;
            }
            return ContinuedFraction {
                preperiod: out,
                period: Vec::new(),
            };
        }
        // x = (P + √D)/Q with Q | D − P²
        let dd = &self.b * &self.b * &self.d;
        let (mut p, mut q) = if self.b.is_positive() {
            (self.a.clone(), self.c.clone())
        } else {
            (-&self.a, -&self.c)
        };
        if !(&dd - &p * &p).is_multiple_of(&q) {
            let aq = q.abs();
            p *= &aq;
            q *= &aq;
            let dd2 = &dd * &aq * &aq;
            return Self::cf_loop(p, q, dd2);
        }
        Self::cf_loop(p, q, dd)
    }

    fn cf_loop(mut p: BigInt, mut q: BigInt, dd: BigInt) -> ContinuedFraction {
        let s = dd.sqrt();
        let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
        let mut terms = Vec::new();
        loop {
            if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
                let period = terms.split_off(start);
                return ContinuedFraction {
                    preperiod: terms,
                    period,
                };
            }
            seen.insert((p.clone(), q.clone()), terms.len());
            let a = if q.is_positive() {
                floor_div(&(&p + &s), &q)
            } else {
                floor_div(&(-&p - &s - 1), &(-&q))
            };
            let p2 = &a * &q - &p;
            let q2 = (&dd - &p2 * &p2) / &q;
            terms.push(a);
            p = p2;
            q = q2;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub preperiod: Vec<BigInt>,
    pub period: Vec<BigInt>,
}

impl ContinuedFraction {
    /// Partial quotient `a_k` (k = 0 is the integer part); `None` past the end
    /// of a finite expansion.
    pub fn term(&self, k: usize) -> Option<&BigInt> {
        if k < self.preperiod.len() {
            Some(&self.preperiod[k])
        } else if self.period.is_empty() {
            None
        } else {
            Some(&self.period[(k - self.preperiod.len()) % self.period.len()])
        }
    }

    pub fn max_periodic_term(&self) -> Option<&BigInt> {
        self.period.iter().max()
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            }
        } else if self.c.is_one() {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
        } else {
            write!(f, "({}+{}*sqrt({}))/{}", self.a, self.b, self.d, self.c)
        }
    }
}

impl Add for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn add(self, o: &QuadraticSurd) -> QuadraticSurd {
        let d = self.radicand(o);
        QuadraticSurd::canonical(
            &self.a * &o.c + &o.a * &self.c,
            &self.b * &o.c + &o.b * &self.c,
            &self.c * &o.c,
            d,
        )
    }
}

impl Sub for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn sub(self, o: &QuadraticSurd) -> QuadraticSurd {
        self + &(-o)
    }
}

impl Mul for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn mul(self, o: &QuadraticSurd) -> QuadraticSurd {
        let d = self.radicand(o);
        QuadraticSurd::canonical(
            &self.a * &o.a + &self.b * &o.b * &d,
            &self.a * &o.b + &o.a * &self.b,
            &self.c * &o.c,
            d,
        )
    }
}

impl Neg for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        QuadraticSurd {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }
}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.compatible(other).then(|| (self - other).signum())
    }
}

impl From<&Rat> for QuadraticSurd {
    fn from(r: &Rat) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for QuadraticSurd {
    fn from(v: i64) -> Self {
        Self::from_int(BigInt::from(v))
    }
}
