use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{floor_div, ipow, iroot, Exp, QuadraticSurd, Rat};

/// `base^exponent` with a positive rational base and rational exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalExponentPower {
    pub base: Rat,
    pub exponent: Exp,
}

impl RationalExponentPower {
    pub fn new(base: Rat, exponent: Exp) -> Self {
        assert!(base.is_positive(), "power base must be positive");
        Self { base, exponent }
    }

    pub fn to_product(&self) -> PowerProduct {
        PowerProduct::single(self.base.clone(), self.exponent)
    }
}

/// Exact ordering of two rational-exponent powers.
pub fn cmp_power(x: &RationalExponentPower, y: &RationalExponentPower) -> Ordering {
    x.to_product().cmp_exact(&y.to_product())
}

/// A finite product `∏ b_k^{e_k}` of positive rationals raised to rational
/// exponents. Every comparison is decided by raising to the lcm of the
/// exponent denominators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerProduct {
    factors: Vec<(Rat, Exp)>,
}

impl PowerProduct {
    pub fn one() -> Self {
        Self { factors: Vec::new() }
    }

    pub fn single(base: Rat, exponent: Exp) -> Self {
        assert!(base.is_positive(), "power base must be positive");
        let mut p = Self::one();
        p.push(base, exponent);
        p
    }

    pub fn rational(r: Rat) -> Self {
        Self::single(r, Exp::one())
    }

    pub fn integer(v: i64) -> Self {
        Self::rational(Rat::from_integer(BigInt::from(v)))
    }

    pub fn factors(&self) -> &[(Rat, Exp)] {
        &self.factors
    }

    fn push(&mut self, base: Rat, exponent: Exp) {
        if exponent.is_zero() || base.is_one() {
            return;
        }
        if let Some(f) = self.factors.iter_mut().find(|f| f.0 == base) {
            f.1 += exponent;
        } else {
            self.factors.push((base, exponent));
        }
        self.factors.retain(|f| !f.1.is_zero());
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, e) in &other.factors {
            out.push(b.clone(), *e);
        }
        out
    }

    pub fn mul_rat(&self, r: &Rat) -> Self {
        self.mul(&Self::rational(r.clone()))
    }

    pub fn pow(&self, e: Exp) -> Self {
        let mut out = Self::one();
        for (b, x) in &self.factors {
            out.push(b.clone(), *x * e);
        }
        out
    }

    pub fn recip(&self) -> Self {
        self.pow(Exp::from_integer(-1))
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    /// Common denominator of all exponents.
    pub fn root_degree(&self) -> i64 {
        self.factors.iter().fold(1i64, |acc, f| acc.lcm(f.1.denom()))
    }

    /// `self^deg` as an exact rational, `deg` a multiple of every exponent
    /// denominator.
    pub fn raised(&self, deg: i64) -> Rat {
        let (num, den) = self.raised_parts(deg);
        Rat::new(num, den)
    }

    /// Unreduced numerator and denominator of [`Self::raised`].
    fn raised_parts(&self, deg: i64) -> (BigInt, BigInt) {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (b, e) in &self.factors {
            let k = *e * Exp::from_integer(deg);
            assert!(k.is_integer(), "degree does not clear exponent denominators");
            let k = k.to_integer();
            let (n, d) = if k >= 0 {
                (b.numer(), b.denom())
            } else {
                (b.denom(), b.numer())
            };
            let k = k.unsigned_abs();
            num *= ipow(n, k);
            den *= ipow(d, k);
        }
        (num, den)
    }

    pub fn is_rational(&self) -> bool {
        self.root_degree() == 1
    }

    pub fn to_rational(&self) -> Option<Rat> {
        if self.is_rational() {
            return Some(self.raised(1));
        }
        let d = self.root_degree();
        let v = self.raised(d);
        let (n, m) = (v.numer(), v.denom());
        let u = d.to_u32()?;
        let rn = iroot(n, u);
        let rm = iroot(m, u);
        (ipow(&rn, d as u64) == *n && ipow(&rm, d as u64) == *m).then(|| Rat::new(rn, rm))
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        let q = self.div(other);
        if let Some(o) = q.log2_sign() {
            return o;
        }
        let (n, d) = q.raised_parts(q.root_degree());
        n.cmp(&d)
    }

    /// Sign of `log₂ self` when the float estimate is far from zero.
    fn log2_sign(&self) -> Option<Ordering> {
        let terms: Vec<f64> = self.factors.iter().map(|(b, e)| factor_log2(b, e)).collect();
        let l: f64 = terms.iter().sum();
        let margin = 1e-9 * (1.0 + terms.iter().map(|t| t.abs()).sum::<f64>());
        (l.abs() > margin).then(|| l.partial_cmp(&0.0).expect("finite"))
    }

    pub fn cmp_rational(&self, r: &Rat) -> Ordering {
        if !r.is_positive() {
            return Ordering::Greater;
        }
        self.cmp_exact(&Self::rational(r.clone()))
    }

    /// Ordering of `s · self` against `other` for a real `s ≥ 0`.
    pub fn cmp_scaled(&self, s: &QuadraticSurd, other: &Self) -> Ordering {
        match s.signum() {
            Ordering::Less => panic!("cmp_scaled requires s >= 0"),
            Ordering::Equal => return Ordering::Less,
            Ordering::Greater => {}
        }
        let q = other.div(self);
        let deg = q.root_degree();
        let rhs = q.raised(deg);
        s.pow(deg as u32).cmp_rational(&rhs)
    }

    /// `floor(self · 2^bits)`.
    pub fn floor_scaled(&self, bits: u32) -> BigInt {
        let deg = self.root_degree();
        let v = self.raised(deg);
        let scaled = floor_div(&(v.numer() << (bits as usize * deg as usize)), v.denom());
        iroot(&scaled, deg as u32)
    }

    pub fn floor(&self) -> BigInt {
        self.floor_scaled(0)
    }

    pub fn ceil(&self) -> BigInt {
        let f = self.floor();
        if self.cmp_rational(&Rat::from_integer(f.clone())) == Ordering::Equal {
            f
        } else {
            f + 1
        }
    }

    /// Rational `lo ≤ self ≤ lo + 2^-bits`.
    pub fn lower_bound(&self, bits: u32) -> Rat {
        Rat::new(self.floor_scaled(bits), BigInt::one() << bits as usize)
    }

    pub fn upper_bound(&self, bits: u32) -> Rat {
        Rat::new(self.floor_scaled(bits) + 1, BigInt::one() << bits as usize)
    }

    /// Display-only approximation.
    pub fn to_f64(&self) -> f64 {
        (self.log2() * std::f64::consts::LN_2).exp()
    }

    /// Approximate `log₂`, finite even when the value under- or overflows `f64`.
    pub fn log2(&self) -> f64 {
        self.factors.iter().map(|(b, e)| factor_log2(b, e)).sum()
    }
}

fn factor_log2(b: &Rat, e: &Exp) -> f64 {
    (big_log2(b.numer()) - big_log2(b.denom())) * (*e.numer() as f64) / (*e.denom() as f64)
}

fn big_log2(v: &BigInt) -> f64 {
    let bits = v.bits();
    let shift = bits.saturating_sub(60);
    (v >> shift as usize).to_f64().expect("60-bit value").log2() + shift as f64
}

impl std::fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|(b, e)| format!("({})^({})", b, e)).collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn p(b: i64, n: i64, d: i64) -> RationalExponentPower {
        RationalExponentPower::new(rat(b, 1), Exp::new(n, d))
    }

    #[test]
    fn cmp_power_examples() {
        assert_eq!(cmp_power(&p(2, 3, 2), &p(3, 1, 1)), Ordering::Less);
        assert_eq!(cmp_power(&p(5, 1, 2), &p(5, 1, 2)), Ordering::Equal);
        assert_eq!(cmp_power(&p(7, 2, 3), &p(4, 1, 1)), Ordering::Less);
        assert_eq!(cmp_power(&p(4, 1, 2), &p(8, 1, 3)), Ordering::Equal);
    }

    #[test]
    fn floors() {
        let r = PowerProduct::single(rat(16, 1), Exp::new(15, 16));
        assert_eq!(r.floor(), BigInt::from(13));
        assert_eq!(r.ceil(), BigInt::from(14));
        assert_eq!(
            PowerProduct::single(rat(9, 4), Exp::new(1, 2)).to_rational(),
            Some(rat(3, 2))
        );
        assert_eq!(PowerProduct::integer(7).ceil(), BigInt::from(7));
    }

    #[test]
    fn scaled_cmp() {
        let s = QuadraticSurd::sqrt(2.into()).unwrap();
        let half = PowerProduct::rational(rat(1, 2));
        // √2 · 2^{1/2} = 2
        let r2 = PowerProduct::single(rat(2, 1), Exp::new(1, 2));
        assert_eq!(r2.cmp_scaled(&s, &PowerProduct::integer(2)), Ordering::Equal);
        assert_eq!(half.cmp_scaled(&s, &PowerProduct::integer(1)), Ordering::Less);
    }
}
