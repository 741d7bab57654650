use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::Pair;
use crate::error::{Error, Result};
use crate::exact::{ipow, iroot, Exp, PowerProduct, QuadraticSurd, Rat};

/// Normalized line `Ax − By + C = 0` with `gcd(A, B, C) = 1` and `B > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Line {
    pub fn normalize(a: i64, b: i64, c: i64) -> Result<Self> {
        if b == 0 {
            return Err(if a == 0 { Error::ZeroLine } else { Error::VerticalLine });
        }
        let s = if b < 0 { -1 } else { 1 };
        let g = a.gcd(&b).gcd(&c);
        Ok(Line {
            a: s * a / g,
            b: s * b / g,
            c: s * c / g,
        })
    }

    /// Canonical `(B, A, C)` sort key.
    pub fn key(&self) -> (i64, i64, i64) {
        (self.b, self.a, self.c)
    }

    pub fn height(&self, pair: &Pair) -> Height {
        Height::of(self.a, self.b, pair)
    }

    /// Ordinate `(Aθ + C)/B` where the line meets `x = θ`.
    pub fn trace(&self, theta: &QuadraticSurd) -> QuadraticSurd {
        theta
            .mul_int(&BigInt::from(self.a))
            .add_rat(&Rat::from_integer(BigInt::from(self.c)))
            .mul_rat(&Rat::new(BigInt::one(), BigInt::from(self.b)))
    }

    pub fn removal(&self, pair: &Pair, c: &Rat, theta: &QuadraticSurd) -> RemovalInterval {
        RemovalInterval {
            center: self.trace(theta),
            c: c.clone(),
            height: self.height(pair),
            source: Source::Line(*self),
        }
    }
}

impl std::fmt::Display for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "L({},{},{})", self.a, self.b, self.c)
    }
}

/// A height `H = value^{1/root}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Height {
    pub value: BigInt,
    pub root: u32,
    /// Whether the `|A|^{1/i}` term attains the maximum.
    pub a_term: bool,
}

impl Height {
    /// `H(A, B) = |B|·max{|A|^{1/i}, |B|^{1/j}}` for a weighted pair.
    pub fn of(a: i64, b: i64, pair: &Pair) -> Self {
        let (p, q) = pair.pq();
        let aa = BigInt::from(a.unsigned_abs());
        let bb = BigInt::from(b.unsigned_abs());
        // |A|^{1/i} ≥ |B|^{1/j} ⟺ |A|^{q−p} ≥ |B|^p
        let a_term = ipow(&aa, (q - p) as u64) >= ipow(&bb, p as u64);
        let (value, root) = if a_term {
            (ipow(&bb, p as u64) * ipow(&aa, q as u64), p as u32)
        } else {
            (ipow(&bb, (2 * q - p) as u64), (q - p) as u32)
        };
        Self::reduced(value, root, a_term)
    }

    /// `H(p/q) = q²` for the rational family.
    pub fn rational(q: i64) -> Self {
        Height {
            value: BigInt::from(q) * BigInt::from(q),
            root: 1,
            a_term: false,
        }
    }

    fn reduced(value: BigInt, root: u32, a_term: bool) -> Self {
        if root > 1 {
            for r in (2..=root).rev() {
                if !root.is_multiple_of(r) {
                    continue;
                }
                let v = iroot(&value, r);
                if ipow(&v, r as u64) == value {
                    return Height {
                        value: v,
                        root: root / r,
                        a_term,
                    };
                }
            }
        }
        Height { value, root, a_term }
    }

    pub fn to_power(&self) -> PowerProduct {
        PowerProduct::single(Rat::from_integer(self.value.clone()), Exp::new(1, self.root as i64))
    }

    /// Ordering of `H` against `base^e`, `base ≥ 1` an integer.
    pub fn cmp_int_pow(&self, base: &BigInt, e: u64) -> Ordering {
        self.value.cmp(&ipow(base, e * self.root as u64))
    }

    /// Ordering of `H` against `2^k · R^m`.
    pub fn cmp_dyadic_pow(&self, k: u64, r: &BigInt, m: u64) -> Ordering {
        let rhs = ipow(&(BigInt::one() << k as usize), self.root as u64) * ipow(r, m * self.root as u64);
        self.value.cmp(&rhs)
    }

    pub fn cmp_power(&self, other: &PowerProduct) -> Ordering {
        self.to_power().cmp_exact(other)
    }

    pub fn to_f64(&self) -> f64 {
        self.value
            .to_f64()
            .unwrap_or(f64::INFINITY)
            .powf(1.0 / self.root as f64)
    }

    /// `|s| ≤ c/H` for a real `s`, exactly.
    pub fn within(&self, s: &QuadraticSurd, c: &Rat) -> bool {
        let s = s.abs();
        if s.is_zero() {
            return true;
        }
        // |s|^root · value ≤ c^root
        let lhs = s.pow(self.root).mul_int(&self.value);
        let rhs = crate::exact::rpow(c, self.root as i64);
        lhs.cmp_rational(&rhs) != Ordering::Greater
    }

    /// Rational `h⁺ ≥ c/H` within `2^-bits` relative slack.
    pub fn halfwidth_upper(&self, c: &Rat, bits: u32) -> Rat {
        // c/H ≤ c / lower(H)
        let lower = self.to_power().lower_bound(bits);
        if lower.is_positive() {
            c / lower
        } else {
            c.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Line(Line),
    Rational { p: i64, q: i64 },
}

/// `Δ(L)`: the closed interval of half-width `c/H` around a centre on `Θ`.
#[derive(Clone, Debug)]
pub struct RemovalInterval {
    pub center: QuadraticSurd,
    pub c: Rat,
    pub height: Height,
    pub source: Source,
}

impl RemovalInterval {
    pub fn rational(p: i64, q: i64, c: &Rat) -> Self {
        RemovalInterval {
            center: QuadraticSurd::from_rational(&Rat::new(BigInt::from(p), BigInt::from(q))),
            c: c.clone(),
            height: Height::rational(q),
            source: Source::Rational { p, q },
        }
    }

    /// Removal length `2c/H` when it is rational.
    pub fn length(&self) -> Option<Rat> {
        let h = self.height.to_power().to_rational()?;
        Some(&self.c * Rat::from_integer(BigInt::from(2)) / h)
    }

    pub fn contains(&self, x: &QuadraticSurd) -> bool {
        self.height.within(&(x - &self.center), &self.c)
    }

    /// Closed intersection with `[lo, hi]`.
    pub fn meets(&self, lo: &Rat, hi: &Rat) -> bool {
        let y = &self.center;
        let up = y.cmp_rational(hi) != Ordering::Greater || self.height.within(&y.add_rat(&-hi), &self.c);
        let down = y.cmp_rational(lo) != Ordering::Less || self.height.within(&y.add_rat(&-lo), &self.c);
        up && down
    }

    /// Inclusive range of grid cells `[k·w, (k+1)·w]`, `0 ≤ k < cells`, met by
    /// the closed interval.
    pub fn touched_cells(&self, w: &Rat, cells: u64) -> Option<(u64, u64)> {
        let y = &self.center;
        let hp = self.height.halfwidth_upper(&self.c, 24);
        let winv = w.recip();
        let hi_guess = y.add_rat(&hp).mul_rat(&winv).floor();
        let lo_guess = y.add_rat(&-&hp).mul_rat(&winv).ceil() - 1;
        let clamp = |v: BigInt| -> i128 {
            v.max(BigInt::from(-1))
                .min(BigInt::from(cells))
                .to_i128()
                .expect("clamped")
        };
        let mut kmax = clamp(hi_guess).min(cells as i128 - 1);
        let mut kmin = clamp(lo_guess).max(0);
        let edge = |k: i128| Rat::from_integer(BigInt::from(k)) * w;
        // cell k meets Δ iff k·w − y ≤ h and y − (k+1)·w ≤ h
        while kmax >= kmin {
            let s = &QuadraticSurd::from_rational(&edge(kmax)) - y;
            if s.signum() != Ordering::Greater || self.height.within(&s, &self.c) {
                break;
            }
            kmax -= 1;
        }
        while kmin <= kmax {
            let s = y - &QuadraticSurd::from_rational(&edge(kmin + 1));
            if s.signum() != Ordering::Greater || self.height.within(&s, &self.c) {
                break;
            }
            kmin += 1;
        }
        (kmin <= kmax).then_some((kmin as u64, kmax as u64))
    }
}
