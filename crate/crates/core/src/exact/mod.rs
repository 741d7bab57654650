//! Exact arithmetic: big rationals, quadratic surds, rational-exponent
//! power products and the certified badness constant of a quadratic θ.

mod badness;
mod parse;
mod power;
mod surd;

pub use badness::{badness_lower_bound, BadnessCertificate, ThetaSpec};
pub use parse::{parse_rational, parse_real};
pub use power::{cmp_power, PowerProduct, RationalExponentPower};
pub use surd::{ContinuedFraction, QuadraticSurd};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive};

pub type Rat = BigRational;
pub type Exp = Ratio<i64>;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(v: &BigInt) -> Rat {
    Rat::from_integer(v.clone())
}

pub fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

pub fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

pub fn rat_floor(r: &Rat) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn rat_ceil(r: &Rat) -> BigInt {
    ceil_div(r.numer(), r.denom())
}

/// `b^e` for a big base and small exponent.
pub fn ipow(b: &BigInt, e: u64) -> BigInt {
    num_traits::pow(b.clone(), e as usize)
}

pub fn rpow(r: &Rat, e: i64) -> Rat {
    if e >= 0 {
        Rat::new(ipow(r.numer(), e as u64), ipow(r.denom(), e as u64))
    } else {
        let p = rpow(r, -e);
        p.recip()
    }
}

/// Floor of the `n`-th root of a non-negative integer.
pub fn iroot(x: &BigInt, n: u32) -> BigInt {
    assert!(!x.is_negative(), "root of a negative integer");
    if n == 1 {
        x.clone()
    } else {
        x.nth_root(n)
    }
}

pub fn is_perfect_square(x: &BigInt) -> bool {
    if x.is_negative() {
        return false;
    }
    let s = x.sqrt();
    &s * &s == *x
}

/// ‖x‖ for a rational, with the nearest integer.
pub fn nearest_int_dist_rat(x: &Rat, q: &BigInt) -> (Rat, BigInt) {
    let y = x * rat_int(q);
    let f = rat_floor(&y);
    let lo = &y - rat_int(&f);
    let hi = Rat::one() - &lo;
    if lo <= hi {
        (lo, f)
    } else {
        (hi, f + 1)
    }
}

/// Largest power of two `2^e` with `2^e <= r`, for `r > 0`.
pub fn dyadic_floor(r: &Rat) -> (Rat, i64) {
    assert!(r.is_positive(), "dyadic_floor of a non-positive value");
    let mut e = r.numer().bits() as i64 - r.denom().bits() as i64;
    loop {
        let p = pow2(e);
        if p <= *r {
            if pow2(e + 1) <= *r {
                e += 1;
                continue;
            }
            return (p, e);
        }
        e -= 1;
    }
}

pub fn pow2(e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(BigInt::one() << e as usize)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Approximate decimal of a rational, for display only.
pub fn rat_to_f64(r: &Rat) -> f64 {
    let bits = 64usize;
    let scaled = (r.numer() << bits).div_floor(r.denom());
    scaled.to_f64().unwrap_or(f64::NAN) / 2f64.powi(bits as i32)
}

pub fn lcm_i64(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}
