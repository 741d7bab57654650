use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::point::{intersect, Intersection, RationalPoint};
use crate::construction::Interval;
use crate::error::{Error, Result};
use crate::exact::{pow2, Exp, PowerProduct, QuadraticSurd, Rat, ThetaSpec};
use crate::lines::{Line, Pair};

fn int_rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// `floor(q^e)` for `q ≥ 1`.
fn floor_pow(q: i64, e: Exp) -> i64 {
    PowerProduct::single(int_rat(q), e)
        .floor()
        .to_i64()
        .expect("power fits in i64")
}

/// A line through `P` with `|A| ≤ q^i` and `0 < B ≤ q^j`, given
/// `|qθ − p| < c(θ)·q^{−i}`.
///
/// Scans `B = 1, 2, …` and, for each `B`, `A = 0, 1, −1, 2, −2, …`.
pub fn pigeonhole_line(pt: &RationalPoint, theta: &ThetaSpec, pair: &Pair) -> Result<Line> {
    if !pair.is_weighted() {
        return Err(Error::InvalidPair("pigeonhole line needs a weighted pair".into()));
    }
    let (i, j) = (pair.i(), pair.j());
    if !pigeonhole_applies(pt, theta, pair) {
        return Err(Error::Precondition(format!("|qθ − p| ≥ c(θ)q^-i at {pt}")));
    }
    let (a_max, b_max) = (floor_pow(pt.q, i), floor_pow(pt.q, j));
    for b in 1..=b_max {
        for step in 0..=2 * a_max {
            let a = if step % 2 == 0 { -(step / 2) } else { step / 2 + 1 };
            let num = b as i128 * pt.r as i128 - a as i128 * pt.p as i128;
            if num % pt.q as i128 == 0 {
                let c = (num / pt.q as i128) as i64;
                return Line::normalize(a, b, c);
            }
        }
    }
    Err(Error::Falsification(format!("no pigeonhole line through {pt}")))
}

/// The three clauses of the pigeonhole lemma.
pub fn pigeonhole_clauses(l: &Line, pt: &RationalPoint, pair: &Pair) -> [bool; 3] {
    let q = int_rat(pt.q);
    let a_ok =
        l.a == 0 || PowerProduct::single(q.clone(), pair.i()).cmp_rational(&int_rat(l.a.abs())) != Ordering::Less;
    let b_ok = l.b > 0 && PowerProduct::single(q, pair.j()).cmp_rational(&int_rat(l.b)) != Ordering::Less;
    [pt.on_line(l), a_ok, b_ok]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lemma2 {
    Holds(RationalPoint),
    Violated(RationalPoint),
    /// A precondition fails; the lemma says nothing.
    Rejected(&'static str),
}

/// `|qθ − p| < 2^i·τ·2^{k+1}·R^{−1}·q^{−i}` at `P = L₁ ∩ L₂`, for two lines
/// meeting a window of length at most `τR^{−n}` with heights below
/// `2^{k+1}R^{n−1}`.
#[allow(clippy::too_many_arguments)]
pub fn lemma2_check(
    l1: &Line,
    l2: &Line,
    window: &Interval,
    pair: &Pair,
    r: u64,
    n: u32,
    k: u32,
    tau: &Rat,
    theta: &QuadraticSurd,
) -> Lemma2 {
    let rb = BigInt::from(r);
    if n == 0 || window.length() > tau / Rat::from_integer(crate::exact::ipow(&rb, n as u64)) {
        return Lemma2::Rejected("window longer than τR^-n");
    }
    for l in [l1, l2] {
        let y = l.trace(theta);
        if y.cmp_rational(&window.lo) == Ordering::Less || y.cmp_rational(&window.hi) == Ordering::Greater {
            return Lemma2::Rejected("line misses the window");
        }
        if l.height(pair).cmp_dyadic_pow(k as u64 + 1, &rb, n as u64 - 1) == Ordering::Greater {
            return Lemma2::Rejected("height above 2^(k+1) R^(n-1)");
        }
    }
    let pt = match intersect(l1, l2) {
        Ok(Intersection::Point { point, .. }) => point,
        Ok(Intersection::Parallel) => return Lemma2::Rejected("parallel lines"),
        Err(_) => return Lemma2::Rejected("identical lines"),
    };
    if lemma2_inequality(&pt, pair, r, k, tau, theta) {
        Lemma2::Holds(pt)
    } else {
        Lemma2::Violated(pt)
    }
}

/// The inequality itself, decided exactly.
pub fn lemma2_inequality(pt: &RationalPoint, pair: &Pair, r: u64, k: u32, tau: &Rat, theta: &QuadraticSurd) -> bool {
    let i = pair.i();
    // |qθ − p| · q^i · R · 2^-i < τ · 2^{k+1}
    let lhs = PowerProduct::single(int_rat(pt.q), i)
        .mul(&PowerProduct::single(int_rat(2), -i))
        .mul_rat(&int_rat(r as i64));
    let rhs = PowerProduct::rational(tau * pow2(k as i64 + 1));
    lhs.cmp_scaled(&pt.defect(theta), &rhs) == Ordering::Less
}

/// `|qθ − p| < c(θ)·q^{−i}`. The certified `Bad(1)` constant serves for
/// `Bad(i)` because `q^{−1/i} ≤ q^{−1}`.
pub fn pigeonhole_applies(pt: &RationalPoint, theta: &ThetaSpec, pair: &Pair) -> bool {
    let qi = PowerProduct::single(int_rat(pt.q), pair.i());
    let s = pt.defect(&theta.value);
    qi.cmp_scaled(&s, &PowerProduct::rational(theta.c_theta().clone())) == Ordering::Less
}
