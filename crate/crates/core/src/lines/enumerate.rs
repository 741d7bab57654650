use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use super::{Line, Pair, RemovalInterval, Source};
use crate::exact::{ceil_div, ipow, iroot, rat_ceil, rat_floor, Exp, PowerProduct, QuadraticSurd, Rat};

/// Membership of a line in `C(n, l, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilyIndex {
    pub n: u32,
    pub l: u32,
    pub k: u32,
}

/// `(n, l, k)` for `L ∈ C(n, l, k)`, or `None` when `H ∉ [R^{n−1}, R^n)`.
pub fn classify(line: &Line, pair: &Pair, r: u64, n: u32) -> Option<FamilyIndex> {
    if n == 0 || !pair.is_weighted() {
        return None;
    }
    let rb = BigInt::from(r);
    let h = line.height(pair);
    if h.cmp_int_pow(&rb, n as u64 - 1) == Ordering::Less || h.cmp_int_pow(&rb, n as u64) != Ordering::Less {
        return None;
    }
    let j = pair.j();
    let lambda = pair.lambda().expect("weighted pair");
    let top = Exp::from_integer(n as i64) * j / (j + Exp::one());
    let b = Rat::from_integer(BigInt::from(line.b));
    let rr = Rat::from_integer(rb.clone());
    let mut l = 0u32;
    loop {
        let lower = PowerProduct::single(rr.clone(), top - lambda * Exp::from_integer(l as i64 + 1));
        if lower.cmp_rational(&b) != Ordering::Greater {
            break;
        }
        l += 1;
    }
    let mut k = 0u32;
    while h.cmp_dyadic_pow(k as u64 + 1, &rb, n as u64 - 1) != Ordering::Less {
        k += 1;
    }
    Some(FamilyIndex { n, l, k })
}

/// Largest integer `x ≥ 0` with `x^e < bound` (`bound ≥ 1`).
fn max_below_root(bound: &BigInt, e: u32) -> BigInt {
    let x = iroot(bound, e);
    if ipow(&x, e as u64) == *bound {
        x - 1
    } else {
        x
    }
}

/// Every normalized line with `R^{n−1} ≤ H < R^n` whose `Δ(L)` meets the
/// closed window `[lo, hi]`, ordered by `(B, A, C)`.
pub fn enumerate_lines(pair: &Pair, r: u64, n: u32, lo: &Rat, hi: &Rat, c: &Rat, theta: &QuadraticSurd) -> Vec<Line> {
    enumerate_removals(pair, r, n, lo, hi, c, theta)
        .into_iter()
        .map(|d| match d.source {
            Source::Line(l) => l,
            Source::Rational { .. } => unreachable!("line enumeration yields lines"),
        })
        .collect()
}

/// `Δ(L)` for every `L ∈ C(n)` meeting `[lo, hi]`, ordered by `(B, A, C)`.
/// Parallel over `B`; the ordered collect keeps the output deterministic.
pub fn enumerate_removals(
    pair: &Pair,
    r: u64,
    n: u32,
    lo: &Rat,
    hi: &Rat,
    c: &Rat,
    theta: &QuadraticSurd,
) -> Vec<RemovalInterval> {
    if n == 0 || !pair.is_weighted() {
        return Vec::new();
    }
    let (p, q) = pair.pq();
    let rb = BigInt::from(r);
    // B^{2q−p} < R^{n(q−p)}
    let b_max = max_below_root(&ipow(&rb, n as u64 * (q - p) as u64), (2 * q - p) as u32)
        .to_i64()
        .expect("B range fits in i64");
    let r_top = ipow(&rb, n as u64 * p as u64);
    (1..=b_max)
        .into_par_iter()
        .flat_map_iter(|b| {
            let bb = BigInt::from(b);
            let br = Rat::from_integer(bb.clone());
            // B^p |A|^q < R^{np}
            let bound = ceil_div(&r_top, &ipow(&bb, p as u64));
            let a_max = max_below_root(&bound, q as u32).to_i64().expect("A range fits in i64");
            let mut out = Vec::new();
            for a in -a_max..=a_max {
                let h = Line { a, b, c: 0 }.height(pair);
                if h.cmp_int_pow(&rb, n as u64 - 1) == Ordering::Less || h.cmp_int_pow(&rb, n as u64) != Ordering::Less
                {
                    continue;
                }
                let hp = h.halfwidth_upper(c, 24);
                let minus_at = -&theta.mul_int(&BigInt::from(a));
                // C ∈ [B(lo − h) − Aθ, B(hi + h) − Aθ]
                let cmin = minus_at.add_rat(&((lo - &hp) * &br)).ceil();
                let cmax = minus_at.add_rat(&((hi + &hp) * &br)).floor();
                let cmin = cmin.to_i64().expect("C fits in i64");
                let cmax = cmax.to_i64().expect("C fits in i64");
                for cc in cmin..=cmax {
                    if a.gcd(&b).gcd(&cc) != 1 {
                        continue;
                    }
                    let line = Line { a, b, c: cc };
                    let d = RemovalInterval {
                        center: line.trace(theta),
                        c: c.clone(),
                        height: h.clone(),
                        source: Source::Line(line),
                    };
                    if d.meets(lo, hi) {
                        out.push(d);
                    }
                }
            }
            out
        })
        .collect()
}

/// Reduced `p/q` with `R^{n−1} ≤ q² < R^n` whose `Δ(p/q)` (half-width
/// `c/q²`) meets `[lo, hi]`.
pub fn enumerate_rationals(r: u64, n: u32, lo: &Rat, hi: &Rat, c: &Rat) -> Vec<(i64, i64)> {
    if n == 0 {
        return Vec::new();
    }
    let rb = BigInt::from(r);
    let q_lo = {
        let t = ipow(&rb, n as u64 - 1);
        let s = t.sqrt();
        if &s * &s == t {
            s
        } else {
            s + 1
        }
    };
    let q_hi = max_below_root(&ipow(&rb, n as u64), 2);
    let (q_lo, q_hi) = (q_lo.to_i64().unwrap().max(1), q_hi.to_i64().unwrap());
    let mut out = Vec::new();
    for q in q_lo..=q_hi {
        let qr = Rat::from_integer(BigInt::from(q));
        let h = c / (&qr * &qr);
        let pmin = rat_ceil(&((lo - &h) * &qr)).to_i64().unwrap();
        let pmax = rat_floor(&((hi + &h) * &qr)).to_i64().unwrap();
        for p in pmin..=pmax {
            if p.gcd(&q) == 1 {
                out.push((p, q));
            }
        }
    }
    out.sort_by(|x, y| (x.0 * y.1).cmp(&(y.0 * x.1)));
    out
}
