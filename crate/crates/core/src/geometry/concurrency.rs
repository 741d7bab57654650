use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::point::{intersect, Intersection, RationalPoint};
use crate::construction::Interval;
use crate::exact::{ceil_div, ipow, iroot, rat_to_f64, QuadraticSurd};
use crate::lines::{classify, Line, Pair};

fn max_below_root(bound: &BigInt, e: u32) -> i64 {
    let x = iroot(bound, e);
    let x = if ipow(&x, e as u64) == *bound { x - 1 } else { x };
    x.to_i64().expect("root fits in i64")
}

/// Every normalized line with `R^{n−1} ≤ H < R^n` whose trace `(Aθ + C)/B`
/// lies in the closed window, ordered by `(B, A, C)`.
///
/// Candidate `C` are located in `f64` with a generous margin and every
/// survivor is confirmed exactly, so the result is exact.
pub fn lines_through(pair: &Pair, r: u64, n: u32, window: &Interval, theta: &QuadraticSurd) -> Vec<Line> {
    if n == 0 || !pair.is_weighted() {
        return Vec::new();
    }
    let (p, q) = pair.pq();
    let rb = BigInt::from(r);
    let b_max = max_below_root(&ipow(&rb, n as u64 * (q - p) as u64), (2 * q - p) as u32);
    let r_top = ipow(&rb, n as u64 * p as u64);
    let (lo_f, hi_f, th_f) = (rat_to_f64(&window.lo), rat_to_f64(&window.hi), theta.to_f64());
    (1..=b_max)
        .into_par_iter()
        .flat_map_iter(|b| {
            let bound = ceil_div(&r_top, &ipow(&BigInt::from(b), p as u64));
            let a_max = max_below_root(&bound, q as u32);
            assert!(a_max < 1 << 40 && b < 1 << 40, "window enumeration beyond f64 guard");
            let mut out = Vec::new();
            for a in -a_max..=a_max {
                let at = a as f64 * th_f;
                let eps = 1e-9 * (1.0 + (a.abs() + b) as f64);
                let c0 = (b as f64 * lo_f - at - eps).ceil() as i64;
                let c1 = (b as f64 * hi_f - at + eps).floor() as i64;
                if c0 > c1 {
                    continue;
                }
                let h = Line { a, b, c: 0 }.height(pair);
                if h.cmp_int_pow(&rb, n as u64 - 1) == Ordering::Less || h.cmp_int_pow(&rb, n as u64) != Ordering::Less
                {
                    continue;
                }
                for c in c0..=c1 {
                    if a.gcd(&b).gcd(&c) != 1 {
                        continue;
                    }
                    let l = Line { a, b, c };
                    let y = l.trace(theta);
                    if y.cmp_rational(&window.lo) != Ordering::Less && y.cmp_rational(&window.hi) != Ordering::Greater {
                        out.push(l);
                    }
                }
            }
            out
        })
        .collect()
}

/// Lines of `C(n, l)` through the window.
pub fn family_lines(pair: &Pair, r: u64, n: u32, l: u32, window: &Interval, theta: &QuadraticSurd) -> Vec<Line> {
    lines_through(pair, r, n, window, theta)
        .into_iter()
        .filter(|x| classify(x, pair, r, n).is_some_and(|f| f.l == l))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Concurrency {
    Empty,
    Single(Line),
    Point(RationalPoint),
    Parallel(Line, Line),
    /// Three lines, the third missing the intersection of the first two.
    Triple(Line, Line, Line),
}

impl Concurrency {
    pub fn is_violation(&self) -> bool {
        matches!(self, Concurrency::Parallel(..) | Concurrency::Triple(..))
    }
}

/// Whether all lines pass through one point.
pub fn concurrency_of(lines: &[Line]) -> Concurrency {
    match lines {
        [] => Concurrency::Empty,
        [l] => Concurrency::Single(*l),
        [first, rest @ ..] => {
            let second = rest[0];
            let pt = match intersect(first, &second) {
                Ok(Intersection::Point { point, .. }) => point,
                Ok(Intersection::Parallel) => return Concurrency::Parallel(*first, second),
                Err(_) => unreachable!("distinct normalized lines"),
            };
            for l in &rest[1..] {
                if !pt.on_line(l) {
                    if matches!(intersect(first, l), Ok(Intersection::Parallel)) {
                        return Concurrency::Parallel(*first, *l);
                    }
                    return Concurrency::Triple(*first, second, *l);
                }
            }
            Concurrency::Point(pt)
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConcurrencyReport {
    pub n: u32,
    pub l: u32,
    pub window: Interval,
    pub lines: Vec<Line>,
    pub verdict: Concurrency,
}

/// Every `C(n, l)` line meeting `J` passes through a single rational point.
pub fn concurrency_check(
    pair: &Pair,
    r: u64,
    n: u32,
    l: u32,
    window: &Interval,
    theta: &QuadraticSurd,
) -> ConcurrencyReport {
    let lines = family_lines(pair, r, n, l, window, theta);
    let verdict = concurrency_of(&lines);
    ConcurrencyReport {
        n,
        l,
        window: window.clone(),
        lines,
        verdict,
    }
}
