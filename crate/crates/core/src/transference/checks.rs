use std::cmp::Ordering;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{Exp, PowerProduct, QuadraticSurd, Rat};
use crate::lines::{Height, Pair};

fn int_rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// `‖x‖`.
pub fn dist_to_int(x: &QuadraticSurd) -> QuadraticSurd {
    x.nearest_int_dist(&BigInt::from(1)).0
}

/// `max{|A|^{1/i}, |B|^{1/j}}` as an exact power, `None` at `(0, 0)`.
/// Degenerate pairs use `v^{1/0} := 0`.
pub fn max_term(a: i64, b: i64, pair: &Pair) -> Option<PowerProduct> {
    let term = |v: i64, w: Exp| (v != 0 && *w.numer() != 0).then(|| PowerProduct::single(int_rat(v.abs()), w.recip()));
    match (term(a, pair.i()), term(b, pair.j())) {
        (Some(x), Some(y)) => Some(if x.cmp_exact(&y) == Ordering::Less { y } else { x }),
        (x, y) => x.or(y),
    }
}

fn cmp_pow(s: &QuadraticSurd, p: &PowerProduct) -> Ordering {
    PowerProduct::one().cmp_scaled(s, p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimultaneousResult {
    Pass,
    /// Smallest failing `q₀`.
    Witness(u64),
}

/// `max{‖qx‖^{1/i}, ‖qy‖^{1/j}} > c/q` at one `q`, exactly.
pub fn simultaneous_ok(x: &QuadraticSurd, y: &QuadraticSurd, pair: &Pair, c: &Rat, q: u64) -> bool {
    let bound = c / int_rat(q as i64);
    let qb = BigInt::from(q);
    let side = |v: &QuadraticSurd, w: Exp| {
        if *w.numer() == 0 {
            return false;
        }
        let d = v.nearest_int_dist(&qb).0;
        // ‖qv‖^{1/w} > c/q ⟺ ‖qv‖ > (c/q)^w
        let t = PowerProduct::single(bound.clone(), w);
        let (df, tf) = (d.to_f64(), t.to_f64());
        if df - tf > 1e-9 * (1.0 + tf) {
            return true;
        }
        cmp_pow(&d, &t) == Ordering::Greater
    };
    side(x, pair.i()) || side(y, pair.j())
}

/// Scans `q = 1, …, Q` for `max{‖qx‖^{1/i}, ‖qy‖^{1/j}} ≤ c/q`.
pub fn check_simultaneous(
    x: &QuadraticSurd,
    y: &QuadraticSurd,
    pair: &Pair,
    c: &Rat,
    q_max: u64,
) -> SimultaneousResult {
    const CHUNK: u64 = 4096;
    let mut lo = 1;
    while lo <= q_max {
        let hi = (lo + CHUNK - 1).min(q_max);
        let hit = (lo..=hi)
            .into_par_iter()
            .find_first(|&q| !simultaneous_ok(x, y, pair, c, q));
        if let Some(q) = hit {
            return SimultaneousResult::Witness(q);
        }
        lo = hi + 1;
    }
    SimultaneousResult::Pass
}

/// Range of `(A, B)` scanned by [`check_dual`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualRange {
    /// `max{|A|^{1/i}, |B|^{1/j}} ≤ bound`.
    MaxTerm(u64),
    /// `H(A, B) < bound` for `B ≠ 0`, and `|A|^{1/i} < bound` for `B = 0`.
    Height(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualResult {
    Pass,
    /// Minimal failing `(A, B)` in the order `|A| + |B|`, then `B`, then `A`
    /// descending, with `B ≥ 0` and `A > 0` when `B = 0`.
    Witness(i64, i64),
}

/// `‖Ax − By‖`.
pub fn dual_defect(x: &QuadraticSurd, y: &QuadraticSurd, a: i64, b: i64) -> Result<QuadraticSurd> {
    Ok(dist_to_int(
        &x.mul_int(&BigInt::from(a)).checked_add(&y.mul_int(&BigInt::from(-b)))?,
    ))
}

/// `max{|A|^{1/i}, |B|^{1/j}}·‖Ax − By‖ > c`, exactly.
pub fn dual_ok(x: &QuadraticSurd, y: &QuadraticSurd, pair: &Pair, c: &Rat, a: i64, b: i64) -> Result<bool> {
    let Some(m) = max_term(a, b, pair) else { return Ok(true) };
    let s = dual_defect(x, y, a, b)?;
    Ok(m.cmp_scaled(&s, &PowerProduct::rational(c.clone())) == Ordering::Greater)
}

fn floor_root(bound: u64, w: Exp) -> i64 {
    use num_traits::ToPrimitive;
    if *w.numer() == 0 {
        return 0;
    }
    PowerProduct::single(int_rat(bound as i64), w)
        .floor()
        .to_i64()
        .expect("fits")
}

fn in_range(a: i64, b: i64, pair: &Pair, range: DualRange) -> bool {
    match range {
        DualRange::MaxTerm(h) => {
            max_term(a, b, pair).is_some_and(|m| m.cmp_rational(&int_rat(h as i64)) != Ordering::Greater)
        }
        DualRange::Height(h) if b == 0 => {
            max_term(a, 0, pair).is_some_and(|m| m.cmp_rational(&int_rat(h as i64)) == Ordering::Less)
        }
        DualRange::Height(h) => Height::of(a, b, pair).cmp_int_pow(&BigInt::from(h), 1) == Ordering::Less,
    }
}

/// Scans every `(A, B) ≠ (0, 0)` of `range` for
/// `max{|A|^{1/i}, |B|^{1/j}}·‖Ax − By‖ ≤ c`. Incompatible radicands in `x`
/// and `y` are an error.
pub fn check_dual(x: &QuadraticSurd, y: &QuadraticSurd, pair: &Pair, c: &Rat, range: DualRange) -> Result<DualResult> {
    if !x.compatible(y) {
        return Err(Error::Radicand(format!("{x}"), format!("{y}")));
    }
    let h = match range {
        DualRange::MaxTerm(h) | DualRange::Height(h) => h,
    };
    let (a_max, b_max) = (floor_root(h, pair.i()), floor_root(h, pair.j()));
    let key = |&(a, b): &(i64, i64)| (a.abs() + b, b, -a);
    let found = (0..=b_max)
        .into_par_iter()
        .filter_map(|b| {
            // 0, 1, −1, 2, −2, … (only A > 0 when B = 0)
            let order = (0..=2 * a_max).map(|t| if t % 2 == 1 { t / 2 + 1 } else { -(t / 2) });
            order
                .filter(|&a| (b > 0 || a > 0) && in_range(a, b, pair, range))
                .find(|&a| !dual_ok(x, y, pair, c, a, b).expect("compatible radicands"))
                .map(|a| (a, b))
        })
        .min_by_key(key);
    Ok(match found {
        Some((a, b)) => DualResult::Witness(a, b),
        None => DualResult::Pass,
    })
}
