//! Independent oracles for integration tests. Nothing here calls the
//! library's surd, power or line code: θ = √2 − 1 and every height are
//! bracketed by integer roots and refined until a comparison is decided.

#![allow(dead_code)]

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn qi(v: &BigInt) -> Q {
    Q::from_integer(v.clone())
}

/// `[lo, hi]` with `lo ≤ v^{1/r} ≤ hi`, width at most `2^-bits`.
fn root_bounds(v: &BigInt, r: u32, bits: u32) -> (Q, Q) {
    let scale = BigInt::one() << (bits as usize * r as usize);
    let f = (v * scale).nth_root(r);
    let den = BigInt::one() << bits as usize;
    let exact = f.pow(r) == v * (BigInt::one() << (bits as usize * r as usize));
    let hi = if exact { f.clone() } else { &f + 1 };
    (Q::new(f, den.clone()), Q::new(hi, den))
}

/// Rational bracket for a real value at a given precision.
type Bracket = Box<dyn Fn(u32) -> (Q, Q)>;

/// Sign of a real given by brackets that shrink to it, or `None` (zero or
/// not separated at 4096 bits).
fn sign_of(f: &dyn Fn(u32) -> (Q, Q)) -> Option<Ordering> {
    let mut bits = 64;
    while bits <= 4096 {
        let (lo, hi) = f(bits);
        if lo.is_positive() {
            return Some(Ordering::Greater);
        }
        if hi.is_negative() {
            return Some(Ordering::Less);
        }
        bits *= 2;
    }
    None
}

/// Weight pair `i = p/qd`, `j = (qd − p)/qd`.
#[derive(Clone, Copy, Debug)]
pub struct Weights {
    pub p: u32,
    pub qd: u32,
}

impl Weights {
    pub fn half() -> Self {
        Weights { p: 1, qd: 2 }
    }

    pub fn new(p: u32, qd: u32) -> Self {
        Weights { p, qd }
    }

    /// `H^{N} = B^{N}·max{|A|^{N/i}, B^{N/j}}` as an integer, with
    /// `N = p(qd − p)`.
    pub fn height_pow(&self, a: i64, b: i64) -> (BigInt, u32) {
        let (p, qd) = (self.p, self.qd);
        let jn = qd - p;
        let n = p * jn;
        let (aa, bb) = (BigInt::from(a.unsigned_abs()), BigInt::from(b.unsigned_abs()));
        // |A|^{N/i} = |A|^{qd·jn}, B^{N/j} = B^{qd·p}
        let at = aa.pow(qd * jn);
        let bt = bb.pow(qd * p);
        (bb.pow(n) * at.max(bt), n)
    }

    /// `H(A, B) < bound`.
    pub fn height_below(&self, a: i64, b: i64, bound: &BigInt) -> bool {
        let (h, n) = self.height_pow(a, b);
        h < bound.pow(n)
    }

    /// Bracket of `1/H`.
    pub fn inv_height(&self, a: i64, b: i64, bits: u32) -> (Q, Q) {
        let (h, n) = self.height_pow(a, b);
        let (lo, hi) = root_bounds(&h, n, bits + 8);
        (hi.recip(), lo.recip())
    }
}

/// `θ = √2 − 1`.
pub fn theta_bounds(bits: u32) -> (Q, Q) {
    let (lo, hi) = root_bounds(&BigInt::from(2), 2, bits);
    (lo - Q::one(), hi - Q::one())
}

pub fn theta_f64() -> f64 {
    2f64.sqrt() - 1.0
}

/// Line `Ax − By + C = 0` meets `Θ` at `t = (Aθ + C)/B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OLine {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

fn trace_bounds(l: &OLine, bits: u32) -> (Q, Q) {
    let (tl, th) = theta_bounds(bits + 16);
    let (a, b, c) = (q(l.a, 1), q(l.b, 1), q(l.c, 1));
    let (x, y) = if l.a >= 0 { (tl, th) } else { (th, tl) };
    ((&a * x + &c) / &b, (&a * y + &c) / &b)
}

/// Every normalized `(A, B, C)` with `B ≥ 1`, `gcd = 1`, `H < hmax` and
/// trace within `c` of `[lo, hi]`.
pub fn lines_below(w: Weights, hmax: &BigInt, lo: f64, hi: f64, c: f64) -> Vec<OLine> {
    let mut out = Vec::new();
    let th = theta_f64();
    let mut b: i64 = 1;
    loop {
        if !w.height_below(0, b, hmax) {
            break;
        }
        let mut a_max: i64 = 0;
        while w.height_below(a_max + 1, b, hmax) {
            a_max += 1;
        }
        for a in -a_max..=a_max {
            let bf = b as f64;
            let c_lo = (bf * (lo - c) - a as f64 * th).floor() as i64 - 2;
            let c_hi = (bf * (hi + c) - a as f64 * th).ceil() as i64 + 2;
            for cc in c_lo..=c_hi {
                if a.gcd(&b).gcd(&cc) == 1 {
                    out.push(OLine { a, b, c: cc });
                }
            }
        }
        b += 1;
    }
    out
}

/// Whether the closed `Δ(L) = [t − c/H, t + c/H]` meets the closed `[lo, hi]`.
pub fn delta_meets(w: Weights, l: &OLine, cst: &Q, lo: &Q, hi: &Q) -> bool {
    let l = *l;
    let cst = cst.clone();
    let (lo, hi) = (lo.clone(), hi.clone());
    // t − c/H ≤ hi
    let c2 = cst.clone();
    let hi2 = hi.clone();
    let left: Bracket = Box::new(move |bits| {
        let (tl, th) = trace_bounds(&l, bits);
        let (il, ih) = w.inv_height(l.a, l.b, bits);
        (&tl - &c2 * &ih - &hi2, &th - &c2 * &il - &hi2)
    });
    // t + c/H ≥ lo
    let right: Bracket = Box::new(move |bits| {
        let (tl, th) = trace_bounds(&l, bits);
        let (il, ih) = w.inv_height(l.a, l.b, bits);
        (&tl + &cst * &il - &lo, &th + &cst * &ih - &lo)
    });
    let up = sign_of(&*left).is_none_or(|s| s != Ordering::Greater);
    let down = sign_of(&*right).is_none_or(|s| s != Ordering::Less);
    up && down
}

/// Cells `[k·w, (k+1)·w]` of the sorted `cells` met by `Δ(L)`.
pub fn cells_hit(wts: Weights, l: &OLine, cst: &Q, width: &Q, cells: &[u64]) -> Vec<u64> {
    let wf = width.to_f64().unwrap();
    let t = (l.a as f64 * theta_f64() + l.c as f64) / l.b as f64;
    let (hpow, n) = wts.height_pow(l.a, l.b);
    let h = hpow.to_f64().unwrap_or(f64::INFINITY).powf(1.0 / n as f64);
    let r = cst.to_f64().unwrap() / h;
    let k_lo = ((t - r) / wf).floor() - 2.0;
    let k_hi = ((t + r) / wf).floor() + 2.0;
    if k_hi < 0.0 {
        return Vec::new();
    }
    let k_lo = k_lo.max(0.0) as u64;
    let k_hi = k_hi as u64;
    let start = cells.partition_point(|&k| k < k_lo);
    cells[start..]
        .iter()
        .take_while(|&&k| k <= k_hi)
        .filter(|&&k| {
            let kq = Q::from_integer(BigInt::from(k));
            let lo = &kq * width;
            let hi = (kq + Q::one()) * width;
            delta_meets(wts, l, cst, &lo, &hi)
        })
        .copied()
        .collect()
}

/// `‖x‖` for a rational.
pub fn dist_q(x: &Q) -> Q {
    let f = x.floor();
    let lo = x - &f;
    let hi = Q::one() - &lo;
    if lo <= hi {
        lo
    } else {
        hi
    }
}

/// `p/q` with `q ≥ 1`, `qmin ≤ q² < qmax_sq` and `Δ(p/q)` of half-width
/// `c/q²` meeting `[lo, hi]`.
pub fn rationals_between(qmin_sq: u64, qmax_sq: u64, lo: &Q, hi: &Q, c: &Q) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut qq: i64 = 1;
    while ((qq * qq) as u64) < qmax_sq {
        if ((qq * qq) as u64) >= qmin_sq {
            let h = c / q(qq * qq, 1);
            let p_lo = ((lo - &h) * q(qq, 1)).ceil().to_integer().to_i64().unwrap();
            let p_hi = ((hi + &h) * q(qq, 1)).floor().to_integer().to_i64().unwrap();
            for p in p_lo..=p_hi {
                if p.gcd(&qq) == 1 {
                    out.push((p, qq));
                }
            }
        }
        qq += 1;
    }
    out
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}
