use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact::{QuadraticSurd, Rat};
use crate::lines::Line;

/// `P = (p/q, r/q)` with `q > 0` and `gcd(p, q, r) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    pub p: i64,
    pub r: i64,
    pub q: i64,
}

impl RationalPoint {
    pub fn new(p: i64, r: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Precondition("point denominator must be non-zero".into()));
        }
        let s = q.signum();
        let g = p.gcd(&r).gcd(&q);
        Ok(RationalPoint {
            p: s * p / g,
            r: s * r / g,
            q: s * q / g,
        })
    }

    pub fn x(&self) -> Rat {
        Rat::new(BigInt::from(self.p), BigInt::from(self.q))
    }

    pub fn y(&self) -> Rat {
        Rat::new(BigInt::from(self.r), BigInt::from(self.q))
    }

    /// `Ap − Br + Cq = 0`.
    pub fn on_line(&self, l: &Line) -> bool {
        l.a as i128 * self.p as i128 - l.b as i128 * self.r as i128 + l.c as i128 * self.q as i128 == 0
    }

    /// `|qθ − p|`.
    pub fn defect(&self, theta: &QuadraticSurd) -> QuadraticSurd {
        theta
            .mul_int(&BigInt::from(self.q))
            .add_rat(&Rat::from_integer(BigInt::from(-self.p)))
            .abs()
    }
}

impl std::fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}/{}, {}/{})", self.p, self.q, self.r, self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Intersection {
    Point {
        point: RationalPoint,
        /// `t·q = A₁B₂ − A₂B₁`, `t·p = B₁C₂ − B₂C₁`.
        t: i64,
    },
    Parallel,
}

/// Exact intersection of two normalized lines.
pub fn intersect(l1: &Line, l2: &Line) -> Result<Intersection> {
    let (a1, b1, c1) = (l1.a as i128, l1.b as i128, l1.c as i128);
    let (a2, b2, c2) = (l2.a as i128, l2.b as i128, l2.c as i128);
    let det = a1 * b2 - a2 * b1;
    if det == 0 {
        if l1 == l2 {
            return Err(Error::IdenticalLines);
        }
        return Ok(Intersection::Parallel);
    }
    let xn = b1 * c2 - b2 * c1;
    let yn = a1 * c2 - a2 * c1;
    let g = det.gcd(&xn).gcd(&yn);
    let q = det.abs() / g;
    let t = det / q;
    let to64 = |v: i128| i64::try_from(v).map_err(|_| Error::Precondition("intersection exceeds 64 bits".into()));
    Ok(Intersection::Point {
        point: RationalPoint {
            p: to64(xn / t)?,
            r: to64(yn / t)?,
            q: to64(q)?,
        },
        t: to64(t)?,
    })
}

/// The `(A, B)` projection of `Λ(P) = {(A, B, C) : Ap − Br + Cq = 0}`, in
/// Hermite form: `v₁ = (step, 0)`, `v₂ = (a0, b0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticePlane {
    pub point: RationalPoint,
    pub step: i64,
    pub a0: i64,
    pub b0: i64,
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let e = a.rem_euclid(m).extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

impl LatticePlane {
    pub fn new(point: RationalPoint) -> Self {
        let (p, r, q) = (point.p, point.r, point.q);
        let g1 = p.gcd(&q);
        let step = q / g1;
        let b0 = g1 / g1.gcd(&r);
        // A·(p/g1) ≡ b0·r/g1 (mod q/g1)
        let rhs = (b0 as i128 * r as i128 / g1 as i128).rem_euclid(step as i128) as i64;
        let inv = mod_inverse(p / g1, step);
        let a0 = ((rhs as i128 * inv as i128).rem_euclid(step as i128)) as i64;
        LatticePlane { point, step, a0, b0 }
    }

    /// Fundamental-domain area `|det(v₁, v₂)|`.
    pub fn area(&self) -> i64 {
        self.step * self.b0
    }

    pub fn contains(&self, a: i64, b: i64) -> bool {
        let pt = &self.point;
        (a as i128 * pt.p as i128 - b as i128 * pt.r as i128).rem_euclid(pt.q as i128) == 0
    }

    /// Smallest non-negative residue of the `A` admissible at `B`, when
    /// `B` is admissible at all; every other admissible `A` differs by a
    /// multiple of `step`.
    pub fn residue(&self, b: i64) -> Option<i64> {
        if b.rem_euclid(self.b0) != 0 {
            return None;
        }
        let m = b / self.b0;
        Some(((self.a0 as i128 * m as i128).rem_euclid(self.step as i128)) as i64)
    }

    /// The `C` completing `(A, B)` to a point of `Λ(P)`.
    pub fn complete(&self, a: i64, b: i64) -> Option<i64> {
        let pt = &self.point;
        let num = b as i128 * pt.r as i128 - a as i128 * pt.p as i128;
        (num % pt.q as i128 == 0).then(|| (num / pt.q as i128) as i64)
    }
}
