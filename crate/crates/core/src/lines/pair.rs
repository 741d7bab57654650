use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, Exp, Rat};

/// A weight pair `(i, j)` with `i + j = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pair {
    /// `0 < i, j < 1`; stored as `i = p/q`, `j = (q − p)/q`.
    Weighted { p: i64, q: i64 },
    /// `(0, 1)`: the rational family `p/q` with height `q²`.
    RationalFamily,
    /// `(1, 0)`: no constraint on `Θ` once `θ` is badly approximable.
    Vertical,
}

impl Pair {
    pub fn new(i: &Rat, j: &Rat) -> Result<Self> {
        if i + j != Rat::one() {
            return Err(Error::InvalidPair(format!("i + j = {} ≠ 1", i + j)));
        }
        if i.is_negative() || j.is_negative() {
            return Err(Error::InvalidPair("weights must be non-negative".into()));
        }
        if i.is_zero() {
            return Ok(Pair::RationalFamily);
        }
        if j.is_zero() {
            return Ok(Pair::Vertical);
        }
        let p = i.numer().to_i64();
        let q = i.denom().to_i64();
        match (p, q) {
            (Some(p), Some(q)) if q <= 1 << 20 => Ok(Pair::Weighted { p, q }),
            _ => Err(Error::InvalidPair("weight denominators are limited to 2^20".into())),
        }
    }

    pub fn weighted(p: i64, q: i64) -> Self {
        let g = num_integer::gcd(p, q);
        assert!(0 < p && p < q, "weighted pair requires 0 < p < q");
        Pair::Weighted { p: p / g, q: q / g }
    }

    /// Parses `"i,j"` with rational entries, e.g. `"1/3,2/3"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::InvalidPair(format!("expected \"i,j\", got {s:?}")))?;
        let i = parse_rational(a.trim()).map_err(|e| Error::InvalidPair(e.to_string()))?;
        let j = parse_rational(b.trim()).map_err(|e| Error::InvalidPair(e.to_string()))?;
        Self::new(&i, &j)
    }

    pub fn is_weighted(&self) -> bool {
        matches!(self, Pair::Weighted { .. })
    }

    pub fn i(&self) -> Exp {
        match *self {
            Pair::Weighted { p, q } => Exp::new(p, q),
            Pair::RationalFamily => Exp::zero(),
            Pair::Vertical => Exp::one(),
        }
    }

    pub fn j(&self) -> Exp {
        Exp::one() - self.i()
    }

    pub fn i_rat(&self) -> Rat {
        exp_to_rat(self.i())
    }

    pub fn j_rat(&self) -> Rat {
        exp_to_rat(self.j())
    }

    /// `α = ij/4`.
    pub fn alpha(&self) -> Exp {
        self.i() * self.j() / 4
    }

    /// `λ = 3/j`; undefined for the vertical pair.
    pub fn lambda(&self) -> Option<Exp> {
        let j = self.j();
        (!j.is_zero()).then(|| Exp::from_integer(3) / j)
    }

    /// `(p, q)` with `i = p/q`; panics on degenerate pairs.
    pub fn pq(&self) -> (i64, i64) {
        match *self {
            Pair::Weighted { p, q } => (p, q),
            _ => panic!("degenerate pair has no (p, q) form"),
        }
    }
}

pub fn exp_to_rat(e: Exp) -> Rat {
    Rat::new(BigInt::from(*e.numer()), BigInt::from(*e.denom()))
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.i(), self.j())
    }
}
