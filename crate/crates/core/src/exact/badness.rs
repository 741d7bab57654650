use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::{rat_int, QuadraticSurd, Rat};
use crate::error::{Error, Result};

/// Certified lower bound `c` with `‖qθ‖·q^{1/i} > c` for every `q ≥ 1`.
#[derive(Clone, Debug)]
pub struct BadnessCertificate {
    pub c: Rat,
    /// Minimiser of `q·‖qθ‖` over the scanned range.
    pub argmin_q: u64,
    pub scan_min: QuadraticSurd,
    pub scan_limit: u64,
    /// `min_k 1/(a_{k+1} + 1/a_{k+2} + 1/a_k)` over the eventually periodic
    /// expansion; a strict lower bound for `q_k‖q_kθ‖`, `k ≥ 1`.
    pub tail_bound: Rat,
    pub preperiod: Vec<BigInt>,
    pub period: Vec<BigInt>,
}

/// Brute-force scan of `q‖qθ‖` for `q ≤ Q` combined with the convergent
/// bound from the continued-fraction period. Valid for `0 < i ≤ 1` because
/// `q^{1/i} ≥ q`.
pub fn badness_lower_bound(theta: &QuadraticSurd, i: &Rat, q_max: u64) -> Result<BadnessCertificate> {
    if theta.is_rational() {
        return Err(Error::RationalTheta);
    }
    if !i.is_positive() || *i > Rat::one() {
        return Err(Error::Precondition("badness exponent i must lie in (0, 1]".into()));
    }
    if q_max == 0 {
        return Err(Error::Precondition("Q must be at least 1".into()));
    }
    let x = theta.frac();
    let cf = x.continued_fraction();
    let a = |k: usize| cf.term(k).expect("quadratic irrational has infinite expansion").clone();

    let span = cf.preperiod.len() + 2 * cf.period.len() + 2;
    let mut tail: Option<Rat> = None;
    for k in 1..span {
        let (ak, ak1, ak2) = (a(k), a(k + 1), a(k + 2));
        let denom = rat_int(&ak1) + Rat::new(BigInt::one(), ak2) + Rat::new(BigInt::one(), ak);
        let b = denom.recip();
        if tail.as_ref().is_none_or(|t| b < *t) {
            tail = Some(b);
        }
    }
    let tail = tail.expect("non-empty tail range");

    // q < q_1 = a_1 is covered only by the scan.
    let limit = a(1).to_u64().map_or(u64::MAX, |a1| a1.max(q_max));
    let mut best: Option<(QuadraticSurd, u64)> = None;
    for q in 1..=limit {
        let qb = BigInt::from(q);
        let v = x.nearest_int_dist(&qb).0.mul_int(&qb);
        if best.as_ref().is_none_or(|(m, _)| v < *m) {
            best = Some((v, q));
        }
    }
    let (scan_min, argmin_q) = best.expect("non-empty scan");

    // Largest unit fraction 1/m with 1/m ≤ tail and 1/m < scan_min.
    let mut m = super::rat_ceil(&tail.recip()).max(BigInt::one());
    loop {
        let c = Rat::new(BigInt::one(), m.clone());
        if c <= tail && scan_min.cmp_rational(&c) == Ordering::Greater {
            return Ok(BadnessCertificate {
                c,
                argmin_q,
                scan_min,
                scan_limit: limit,
                tail_bound: tail,
                preperiod: cf.preperiod.clone(),
                period: cf.period.clone(),
            });
        }
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn sqrt2_minus_one() {
        let t = QuadraticSurd::sqrt(2.into()).unwrap();
        let cert = badness_lower_bound(&t, &rat(1, 1), 10_000).unwrap();
        assert_eq!(cert.c, rat(1, 3));
        assert_eq!(cert.argmin_q, 2);
        let half = badness_lower_bound(&t, &rat(1, 2), 10_000).unwrap();
        assert_eq!(half.c, rat(1, 3));
    }

    #[test]
    fn rejects_rational() {
        let t = QuadraticSurd::from_rational(&rat(1, 2));
        assert_eq!(
            badness_lower_bound(&t, &rat(1, 1), 10).unwrap_err(),
            Error::RationalTheta
        );
    }

    #[test]
    fn golden_ratio() {
        let g = QuadraticSurd::new(1.into(), 1.into(), 2.into(), 5.into()).unwrap();
        let cert = badness_lower_bound(&g, &rat(1, 1), 1000).unwrap();
        // tail 1/(1 + 1 + 1) for all-ones expansion
        assert_eq!(cert.tail_bound, rat(1, 3));
        assert!(cert.c <= rat(1, 3));
    }
}

/// A quadratic irrational `θ ∈ (0, 1)` with its certified badness constant.
#[derive(Clone, Debug)]
pub struct ThetaSpec {
    pub source: String,
    pub value: QuadraticSurd,
    pub certificate: BadnessCertificate,
}

impl ThetaSpec {
    pub const DEFAULT_SCAN: u64 = 10_000;

    /// Parses and reduces mod 1; rejects rationals.
    pub fn parse(s: &str) -> Result<Self> {
        Self::parse_with_scan(s, Self::DEFAULT_SCAN)
    }

    pub fn parse_with_scan(s: &str, q_max: u64) -> Result<Self> {
        let raw = super::parse_real(s)?;
        Self::new(s.to_string(), &raw, q_max)
    }

    pub fn new(source: String, raw: &QuadraticSurd, q_max: u64) -> Result<Self> {
        if raw.is_rational() {
            return Err(Error::RationalTheta);
        }
        let value = raw.frac();
        let certificate = badness_lower_bound(&value, &Rat::one(), q_max)?;
        Ok(ThetaSpec {
            source,
            value,
            certificate,
        })
    }

    pub fn c_theta(&self) -> &Rat {
        &self.certificate.c
    }
}
