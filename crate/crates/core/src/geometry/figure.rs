use std::cmp::Ordering;

use num_bigint::BigInt;

use super::point::{LatticePlane, RationalPoint};
use crate::error::{Error, Result};
use crate::exact::{pow2, rat_to_f64, Exp, PowerProduct, QuadraticSurd, Rat};
use crate::lines::{Height, Line, Pair};

fn int_rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Which figure: `F`, or the band figure `F_l ⊆ F` for `l > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    F,
    Band(u32),
}

/// Figure `F` of a rational point `P`, window scale `τ` and dyadic index
/// `k`: `|A| < c₂^i B^i`, `0 < B < c₂^{j/i}` with
/// `c₂ = 2^{k+1}τ/(R|qθ − p|)`.
///
/// Every inequality is decided as `|qθ − p|·X < 2^{k+1}τ` for an exact
/// power product `X`.
#[derive(Clone, Debug)]
pub struct FigureSpec {
    pub point: RationalPoint,
    pub pair: Pair,
    pub r: u64,
    pub k: u32,
    pub tau: Rat,
    pub variant: Variant,
    /// `|qθ − p|`.
    pub defect: QuadraticSurd,
    rhs: PowerProduct,
}

impl FigureSpec {
    pub fn new(
        point: RationalPoint,
        pair: &Pair,
        r: u64,
        k: u32,
        tau: &Rat,
        variant: Variant,
        theta: &QuadraticSurd,
    ) -> Result<Self> {
        if !pair.is_weighted() {
            return Err(Error::InvalidPair("figure needs a weighted pair".into()));
        }
        let defect = point.defect(theta);
        if defect.is_zero() {
            return Err(Error::Precondition("qθ = p".into()));
        }
        Ok(FigureSpec {
            point,
            pair: pair.clone(),
            r,
            k,
            tau: tau.clone(),
            variant,
            defect,
            rhs: PowerProduct::rational(tau * pow2(k as i64 + 1)),
        })
    }

    fn below(&self, x: PowerProduct) -> bool {
        x.mul_rat(&int_rat(self.r as i64)).cmp_scaled(&self.defect, &self.rhs) == Ordering::Less
    }

    fn i(&self) -> Exp {
        self.pair.i()
    }

    fn j(&self) -> Exp {
        self.pair.j()
    }

    /// Exponent `e` with `c₃ = R^e`.
    pub fn c3_exponent(&self, l: u32) -> Exp {
        let (i, j) = (self.i(), self.j());
        let lambda = self.pair.lambda().expect("weighted pair");
        j / i - lambda * Exp::from_integer(l as i64) * (j + 1) / i
    }

    fn r_pow(&self, e: Exp) -> PowerProduct {
        PowerProduct::single(int_rat(self.r as i64), e)
    }

    pub fn b_ok(&self, b: i64) -> bool {
        if b <= 0 {
            return false;
        }
        let (i, j) = (self.i(), self.j());
        let bb = PowerProduct::single(int_rat(b), i / j);
        if !self.below(bb.clone()) {
            return false;
        }
        match self.variant {
            Variant::F => true,
            // B < c₃c₂^{j/i} ⟺ |qθ−p|·R·B^{i/j}·c₃^{−i/j} < 2^{k+1}τ
            Variant::Band(l) => self.below(bb.mul(&self.r_pow(-self.c3_exponent(l) * i / j))),
        }
    }

    pub fn a_ok(&self, a: i64, b: i64) -> bool {
        if a == 0 {
            return true;
        }
        let aa = a.unsigned_abs() as i64;
        // |A| < c₂^i B^i ⟺ |qθ−p|·R·|A|^{1/i} < 2^{k+1}τB
        let lhs =
            PowerProduct::single(int_rat(aa), Exp::from_integer(1) / self.i()).mul_rat(&Rat::new(1.into(), b.into()));
        if !self.below(lhs) {
            return false;
        }
        match self.variant {
            Variant::F => true,
            // |A| < c₃^i c₂ ⟺ |qθ−p|·R·|A|·c₃^{−i} < 2^{k+1}τ
            Variant::Band(l) => {
                self.below(PowerProduct::rational(int_rat(aa)).mul(&self.r_pow(-self.c3_exponent(l) * self.i())))
            }
        }
    }

    pub fn contains(&self, a: i64, b: i64) -> bool {
        self.b_ok(b) && self.a_ok(a, b)
    }

    /// Display value of `c₂`.
    pub fn c2_f64(&self) -> f64 {
        rat_to_f64(&self.tau) * 2f64.powi(self.k as i32 + 1) / (self.r as f64 * self.defect.to_f64())
    }

    /// `δ` with `|qθ − p| = δ·2^i·τ·2^{k+1}·R^{−1}·q^{−i}`, for display.
    pub fn delta_f64(&self) -> f64 {
        let i = crate::lines::exp_to_rat(self.i());
        let i = rat_to_f64(&i);
        2f64.powf(-i) * (self.point.q as f64).powf(i) / self.c2_f64()
    }

    /// Area bound `area(F) < 2c₂^{1+j/i}`, for display.
    pub fn area_bound_f64(&self) -> f64 {
        let (i, j) = (
            rat_to_f64(&crate::lines::exp_to_rat(self.i())),
            rat_to_f64(&crate::lines::exp_to_rat(self.j())),
        );
        2.0 * self.c2_f64().powf(1.0 + j / i)
    }

    /// Largest `B` in the figure, or 0 when it has no row.
    pub fn b_limit(&self, cap: i64) -> Result<i64> {
        let (i, j) = (
            rat_to_f64(&crate::lines::exp_to_rat(self.i())),
            rat_to_f64(&crate::lines::exp_to_rat(self.j())),
        );
        let est = self.c2_f64().powf(j / i);
        if !est.is_finite() || est > cap as f64 {
            return Err(Error::Precondition(format!("figure rows exceed cap {cap}")));
        }
        let mut b = est.floor() as i64 + 1;
        while b >= 1 && !self.b_ok(b) {
            b -= 1;
        }
        while b < cap && self.b_ok(b + 1) {
            b += 1;
        }
        Ok(b.max(0))
    }

    /// Largest `|A|` in row `B`.
    pub fn a_limit(&self, b: i64) -> i64 {
        let i = rat_to_f64(&crate::lines::exp_to_rat(self.i()));
        let est = (self.c2_f64() * b as f64).powf(i);
        let mut a = est.floor().min(i64::MAX as f64 / 4.0) as i64 + 1;
        while a > 0 && !self.a_ok(a, b) {
            a -= 1;
        }
        while self.a_ok(a + 1, b) {
            a += 1;
        }
        a
    }

    /// `F ∩ Λ(P)`, rows in increasing `B`, each row in increasing `A`.
    pub fn lattice_points(&self, cap: i64) -> Result<Vec<(i64, i64)>> {
        let lat = LatticePlane::new(self.point);
        let mut out = Vec::new();
        for b in 1..=self.b_limit(cap)? {
            let Some(res) = lat.residue(b) else { continue };
            let am = self.a_limit(b);
            let mut a = -am + (res + am).rem_euclid(lat.step);
            while a <= am {
                out.push((a, b));
                if out.len() as i64 > cap {
                    return Err(Error::Precondition(format!("F ∩ Λ exceeds cap {cap}")));
                }
                a += lat.step;
            }
        }
        Ok(out)
    }
}

/// Cone `C(A₀, B₀)`: slopes `A/B` with
/// `|A/B − A₀/B₀|·|θ − p/q| ≤ c/H(A₀, B₀)`.
#[derive(Clone, Debug)]
pub struct ConeSpec {
    pub a0: i64,
    pub b0: i64,
    pub c: Rat,
    pub point: RationalPoint,
    pub height: Height,
    defect: QuadraticSurd,
}

impl ConeSpec {
    pub fn new(a0: i64, b0: i64, pair: &Pair, c: &Rat, point: RationalPoint, theta: &QuadraticSurd) -> Self {
        ConeSpec {
            a0,
            b0,
            c: c.clone(),
            point,
            height: Height::of(a0, b0, pair),
            defect: point.defect(theta),
        }
    }

    /// `|AB₀ − A₀B|·|qθ − p|·H₀ ≤ c·B·B₀·q`.
    pub fn contains(&self, a: i64, b: i64) -> bool {
        let cross = a as i128 * self.b0 as i128 - self.a0 as i128 * b as i128;
        if cross == 0 {
            return true;
        }
        let s = self.defect.mul_int(&BigInt::from(cross.unsigned_abs()));
        let rhs = &self.c * Rat::from_integer(BigInt::from(b) * BigInt::from(self.b0) * BigInt::from(self.point.q));
        self.height.to_power().cmp_scaled(&s, &PowerProduct::rational(rhs)) != Ordering::Greater
    }

    /// `Y(A, B, C) ∈ Δ(L₀)` evaluated from the two trace points.
    pub fn contains_direct(&self, a: i64, b: i64, theta: &QuadraticSurd) -> bool {
        let lat = LatticePlane::new(self.point);
        let (Some(c), Some(c0)) = (lat.complete(a, b), lat.complete(self.a0, self.b0)) else {
            return false;
        };
        let y = Line { a, b, c }.trace(theta);
        let y0 = Line {
            a: self.a0,
            b: self.b0,
            c: c0,
        }
        .trace(theta);
        self.height.within(&(&y - &y0), &self.c)
    }

    /// Display half-width `w` of the slope band.
    pub fn half_width_f64(&self) -> f64 {
        rat_to_f64(&self.c) * self.point.q as f64 / (self.height.to_f64() * self.defect.to_f64())
    }
}
