use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{dyadic_floor, ipow, pow2, rat, Exp, PowerProduct, Rat, ThetaSpec};
use crate::lines::{exp_to_rat, Pair};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrimPolicy {
    /// `⌈R^{1−α_min}⌉` (finite) or `⌈R_t^{1−α_t}⌉` per pair (countable).
    Paper,
    Fixed(u64),
}

impl TrimPolicy {
    pub fn is_desk(&self) -> bool {
        !matches!(self, TrimPolicy::Paper)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleKind {
    /// Every pair at `m = 1`, `k = 0` with a common `c₁`.
    Finite,
    /// Pair `t` embedded at `R_t = R^{m_t}` from level `k_t`.
    Countable,
}

#[derive(Clone, Debug)]
pub struct PairParams {
    pub pair: Pair,
    pub alpha: Exp,
    pub lambda: Option<Exp>,
    pub m: u32,
    pub k: u32,
    pub c1: Rat,
    pub c: Rat,
    pub trim: u64,
    /// `R_t^{α_t} > 2`, i.e. `R_t > 2^{1/α_t}`.
    pub trim_viable: bool,
}

impl PairParams {
    pub fn is_active(&self) -> bool {
        !matches!(self.pair, Pair::Vertical)
    }

    pub fn r_t(&self, r: u64) -> BigInt {
        ipow(&BigInt::from(r), self.m as u64)
    }

    /// Embedded level `s` whose lines act when building level `n + 1`:
    /// `[(n + 1 − k_t)/m_t] − 1`, or `None` when negative.
    pub fn family_for_level(&self, next: u32) -> Option<u32> {
        if next < self.k {
            return None;
        }
        let s = (next - self.k) / self.m;
        s.checked_sub(1)
    }

    /// Whether `next` is the first level at which `family_for_level(next)`
    /// takes its value, i.e. `next = n_{s+1}(t)`.
    pub fn is_embedded_level(&self, next: u32) -> bool {
        next >= self.k && (next - self.k).is_multiple_of(self.m)
    }
}

/// Conditions on `R` that are checkable at a given scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Viability {
    pub trim: Vec<bool>,
    /// `C(R) = 2 + Σ (R^{−1+ε/2})^k < 4`.
    pub c_r_below_4: bool,
    /// `[2R^{1−ε/2}] ≥ (5/3)R^{1−ε/2}`.
    pub threshold_ratio: bool,
    /// `Σ_{k≥1} R^{−kε/2} < 1/6`.
    pub tail_below_sixth: bool,
    /// `R^{α_min − ε} ≥ 8`.
    pub alpha_eps_gap: bool,
    /// `ε < inf α_t²/2`.
    pub epsilon_below_eps0: bool,
}

#[derive(Clone, Debug)]
pub struct Params {
    pub r: u64,
    pub theta: ThetaSpec,
    pub pairs: Vec<PairParams>,
    pub c1: Rat,
    /// `#J₀ = ⌊1/c₁⌋`, saturated at `u64::MAX`.
    pub n0: u64,
    pub epsilon: Rat,
    pub trim_policy: TrimPolicy,
    pub schedule: ScheduleKind,
    pub viability: Viability,
}

/// Largest `2^e ≤ P`.
pub fn dyadic_floor_power(p: &PowerProduct) -> (Rat, i64) {
    if let Some(r) = p.to_rational() {
        return dyadic_floor(&r);
    }
    let mut e = p.log2().floor() as i64;
    while p.cmp_rational(&pow2(e)) == Ordering::Less {
        e -= 1;
    }
    while p.cmp_rational(&pow2(e + 1)) != Ordering::Less {
        e += 1;
    }
    (pow2(e), e)
}

/// `R^{α} > 2` with `α = u/v` decided as `R^u > 2^v`.
pub fn trim_viable(r: &BigInt, alpha: Exp) -> bool {
    if !alpha.is_positive() {
        return false;
    }
    let (u, v) = (*alpha.numer() as u64, *alpha.denom() as u64);
    ipow(r, u) > ipow(&BigInt::from(2), v)
}

fn rpow_exp(r: u64, e: Exp) -> PowerProduct {
    PowerProduct::single(Rat::from_integer(BigInt::from(r)), e)
}

/// `(1/4)·R^{−3i/j}`, the bound on `c₁` for one pair.
fn c1_bound(r: u64, pair: &Pair, m: u32) -> Option<PowerProduct> {
    match pair {
        Pair::Vertical => None,
        Pair::RationalFamily => Some(PowerProduct::rational(rat(1, 4))),
        Pair::Weighted { .. } => {
            let e = -Exp::from_integer(3 * m as i64) * pair.i() / pair.j();
            Some(rpow_exp(r, e).mul_rat(&rat(1, 4)))
        }
    }
}

pub fn default_epsilon(pairs: &[Pair]) -> Rat {
    let a = alpha_min(pairs).unwrap_or(Exp::new(1, 16));
    exp_to_rat(a * a / 4)
}

fn alpha_min(pairs: &[Pair]) -> Option<Exp> {
    pairs.iter().filter(|p| p.is_weighted()).map(|p| p.alpha()).min()
}

pub struct ParamsBuilder {
    pub pairs: Vec<Pair>,
    pub r: u64,
    pub epsilon: Option<Rat>,
    pub trim: TrimPolicy,
    pub schedule: ScheduleKind,
    pub truncate: Option<usize>,
}

impl ParamsBuilder {
    pub fn new(pairs: Vec<Pair>, r: u64) -> Self {
        ParamsBuilder {
            pairs,
            r,
            epsilon: None,
            trim: TrimPolicy::Fixed(0),
            schedule: ScheduleKind::Finite,
            truncate: None,
        }
    }

    pub fn build(&self, theta: &ThetaSpec) -> Result<Params> {
        let mut pairs = self.pairs.clone();
        if let Some(t) = self.truncate {
            pairs.truncate(t);
        }
        derive_params(&pairs, theta, self.r, self.epsilon.clone(), self.trim, self.schedule)
    }
}

/// Constants of the construction for the given pairs at base `R`.
pub fn derive_params(
    pairs: &[Pair],
    theta: &ThetaSpec,
    r: u64,
    epsilon: Option<Rat>,
    trim_policy: TrimPolicy,
    schedule: ScheduleKind,
) -> Result<Params> {
    if r < 2 {
        return Err(Error::InvalidParam("R must be at least 2".into()));
    }
    if pairs.is_empty() {
        return Err(Error::InvalidParam("at least one pair is required".into()));
    }
    if theta.value.is_rational() {
        return Err(Error::RationalTheta);
    }
    let epsilon = epsilon.unwrap_or_else(|| default_epsilon(pairs));
    if !epsilon.is_positive() || epsilon >= Rat::one() {
        return Err(Error::InvalidParam("epsilon must lie in (0, 1)".into()));
    }
    let rb = BigInt::from(r);
    let quarter = rat(1, 4);

    // Schedule exponents.
    let mut ms = Vec::with_capacity(pairs.len());
    for t in 0..pairs.len() {
        let m = match schedule {
            ScheduleKind::Finite => 1,
            ScheduleKind::Countable if t == 0 => 1,
            ScheduleKind::Countable => ((t + 1) as u32).max(1 + ms[t - 1]),
        };
        ms.push(m);
    }

    let c1 = match schedule {
        ScheduleKind::Finite => pairs
            .iter()
            .filter_map(|p| c1_bound(r, p, 1))
            .map(|b| dyadic_floor_power(&b).0)
            .min()
            .unwrap_or_else(|| quarter.clone()),
        ScheduleKind::Countable => c1_bound(r, &pairs[0], 1)
            .map(|b| dyadic_floor_power(&b).0)
            .unwrap_or_else(|| quarter.clone()),
    };
    // saturates when J₀ cannot be indexed; run_construction then refuses the grid
    let n0 = crate::exact::rat_floor(&c1.recip()).to_u64().unwrap_or(u64::MAX);

    let amin = alpha_min(pairs);
    let finite_trim = match (trim_policy, amin) {
        (TrimPolicy::Fixed(k), _) => k,
        (TrimPolicy::Paper, Some(a)) => rpow_exp(r, Exp::one() - a).ceil().to_u64().unwrap_or(u64::MAX),
        (TrimPolicy::Paper, None) => 0,
    };

    let mut out = Vec::with_capacity(pairs.len());
    for (t, pair) in pairs.iter().enumerate() {
        let m = ms[t];
        let alpha = pair.alpha();
        let k = match schedule {
            ScheduleKind::Finite => 0,
            ScheduleKind::Countable if t == 0 => 0,
            ScheduleKind::Countable => {
                let mut k = 0u32;
                if let Some(b) = c1_bound(r, pair, m) {
                    while rpow_exp(r, Exp::from_integer(-(k as i64))).mul_rat(&c1).cmp_exact(&b) == Ordering::Greater {
                        k += 1;
                    }
                }
                k
            }
        };
        let c1t = &c1 / Rat::from_integer(ipow(&rb, k as u64));
        let rt = Rat::from_integer(ipow(&rb, m as u64));
        let c = match pair {
            Pair::Vertical => Rat::zero(),
            Pair::RationalFamily => &c1t / (rat(2, 1) * &rt * &rt),
            Pair::Weighted { .. } => {
                let raw = PowerProduct::single(rt.clone(), -(Exp::one() + alpha)).mul_rat(&c1t);
                let mut cands = vec![dyadic_floor_power(&raw).0];
                cands.push(dyadic_floor(theta.c_theta()).0);
                cands.push(rat(1, 2));
                cands.into_iter().min().expect("non-empty")
            }
        };
        let trim = match (schedule, trim_policy, pair) {
            (_, TrimPolicy::Fixed(kk), _) => kk,
            (ScheduleKind::Finite, TrimPolicy::Paper, _) => finite_trim,
            (ScheduleKind::Countable, TrimPolicy::Paper, Pair::Weighted { .. }) => {
                PowerProduct::single(rt.clone(), Exp::one() - alpha)
                    .ceil()
                    .to_u64()
                    .unwrap_or(u64::MAX)
            }
            (ScheduleKind::Countable, TrimPolicy::Paper, _) => 0,
        };
        out.push(PairParams {
            pair: pair.clone(),
            alpha,
            lambda: pair.lambda().filter(|_| pair.is_weighted()),
            m,
            k,
            c1: c1t,
            c,
            trim,
            trim_viable: trim_viable(&ipow(&rb, m as u64), alpha),
        });
    }

    let viability = viability(r, &out, &epsilon, amin);
    Ok(Params {
        r,
        theta: theta.clone(),
        pairs: out,
        c1,
        n0,
        epsilon,
        trim_policy,
        schedule,
        viability,
    })
}

fn viability(r: u64, pairs: &[PairParams], eps: &Rat, amin: Option<Exp>) -> Viability {
    let e = rat_to_exp(eps);
    let half = e / 2;
    let s = rpow_exp(r, Exp::one() - half);
    let two = Rat::from_integer(BigInt::from(2));
    let c_r_below_4 = s.cmp_rational(&two) == Ordering::Greater;
    let thr = s.mul_rat(&two).floor();
    let threshold_ratio = s.mul_rat(&rat(5, 3)).cmp_rational(&Rat::from_integer(thr)) != Ordering::Greater;
    let tail_below_sixth = rpow_exp(r, half).cmp_rational(&rat(7, 1)) == Ordering::Greater;
    let alpha_eps_gap = amin.is_some_and(|a| {
        a > e && rpow_exp(r, a - e).cmp_rational(&rat(8, 1)) != Ordering::Less
    });
    let epsilon_below_eps0 = amin.is_some_and(|a| e < a * a / 2);
    Viability {
        trim: pairs.iter().map(|p| p.trim_viable).collect(),
        c_r_below_4,
        threshold_ratio,
        tail_below_sixth,
        alpha_eps_gap,
        epsilon_below_eps0,
    }
}

pub fn rat_to_exp(r: &Rat) -> Exp {
    Exp::new(
        r.numer().to_i64().expect("exponent numerator fits in i64"),
        r.denom().to_i64().expect("exponent denominator fits in i64"),
    )
}

impl Params {
    pub fn rb(&self) -> BigInt {
        BigInt::from(self.r)
    }

    /// `|J_n| = c₁R^{−n}`.
    pub fn cell_width(&self, n: u32) -> Rat {
        &self.c1 / Rat::from_integer(ipow(&self.rb(), n as u64))
    }

    /// Grid cells at level `n`: `#J₀ · R^n`.
    pub fn cells_at(&self, n: u32) -> u64 {
        self.n0
            .checked_mul(self.r.checked_pow(n).expect("grid size overflows u64"))
            .expect("grid size overflows u64")
    }

    pub fn epsilon_exp(&self) -> Exp {
        rat_to_exp(&self.epsilon)
    }

    /// `[2R^{1−ε/2}]`.
    pub fn branching_threshold(&self) -> u64 {
        rpow_exp(self.r, Exp::one() - self.epsilon_exp() / 2)
            .mul_rat(&rat(2, 1))
            .floor()
            .to_u64()
            .unwrap_or(u64::MAX)
    }

    pub fn alpha_min(&self) -> Option<Exp> {
        self.pairs
            .iter()
            .filter(|p| p.pair.is_weighted())
            .map(|p| p.alpha)
            .min()
    }

    pub fn is_desk(&self) -> bool {
        self.trim_policy.is_desk()
    }

    pub fn active_pairs(&self) -> impl Iterator<Item = (usize, &PairParams)> {
        self.pairs.iter().enumerate().filter(|(_, p)| p.is_active())
    }
}
