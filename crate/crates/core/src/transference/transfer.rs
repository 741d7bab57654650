use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::checks::{dist_to_int, max_term};
use crate::error::{Error, Result};
use crate::exact::{Exp, PowerProduct, QuadraticSurd, Rat};
use crate::lines::Pair;

fn int_rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// `n` forms `L_t(q) = Σ_s θ_ts q_s` in `m` variables with bounds
/// `‖L_t(q)‖ ≤ C_t`, `|q_s| ≤ X_s`, and the transposed forms
/// `M_s(u) = Σ_t θ_ts u_t`.
#[derive(Clone, Debug)]
pub struct TransferenceProblem {
    /// `theta[t][s]`, `n` rows of length `m`.
    pub theta: Vec<Vec<QuadraticSurd>>,
    pub c: Vec<PowerProduct>,
    pub x: Vec<PowerProduct>,
}

#[derive(Clone, Debug)]
pub struct TransferBounds {
    pub d: PowerProduct,
    /// `(l − 1)·d^{1/(l−1)}`, shared by every `D_s X_s` and `U_t C_t`.
    pub scale: PowerProduct,
    pub d_s: Vec<PowerProduct>,
    pub u_t: Vec<PowerProduct>,
}

impl TransferenceProblem {
    pub fn new(theta: Vec<Vec<QuadraticSurd>>, c: Vec<PowerProduct>, x: Vec<PowerProduct>) -> Result<Self> {
        let (n, m) = (theta.len(), x.len());
        if n == 0 || m == 0 || c.len() != n || theta.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidParam("θ must be n × m with n = #C, m = #X".into()));
        }
        for r in &theta {
            for v in r {
                if !v.compatible(&r[0]) || !v.compatible(&theta[0][0]) {
                    return Err(Error::Radicand(format!("{v}"), format!("{}", theta[0][0])));
                }
            }
        }
        Ok(TransferenceProblem { theta, c, x })
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn m(&self) -> usize {
        self.x.len()
    }

    pub fn l(&self) -> usize {
        self.n() + self.m()
    }

    pub fn transposed_form(&self, s: usize, u: &[i64]) -> QuadraticSurd {
        let mut acc = QuadraticSurd::zero();
        for (t, &ut) in u.iter().enumerate() {
            acc = &acc + &self.theta[t][s].mul_int(&BigInt::from(ut));
        }
        acc
    }

    pub fn form(&self, t: usize, q: &[i64]) -> QuadraticSurd {
        let mut acc = QuadraticSurd::zero();
        for (s, &qs) in q.iter().enumerate() {
            acc = &acc + &self.theta[t][s].mul_int(&BigInt::from(qs));
        }
        acc
    }

    /// `q ≠ 0` with `‖L_t(q)‖ ≤ C_t` and `|q_s| ≤ X_s`.
    pub fn verify_primal(&self, q: &[i64]) -> bool {
        q.len() == self.m()
            && q.iter().any(|&v| v != 0)
            && q.iter()
                .zip(&self.x)
                .all(|(&v, x)| v == 0 || x.cmp_rational(&int_rat(v.abs())) != Ordering::Less)
            && (0..self.n()).all(|t| bounded(&dist_to_int(&self.form(t, q)), &self.c[t]))
    }

    /// `u ≠ 0` with `‖M_s(u)‖ ≤ D_s` and `|u_t| ≤ U_t`.
    pub fn verify_dual(&self, bounds: &TransferBounds, u: &[i64]) -> bool {
        u.len() == self.n()
            && u.iter().any(|&v| v != 0)
            && u.iter()
                .zip(&bounds.u_t)
                .all(|(&v, b)| v == 0 || b.cmp_rational(&int_rat(v.abs())) != Ordering::Less)
            && (0..self.m()).all(|s| bounded(&dist_to_int(&self.transposed_form(s, u)), &bounds.d_s[s]))
    }
}

/// `s ≤ p` for a real `s ≥ 0`.
fn bounded(s: &QuadraticSurd, p: &PowerProduct) -> bool {
    PowerProduct::one().cmp_scaled(s, p) != Ordering::Greater
}

/// `d = ∏C_t ∏X_s`, `D_s = (l−1)X_s^{−1}d^{1/(l−1)}`,
/// `U_t = (l−1)C_t^{−1}d^{1/(l−1)}`; fails unless `max D_s < 1`.
pub fn transfer_bounds(problem: &TransferenceProblem) -> Result<TransferBounds> {
    let mut d = PowerProduct::one();
    for v in problem.c.iter().chain(&problem.x) {
        d = d.mul(v);
    }
    let k = problem.l() as i64 - 1;
    let scale = d.pow(Exp::new(1, k)).mul_rat(&int_rat(k));
    let d_s: Vec<PowerProduct> = problem.x.iter().map(|x| scale.div(x)).collect();
    let u_t = problem.c.iter().map(|c| scale.div(c)).collect();
    if let Some((s, _)) = d_s
        .iter()
        .enumerate()
        .find(|(_, v)| v.cmp_rational(&int_rat(1)) != Ordering::Less)
    {
        return Err(Error::Hypothesis(format!("D_{} ≥ 1", s + 1)));
    }
    Ok(TransferBounds { d, scale, d_s, u_t })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Vec<i64>),
    /// The box `|u_t| ≤ U_t` has more than `cap` points.
    NotSearched {
        nodes: u128,
    },
}

/// Exhaustive search of `|u_t| ≤ U_t` by `|u|₁` ascending for `u ≠ 0` with
/// `‖M_s(u)‖ ≤ D_s`, larger leading coordinates first within a shell. Only
/// `u` with first nonzero coordinate positive are visited. An empty box is
/// a falsification.
pub fn transfer_witness_search(
    problem: &TransferenceProblem,
    bounds: &TransferBounds,
    cap: u128,
) -> Result<SearchOutcome> {
    let lim: Vec<i64> = bounds
        .u_t
        .iter()
        .map(|u| u.floor().to_i64().unwrap_or(i64::MAX))
        .collect();
    let nodes = lim
        .iter()
        .fold(1u128, |acc, &v| acc.saturating_mul(2 * v.max(0) as u128 + 1));
    if nodes > cap {
        return Ok(SearchOutcome::NotSearched { nodes });
    }
    let total: i64 = lim.iter().sum();
    let mut u = vec![0i64; lim.len()];
    for norm in 1..=total {
        if let Some(found) = shell(problem, bounds, &lim, &mut u, 0, norm, false) {
            return Ok(SearchOutcome::Found(found));
        }
    }
    Err(Error::Falsification(
        "no transposed solution in the transference box".into(),
    ))
}

/// Points of `Σ|u_t| = left` over coordinates `t..`, with the sign
/// normalization carried in `seen`.
fn shell(
    p: &TransferenceProblem,
    b: &TransferBounds,
    lim: &[i64],
    u: &mut Vec<i64>,
    t: usize,
    left: i64,
    seen: bool,
) -> Option<Vec<i64>> {
    if t == lim.len() {
        return (left == 0 && p.verify_dual(b, u)).then(|| u.clone());
    }
    let rest: i64 = lim[t + 1..].iter().sum();
    for mag in (0..=lim[t].min(left)).rev() {
        if left - mag > rest {
            continue;
        }
        let signs: &[i64] = if mag == 0 || !seen { &[1] } else { &[1, -1] };
        for &sg in signs {
            u[t] = sg * mag;
            if let Some(v) = shell(p, b, lim, u, t + 1, left - mag, seen || mag > 0) {
                return Some(v);
            }
        }
    }
    u[t] = 0;
    None
}

/// A dual witness produced from a simultaneous one.
#[derive(Clone, Debug)]
pub struct DualWitness {
    pub u1: i64,
    pub u2: i64,
    /// `2^{1/i+1/j+1}c`.
    pub constant: PowerProduct,
    /// `max{|u₁|^{1/i}, |u₂|^{1/j}}·‖xu₁ + yu₂‖ ≤ constant`, re-checked.
    pub verified: bool,
}

/// A simultaneous witness produced from a dual one.
#[derive(Clone, Debug)]
pub struct SimultaneousWitness {
    pub q: u64,
    /// `max{2^{(1+i)/i}c^{j/(2i)}, 2^{(1+j)/j}c^{i/(2j)}}`.
    pub constant: PowerProduct,
    /// `max{‖qx‖^{1/i}, ‖qy‖^{1/j}} ≤ constant/q`, re-checked.
    pub verified: bool,
}

fn weighted(pair: &Pair) -> Result<(Exp, Exp)> {
    if !pair.is_weighted() {
        return Err(Error::InvalidPair("transference needs 0 < i, j < 1".into()));
    }
    Ok((pair.i(), pair.j()))
}

/// `‖q₀x‖ ≤ cq₀^{−i}` and `‖q₀y‖ ≤ cq₀^{−j}`.
pub fn is_simultaneous_witness(q0: u64, c: &Rat, pair: &Pair, x: &QuadraticSurd, y: &QuadraticSurd) -> bool {
    let q = int_rat(q0 as i64);
    let qb = BigInt::from(q0);
    [(x, pair.i()), (y, pair.j())].iter().all(|(v, w)| {
        let bound = PowerProduct::rational(c.clone()).mul(&PowerProduct::single(q.clone(), -*w));
        bounded(&v.nearest_int_dist(&qb).0, &bound)
    })
}

/// `max{|a|^{1/i}, |b|^{1/j}}·‖ax + by‖ ≤ c`.
pub fn is_dual_witness(
    a: i64,
    b: i64,
    c: &PowerProduct,
    pair: &Pair,
    x: &QuadraticSurd,
    y: &QuadraticSurd,
) -> Result<bool> {
    let Some(m) = max_term(a, b, pair) else {
        return Ok(false);
    };
    let s = dist_to_int(&x.mul_int(&BigInt::from(a)).checked_add(&y.mul_int(&BigInt::from(b)))?);
    Ok(m.cmp_scaled(&s, c) != Ordering::Greater)
}

/// A simultaneous witness at `c < 1/2` gives `(u₁, u₂)` through the transference bounds
/// with `m = 1`, `n = 2`.
pub fn dual_from_simultaneous(
    q0: u64,
    c: &Rat,
    pair: &Pair,
    x: &QuadraticSurd,
    y: &QuadraticSurd,
    cap: u128,
) -> Result<Option<DualWitness>> {
    let (i, j) = weighted(pair)?;
    if *c >= Rat::new(1.into(), 2.into()) || *c <= int_rat(0) {
        return Err(Error::Precondition("need 0 < c < 1/2".into()));
    }
    if q0 == 0 || !is_simultaneous_witness(q0, c, pair, x, y) {
        return Err(Error::Precondition(format!("q₀ = {q0} is not a simultaneous witness")));
    }
    let q = int_rat(q0 as i64);
    let cc = PowerProduct::rational(c.clone());
    let problem = TransferenceProblem::new(
        vec![vec![x.clone()], vec![y.clone()]],
        vec![
            cc.mul(&PowerProduct::single(q.clone(), -i)),
            cc.mul(&PowerProduct::single(q.clone(), -j)),
        ],
        vec![PowerProduct::rational(q)],
    )?;
    let bounds = transfer_bounds(&problem)?;
    let SearchOutcome::Found(u) = transfer_witness_search(&problem, &bounds, cap)? else {
        return Ok(None);
    };
    let constant = PowerProduct::single(int_rat(2), i.recip() + j.recip() + 1).mul_rat(c);
    let verified = is_dual_witness(u[0], u[1], &constant, pair, x, y)?;
    Ok(Some(DualWitness {
        u1: u[0],
        u2: u[1],
        constant,
        verified,
    }))
}

/// `max{2^{(1+i)/i}c^{j/(2i)}, 2^{(1+j)/j}c^{i/(2j)}}`.
pub fn simultaneous_constant(c: &Rat, pair: &Pair) -> Result<PowerProduct> {
    let (i, j) = weighted(pair)?;
    let term = |u: Exp, v: Exp| {
        PowerProduct::single(int_rat(2), (Exp::from_integer(1) + u) / u)
            .mul(&PowerProduct::single(c.clone(), v / (u * 2)))
    };
    let (a, b) = (term(i, j), term(j, i));
    Ok(if a.cmp_exact(&b) == Ordering::Less { b } else { a })
}

/// A dual witness `(a, b)` at `c < 1/4` gives `q` through the transference bounds with
/// `m = 2`, `n = 1`.
pub fn simultaneous_from_dual(
    a: i64,
    b: i64,
    c: &Rat,
    pair: &Pair,
    x: &QuadraticSurd,
    y: &QuadraticSurd,
    cap: u128,
) -> Result<Option<SimultaneousWitness>> {
    let (i, j) = weighted(pair)?;
    if *c >= Rat::new(1.into(), 4.into()) || *c <= int_rat(0) {
        return Err(Error::Precondition("need 0 < c < 1/4".into()));
    }
    let cc = PowerProduct::rational(c.clone());
    if !is_dual_witness(a, b, &cc, pair, x, y)? {
        return Err(Error::Precondition(format!("({a}, {b}) is not a dual witness")));
    }
    let q0 = max_term(a, b, pair).expect("nonzero witness");
    let problem = TransferenceProblem::new(
        vec![vec![x.clone(), y.clone()]],
        vec![cc.div(&q0)],
        vec![q0.pow(i), q0.pow(j)],
    )?;
    let bounds = transfer_bounds(&problem)?;
    let SearchOutcome::Found(u) = transfer_witness_search(&problem, &bounds, cap)? else {
        return Ok(None);
    };
    let q = u[0].unsigned_abs();
    let constant = simultaneous_constant(c, pair)?;
    let qr = int_rat(q as i64);
    let qb = BigInt::from(q);
    let verified = [(x, i), (y, j)].iter().all(|(v, w)| {
        // ‖qv‖^{1/w} ≤ K/q ⟺ ‖qv‖ ≤ (K/q)^w
        bounded(
            &v.nearest_int_dist(&qb).0,
            &constant
                .mul(&PowerProduct::single(qr.clone(), -Exp::from_integer(1)))
                .pow(*w),
        )
    });
    Ok(Some(SimultaneousWitness { q, constant, verified }))
}
