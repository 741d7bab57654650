use std::cmp::Ordering;

use num_bigint::BigInt;

use super::figure::{ConeSpec, FigureSpec, Variant};
use super::lemmas::pigeonhole_line;
use super::point::{LatticePlane, RationalPoint};
use crate::construction::Interval;
use crate::error::Result;
use crate::exact::{pow2, Exp, PowerProduct, Rat, ThetaSpec};
use crate::lines::{classify, Height, Line, Pair};

fn int_rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

fn hcmp(a: &Height, b: &Height) -> Ordering {
    a.to_power().cmp_exact(&b.to_power())
}

/// Inputs of the `L₀` search for a point `P`, window scale `τ` and the
/// collection `C(n, k)`.
#[derive(Clone, Debug)]
pub struct Prop1Input<'a> {
    pub point: RationalPoint,
    pub tau: Rat,
    pub pair: &'a Pair,
    pub r: u64,
    pub n: u32,
    pub k: u32,
    pub c: Rat,
    pub theta: &'a ThetaSpec,
    /// Lines of `C(n, k)` through `P` meeting a window of length `τR^{−n}`.
    pub witnesses: Option<(&'a [Line], &'a Interval)>,
    /// Largest admissible size of `F ∩ Λ`.
    pub cap: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Preconditions {
    /// `τ ≥ cR2^{−k}`.
    pub tau: bool,
    /// `δ ≤ c₄(cR/(2^kτ))^{2/j}`.
    pub delta: bool,
    /// At least two witnesses in `C(n, k)` through `P` meet the window.
    pub lines: Option<bool>,
}

impl Preconditions {
    pub fn hold(&self) -> bool {
        self.tau && self.delta && self.lines != Some(false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    A,
    B,
}

#[derive(Clone, Debug)]
pub struct L0Certificate {
    pub case: Case,
    /// `(A₀, B₀, C₀)` on `Λ(P)`.
    pub line: Line,
    pub height: Height,
    pub from_pigeonhole: bool,
    /// `H(A₀, B₀) < R^n`.
    pub in_collection: bool,
    /// `F ∩ Λ ⊆ C(A₀, B₀)`.
    pub cone: bool,
    /// `H(A, B) ≥ H(A₀, B₀)` on `F ∩ Λ`.
    pub minimal: bool,
    /// The slope test agreed with direct `Δ(L₀)` membership at every point.
    pub cross_checked: bool,
    /// Witnesses with `(A, B) ∉ F ∩ Λ` or trace outside `Δ(L₀)`.
    pub exceptional: Option<usize>,
}

impl L0Certificate {
    pub fn certified(&self) -> bool {
        self.in_collection && self.cone && self.minimal && self.cross_checked && self.exceptional.is_none_or(|e| e <= 1)
    }
}

#[derive(Clone, Debug)]
pub struct Prop1Report {
    pub point: RationalPoint,
    pub pre: Preconditions,
    pub figure: Vec<(i64, i64)>,
    pub delta: f64,
    pub attempt: Option<L0Certificate>,
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prop1Verdict {
    NotApplicable,
    Certified,
    Falsified,
}

impl Prop1Report {
    pub fn applicable(&self) -> bool {
        self.pre.hold() && !self.figure.is_empty()
    }

    pub fn verdict(&self) -> Prop1Verdict {
        if !self.pre.hold() {
            return Prop1Verdict::NotApplicable;
        }
        match &self.attempt {
            Some(c) if c.certified() => Prop1Verdict::Certified,
            _ => Prop1Verdict::Falsified,
        }
    }
}

fn tau_ok(inp: &Prop1Input) -> bool {
    inp.tau >= &inp.c * int_rat(inp.r as i64) / pow2(inp.k as i64)
}

fn delta_ok(inp: &Prop1Input, fig: &FigureSpec) -> bool {
    let (i, j) = (inp.pair.i(), inp.pair.j());
    let two = int_rat(2);
    // δ = |qθ−p|·R·q^i / (2^{i+k+1}τ)
    let lhs = PowerProduct::single(int_rat(inp.point.q), i)
        .mul(&PowerProduct::single(two.clone(), -i))
        .mul_rat(&(int_rat(inp.r as i64) / (pow2(inp.k as i64 + 1) * &inp.tau)));
    let ratio = &inp.c * int_rat(inp.r as i64) / (pow2(inp.k as i64) * &inp.tau);
    let rhs = PowerProduct::single(int_rat(4), -Exp::from_integer(2) / j)
        .mul(&PowerProduct::single(two, -i))
        .mul(&PowerProduct::single(ratio, Exp::from_integer(2) / j));
    lhs.cmp_scaled(&fig.defect, &rhs) != Ordering::Greater
}

fn lines_ok(inp: &Prop1Input) -> Option<bool> {
    let (lines, window) = inp.witnesses?;
    let th = &inp.theta.value;
    let max_len = &inp.tau / Rat::from_integer(crate::exact::ipow(&BigInt::from(inp.r), inp.n as u64));
    let good = lines
        .iter()
        .filter(|l| {
            let y = l.trace(th);
            inp.point.on_line(l)
                && classify(l, inp.pair, inp.r, inp.n).is_some_and(|f| f.k == inp.k)
                && y.cmp_rational(&window.lo) != Ordering::Less
                && y.cmp_rational(&window.hi) != Ordering::Greater
        })
        .count();
    Some(good >= 2 && window.length() <= max_len)
}

/// `σδq^j ≥ B` for each figure point, decided as
/// `|qθ−p|·σ·R·q·2^{−i}/(2^{k+1}τ) ≥ B`.
fn case_a_rows(inp: &Prop1Input, fig: &FigureSpec) -> impl Fn(i64) -> bool {
    let (i, j) = (inp.pair.i(), inp.pair.j());
    let sigma = PowerProduct::single(int_rat(2), (Exp::from_integer(inp.k as i64 + 2) + i * j) / j).mul(
        &PowerProduct::single(&inp.tau / (int_rat(inp.r as i64) * &inp.c), Exp::from_integer(1) / j),
    );
    let x = sigma
        .mul(&PowerProduct::single(int_rat(2), -i))
        .mul_rat(&(int_rat(inp.r as i64) * int_rat(inp.point.q) / (pow2(inp.k as i64 + 1) * &inp.tau)));
    let defect = fig.defect.clone();
    move |b| x.cmp_scaled(&defect, &PowerProduct::rational(int_rat(b))) != Ordering::Less
}

/// Searches for a line `L₀` through `P` with `F ∩ Λ ⊆ C(A₀, B₀)` and
/// minimal height on `F ∩ Λ`, and certifies it by full enumeration.
///
/// The search runs even when a precondition fails so that the outcome can
/// be reported; only the verdict depends on the preconditions.
pub fn find_l0(inp: &Prop1Input) -> Result<Prop1Report> {
    let th = &inp.theta.value;
    let fig = FigureSpec::new(inp.point, inp.pair, inp.r, inp.k, &inp.tau, Variant::F, th)?;
    let pre = Preconditions {
        tau: tau_ok(inp),
        delta: delta_ok(inp, &fig),
        lines: lines_ok(inp),
    };
    let lattice = LatticePlane::new(inp.point);
    let mut report = Prop1Report {
        point: inp.point,
        pre,
        figure: Vec::new(),
        delta: fig.delta_f64(),
        attempt: None,
        note: None,
    };
    report.figure = match fig.lattice_points(inp.cap) {
        Ok(v) => v,
        Err(e) => {
            report.note = Some(e.to_string());
            return Ok(report);
        }
    };
    if report.figure.is_empty() {
        report.note = Some("F ∩ Λ is empty".into());
        return Ok(report);
    }
    let heights: Vec<Height> = report.figure.iter().map(|&(a, b)| Height::of(a, b, inp.pair)).collect();
    let argmin = (0..heights.len())
        .min_by(|&x, &y| hcmp(&heights[x], &heights[y]))
        .expect("non-empty");
    let hmin = heights[argmin].clone();

    let small_b = case_a_rows(inp, &fig);
    let b_min = report.figure.iter().map(|p| p.1).filter(|&b| small_b(b)).min();
    let (case, chosen, from_pigeonhole) = match b_min {
        Some(b0) => {
            let alt = (0..heights.len())
                .filter(|&x| report.figure[x].1 == b0)
                .min_by(|&x, &y| hcmp(&heights[x], &heights[y]))
                .expect("row exists");
            let pick = if hcmp(&heights[alt], &hmin) == Ordering::Equal {
                alt
            } else {
                argmin
            };
            (Case::A, report.figure[pick], false)
        }
        None => match pigeonhole_line(&inp.point, inp.theta, inp.pair) {
            Ok(l) if hcmp(&l.height(inp.pair), &hmin) != Ordering::Greater => (Case::B, (l.a, l.b), true),
            Ok(_) => (Case::B, report.figure[argmin], false),
            Err(e) => {
                report.note = Some(format!("pigeonhole line unavailable: {e}"));
                (Case::B, report.figure[argmin], false)
            }
        },
    };
    let (a0, b0) = chosen;
    let c0 = lattice.complete(a0, b0).expect("lattice point");
    let cone = ConeSpec::new(a0, b0, inp.pair, &inp.c, inp.point, th);
    let h0 = cone.height.clone();
    let mut in_cone = true;
    let mut cross = true;
    for &(a, b) in &report.figure {
        let v = cone.contains(a, b);
        in_cone &= v;
        cross &= v == cone.contains_direct(a, b, th);
    }
    let minimal = heights.iter().all(|h| hcmp(h, &h0) != Ordering::Less);
    let exceptional = inp.witnesses.map(|(lines, _)| {
        let d0 = Line { a: a0, b: b0, c: c0 }.removal(inp.pair, &inp.c, th);
        lines
            .iter()
            .filter(|l| !(fig.contains(l.a, l.b) && lattice.contains(l.a, l.b) && d0.contains(&l.trace(th))))
            .count()
    });
    report.attempt = Some(L0Certificate {
        case,
        line: Line { a: a0, b: b0, c: c0 },
        in_collection: h0.cmp_int_pow(&BigInt::from(inp.r), inp.n as u64) == Ordering::Less,
        height: h0,
        from_pigeonhole,
        cone: in_cone,
        minimal,
        cross_checked: cross,
        exceptional,
    });
    Ok(report)
}
