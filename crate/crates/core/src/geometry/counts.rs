use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::concurrency::{concurrency_of, lines_through, Concurrency};
use super::figure::{FigureSpec, Variant};
use super::point::{LatticePlane, RationalPoint};
use crate::construction::{candidates_at, per_line_bound, Construction, Interval};
use crate::error::{Error, Result};
use crate::exact::{pow2, rat_ceil, rat_to_f64, Exp, PowerProduct, Rat};
use crate::lines::{classify, Line};

/// `K = 2R^{1−α}/2^k + 2` and `d = ⌈R^{1−ε}/K⌉` for one `(R_t, k)`.
#[derive(Clone, Debug)]
pub struct CountingContext {
    pub r: u64,
    pub alpha: Exp,
    pub epsilon: Exp,
    pub k: u32,
    pub big_k: f64,
    pub d: u64,
    /// `d` was pinned down by bounds that agree.
    pub d_exact: bool,
    /// `R^{1−ε}`, the aggregate bound (reported, never asserted).
    pub aggregate: f64,
    /// `R^{α−ε} ≥ 8`, under which `2 ≤ d ≤ 2R^{1−ε}/K`.
    pub large_r: bool,
}

impl CountingContext {
    pub fn new(r: u64, alpha: Exp, epsilon: Exp, k: u32) -> Self {
        const BITS: u32 = 96;
        let rr = Rat::from_integer(BigInt::from(r));
        let one = Exp::from_integer(1);
        let top = PowerProduct::single(rr.clone(), one - epsilon);
        let mid = PowerProduct::single(rr.clone(), one - alpha);
        let two = Rat::from_integer(2.into());
        let k_lo = &two * mid.lower_bound(BITS) / pow2(k as i64) + &two;
        let k_hi = &two * mid.upper_bound(BITS) / pow2(k as i64) + &two;
        let d_lo = rat_ceil(&(top.lower_bound(BITS) / &k_hi));
        let d_hi = rat_ceil(&(top.upper_bound(BITS) / &k_lo));
        let large_r =
            PowerProduct::single(rr, alpha - epsilon).cmp_rational(&Rat::from_integer(8.into())) != Ordering::Less;
        CountingContext {
            r,
            alpha,
            epsilon,
            k,
            big_k: rat_to_f64(&k_lo),
            d_exact: d_lo == d_hi,
            d: d_hi.to_u64().expect("d fits in u64").max(1),
            aggregate: top.to_f64(),
            large_r,
        }
    }

    /// `c₄ = 4^{−2/j}2^{−i}` for display.
    pub fn c4(i: f64, j: f64) -> f64 {
        4f64.powf(-2.0 / j) * 2f64.powf(-i)
    }
}

/// Level of `J_{s−l}` for pair `t`, when it lies inside the run.
fn jlevel(tree: &Construction, t: usize, s: u32, l: u32) -> Option<u32> {
    let pp = &tree.params.pairs[t];
    let lv = pp.k + s.checked_sub(l)? * pp.m;
    (lv <= tree.depth()).then_some(lv)
}

fn whole_window(tree: &Construction) -> Interval {
    let w = tree.params.cell_width(0);
    let j0 = &tree.levels[0];
    Interval {
        lo: Rat::from_integer(BigInt::from(j0.first().unwrap_or(0))) * &w,
        hi: Rat::from_integer(BigInt::from(j0.last().map_or(0, |x| x + 1))) * &w,
    }
}

/// Indices `u` of the closed cells `[u·w, (u+1)·w]` containing `y ≥ 0`.
fn cells_of(y: &crate::exact::QuadraticSurd, w: &Rat) -> Vec<u64> {
    let v = y.mul_rat(&w.recip());
    let f = v.floor();
    let u = f.to_u64().unwrap_or(0);
    if v.to_rational().is_some_and(|r| r == Rat::from_integer(f)) && u > 0 {
        vec![u - 1, u]
    } else {
        vec![u]
    }
}

#[derive(Clone, Debug)]
pub struct PerLine {
    pub line: Line,
    pub count: u64,
    pub bound_ok: bool,
}

/// Removal count of `C(s, l, k)` lines through one `J_{s−l}`.
#[derive(Clone, Debug)]
pub struct CountReport {
    pub s: u32,
    pub l: u32,
    pub k: u32,
    pub cell: u64,
    pub lines: Vec<PerLine>,
    /// Candidates of `I⁻` met by some `Δ(L)`.
    pub removed: u64,
    pub context: CountingContext,
    pub within_aggregate: bool,
}

impl CountReport {
    pub fn per_line_ok(&self) -> bool {
        self.lines.iter().all(|p| p.bound_ok)
    }
}

/// Exact count of candidates at level `k_t + (s+1)m_t` met by `Δ(L)` for the
/// lines `L ∈ C(s, l, k)` whose trace lies in `J_{s−l}` (cell `cell`), for
/// every `(l, k, cell)` with at least one line. Cells with no such line
/// remove nothing and are omitted.
pub fn count_removed_oracle(tree: &Construction, t: usize, s: u32) -> Result<Vec<CountReport>> {
    let params = &tree.params;
    let pp = &params.pairs[t];
    if !pp.pair.is_weighted() {
        return Err(Error::InvalidPair("count oracle needs a weighted pair".into()));
    }
    let next = pp.k + (s + 1) * pp.m;
    if s == 0 || next > tree.depth() {
        return Err(Error::InvalidParam(format!(
            "level {next} for family {s} is outside the run"
        )));
    }
    let rt = params.r.pow(pp.m);
    let theta = &params.theta.value;
    let (cand, _) = candidates_at(params, &tree.levels, next);
    let wn = params.cell_width(next);
    let cells = params.cells_at(next);
    let mut groups: BTreeMap<(u32, u32, u64), Vec<Line>> = BTreeMap::new();
    for line in lines_through(&pp.pair, rt, s, &whole_window(tree), theta) {
        let Some(f) = classify(&line, &pp.pair, rt, s) else {
            continue;
        };
        let Some(lv) = jlevel(tree, t, s, f.l) else { continue };
        for g in cells_of(&line.trace(theta), &params.cell_width(lv)) {
            if tree.levels[lv as usize].contains(g) {
                groups.entry((f.l, f.k, g)).or_default().push(line);
            }
        }
    }
    let eps = params.epsilon_exp();
    let aggregate = PowerProduct::single(Rat::from_integer(BigInt::from(rt)), Exp::from_integer(1) - eps);
    let mut ctx: BTreeMap<u32, CountingContext> = BTreeMap::new();
    let mut out = Vec::new();
    for ((l, k, g), lines) in groups {
        let context = ctx
            .entry(k)
            .or_insert_with(|| CountingContext::new(rt, pp.alpha, eps, k))
            .clone();
        let mut per = Vec::new();
        let mut cut = Vec::new();
        for line in lines {
            let d = line.removal(&pp.pair, &pp.c, theta);
            let count = match d.touched_cells(&wn, cells) {
                Some((a, b)) => {
                    cut.push((a, b + 1));
                    cand.count_in(a, b)
                }
                None => 0,
            };
            per.push(PerLine {
                line,
                count,
                bound_ok: per_line_bound(pp, params.r, next, &d.height, count),
            });
        }
        let removed = cand.intersection(&crate::index_set::IndexSet::from_ranges(cut)).len();
        let within_aggregate = aggregate.cmp_rational(&Rat::from_integer(BigInt::from(removed))) != Ordering::Less;
        out.push(CountReport {
            s,
            l,
            k,
            cell: g,
            lines: per,
            removed,
            context,
            within_aggregate,
        });
    }
    Ok(out)
}

/// Two or more `C(s, l, k)` lines meeting one sub-interval `Ĩ` of a
/// `J_{s−l}` cut into `d` equal parts.
#[derive(Clone, Debug)]
pub struct Type2Config {
    pub t: usize,
    pub s: u32,
    pub l: u32,
    pub k: u32,
    pub cell: u64,
    pub sub: u64,
    /// `Ĩ`, which serves as the generic interval `J(s, τ)`.
    pub window: Interval,
    /// `τ = |Ĩ|·R_t^s`.
    pub tau: Rat,
    pub lines: Vec<Line>,
    pub concurrency: Concurrency,
    pub context: CountingContext,
}

impl Type2Config {
    pub fn point(&self) -> Option<RationalPoint> {
        match self.concurrency {
            Concurrency::Point(p) => Some(p),
            _ => None,
        }
    }

    /// Lines with `(A, B) ∈ F ∩ Λ(P)` (or `F_l` for `l > 0`).
    pub fn m_star(&self, tree: &Construction) -> Result<usize> {
        let Some(p) = self.point() else { return Ok(0) };
        let pp = &tree.params.pairs[self.t];
        let variant = if self.l == 0 { Variant::F } else { Variant::Band(self.l) };
        let rt = tree.params.r.pow(pp.m);
        let fig = FigureSpec::new(p, &pp.pair, rt, self.k, &self.tau, variant, &tree.params.theta.value)?;
        let lat = LatticePlane::new(p);
        Ok(self
            .lines
            .iter()
            .filter(|l| fig.contains(l.a, l.b) && lat.contains(l.a, l.b))
            .count())
    }
}

/// Every Type-2 configuration of family `s` of pair `t` over the cells of
/// the run.
pub fn type2_configurations(tree: &Construction, t: usize, s: u32) -> Result<Vec<Type2Config>> {
    let params = &tree.params;
    let pp = &params.pairs[t];
    if !pp.pair.is_weighted() || s == 0 {
        return Ok(Vec::new());
    }
    let rt = params.r.pow(pp.m);
    let theta = &params.theta.value;
    let eps = params.epsilon_exp();
    let rs = Rat::from_integer(crate::exact::ipow(&BigInt::from(rt), s as u64));
    let mut groups: BTreeMap<(u32, u32, u64), Vec<Line>> = BTreeMap::new();
    let mut ctx: BTreeMap<u32, CountingContext> = BTreeMap::new();
    for line in lines_through(&pp.pair, rt, s, &whole_window(tree), theta) {
        let Some(f) = classify(&line, &pp.pair, rt, s) else {
            continue;
        };
        let Some(lv) = jlevel(tree, t, s, f.l) else { continue };
        let c = ctx
            .entry(f.k)
            .or_insert_with(|| CountingContext::new(rt, pp.alpha, eps, f.k));
        let w = params.cell_width(lv) / Rat::from_integer(BigInt::from(c.d));
        for u in cells_of(&line.trace(theta), &w) {
            if tree.levels[lv as usize].contains(u / c.d) {
                groups.entry((f.l, f.k, u)).or_default().push(line);
            }
        }
    }
    let mut out = Vec::new();
    for ((l, k, u), lines) in groups {
        if lines.len() < 2 {
            continue;
        }
        let context = ctx[&k].clone();
        let lv = jlevel(tree, t, s, l).expect("grouped");
        let w = params.cell_width(lv) / Rat::from_integer(BigInt::from(context.d));
        let window = Interval::cell(u, &w);
        let concurrency = concurrency_of(&lines);
        out.push(Type2Config {
            t,
            s,
            l,
            k,
            cell: u / context.d,
            sub: u % context.d,
            tau: &w * &rs,
            window,
            lines,
            concurrency,
            context,
        });
    }
    Ok(out)
}
