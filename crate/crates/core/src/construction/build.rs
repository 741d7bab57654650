use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::params::{PairParams, Params};
use crate::error::{Error, Result};
use crate::exact::{ipow, Exp, PowerProduct, QuadraticSurd, Rat};
use crate::index_set::IndexSet;
use crate::lines::{enumerate_rationals, enumerate_removals, Height, Pair, RemovalInterval, Source};

/// One line (or rational) that hit candidate cells at some level.
#[derive(Clone, Debug)]
pub struct LineHit {
    pub pair: usize,
    pub source: Source,
    pub height: Height,
    /// Embedded level `s` of the family the line belongs to.
    pub family: u32,
    /// First and last touched cell at the target level.
    pub cells: (u64, u64),
    /// Candidate cells the line removed.
    pub count: u64,
    pub bound_ok: bool,
}

#[derive(Clone, Debug, Default)]
pub struct PairReport {
    pub pair: usize,
    pub family: Option<u32>,
    pub trim: u64,
    pub trimmed: u64,
    pub lines: usize,
    pub removing_lines: usize,
    pub removed: u64,
}

#[derive(Clone, Debug)]
pub struct LevelReport {
    pub n: u32,
    pub parents: u64,
    /// `R·#J_{n−1}` before trimming.
    pub subdivided: u64,
    /// After trimming, before removal.
    pub candidates: u64,
    pub survivors: u64,
    pub pairs: Vec<PairReport>,
    pub hits: Vec<LineHit>,
}

impl LevelReport {
    pub fn bound_violations(&self) -> usize {
        self.hits.iter().filter(|h| !h.bound_ok).count()
    }
}

/// J₀ … J_N as cell-index sets on the grids of width `c₁R^{−n}`.
#[derive(Clone, Debug)]
pub struct Construction {
    pub params: Params,
    pub levels: Vec<IndexSet>,
    pub reports: Vec<LevelReport>,
    /// First level that came out empty, if any.
    pub died_at: Option<u32>,
}

/// The deepest level screened one family further, against `C_t(N)`:
/// every member avoids every `Δ_t(L)` with `H < R_t^{s+1}` at the family
/// levels reached.
#[derive(Clone, Debug)]
pub struct Frontier {
    pub n: u32,
    pub cells: IndexSet,
    pub report: LevelReport,
}

/// `J₀`: `[c₁^{−1}]` cells from `y = 0`, optionally restricted to a
/// sub-range of indices.
pub fn init_level0(params: &Params, scope: Option<(u64, u64)>) -> IndexSet {
    let (lo, hi) = scope.unwrap_or((0, params.n0));
    IndexSet::range(lo.min(params.n0), hi.min(params.n0))
}

/// Exact test of `count ≤ 2R_t^{e}/H + 2` with `e = (n − k_t)/m_t − 1 − α_t`
/// for cells of width `c₁R^{−n}`.
pub fn per_line_bound(pp: &PairParams, r: u64, level: u32, h: &Height, count: u64) -> bool {
    if count <= 2 {
        return true;
    }
    let e = Exp::new(level as i64 - pp.k as i64, pp.m as i64) - Exp::from_integer(1) - pp.alpha;
    let rt = Rat::from_integer(ipow(&BigInt::from(r), pp.m as u64));
    let rhs = PowerProduct::single(rt, e);
    let lhs = h
        .to_power()
        .mul_rat(&Rat::new(BigInt::from(count - 2), BigInt::from(2)));
    lhs.cmp_exact(&rhs) != Ordering::Greater
}

/// `Δ` intervals of family `s` of pair `pp` meeting `[lo, hi]`.
pub fn family_removals(
    pp: &PairParams,
    r: u64,
    s: u32,
    lo: &Rat,
    hi: &Rat,
    theta: &QuadraticSurd,
) -> Vec<RemovalInterval> {
    let rt = r.checked_pow(pp.m).expect("R_t fits in u64");
    match &pp.pair {
        Pair::Vertical => Vec::new(),
        Pair::RationalFamily => enumerate_rationals(rt, s, lo, hi, &pp.c)
            .into_iter()
            .map(|(p, q)| RemovalInterval::rational(p, q, &pp.c))
            .collect(),
        pair => enumerate_removals(pair, rt, s, lo, hi, &pp.c, theta),
    }
}

/// Removes from `cand` (cells at `level`) every cell met by a `Δ` of family
/// `s` of pair `t`, recording per-line hits.
fn screen(
    params: &Params,
    t: usize,
    s: u32,
    level: u32,
    cand: &IndexSet,
    hits: &mut Vec<LineHit>,
    report: &mut PairReport,
) -> IndexSet {
    let (Some(first), Some(last)) = (cand.first(), cand.last()) else {
        return cand.clone();
    };
    let pp = &params.pairs[t];
    let w = params.cell_width(level);
    let cells = params.cells_at(level);
    let lo = Rat::from_integer(BigInt::from(first)) * &w;
    let hi = Rat::from_integer(BigInt::from(last + 1)) * &w;
    let deltas = family_removals(pp, params.r, s, &lo, &hi, &params.theta.value);
    report.lines += deltas.len();
    let found: Vec<LineHit> = deltas
        .par_iter()
        .filter_map(|d| {
            let (a, b) = d.touched_cells(&w, cells)?;
            let count = cand.count_in(a, b);
            (count > 0).then(|| LineHit {
                pair: t,
                source: d.source,
                height: d.height.clone(),
                family: s,
                cells: (a, b),
                count,
                bound_ok: per_line_bound(pp, params.r, level, &d.height, count),
            })
        })
        .collect();
    let cut = IndexSet::from_ranges(found.iter().map(|h| (h.cells.0, h.cells.1 + 1)).collect());
    let out = cand.difference(&cut);
    report.removing_lines += found.len();
    report.removed += cand.len() - out.len();
    hits.extend(found);
    out
}

/// `I⁻` at level `next`: the children of `J_{next−1}` that survive trimming,
/// with the per-pair trimmed counts.
pub fn candidates_at(params: &Params, levels: &[IndexSet], next: u32) -> (IndexSet, Vec<u64>) {
    let mut cand = levels[next as usize - 1].subdivide(params.r);
    let mut trimmed = vec![0; params.pairs.len()];
    // Trimming starts once a pair has an embedded parent level to trim in.
    for (t, pp) in params.pairs.iter().enumerate() {
        if pp.trim == 0 || !pp.is_active() || !pp.is_embedded_level(next) || next < pp.k + 2 * pp.m {
            continue;
        }
        let anc = &levels[(next - pp.m) as usize];
        let block = params.r.checked_pow(pp.m).expect("R_t fits in u64");
        let before = cand.len();
        cand = cand.trim_blocks(anc, block, pp.trim);
        trimmed[t] = before - cand.len();
    }
    (cand, trimmed)
}

/// `J_{n+1}` from `J_n`: subdivide, trim, and remove every candidate met by
/// the families acting at level `n + 1`.
pub fn build_level(params: &Params, levels: &[IndexSet]) -> (IndexSet, LevelReport) {
    let n = levels.len() as u32 - 1;
    let next = n + 1;
    let jn = &levels[n as usize];
    let subdivided = jn.len() * params.r;
    let (mut cand, trimmed) = candidates_at(params, levels, next);
    let mut pairs: Vec<PairReport> = params
        .pairs
        .iter()
        .enumerate()
        .map(|(t, pp)| PairReport {
            pair: t,
            family: pp.family_for_level(next),
            trim: pp.trim,
            trimmed: trimmed[t],
            ..Default::default()
        })
        .collect();
    let candidates = cand.len();

    let mut hits = Vec::new();
    for (t, pp) in params.pairs.iter().enumerate() {
        if !pp.is_active() || !pp.is_embedded_level(next) {
            continue;
        }
        let Some(s) = pp.family_for_level(next).filter(|&s| s >= 1) else {
            continue;
        };
        cand = screen(params, t, s, next, &cand, &mut hits, &mut pairs[t]);
    }
    let report = LevelReport {
        n: next,
        parents: jn.len(),
        subdivided,
        candidates,
        survivors: cand.len(),
        pairs,
        hits,
    };
    (cand, report)
}

/// Options for a construction run.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Restrict `J₀` to cells `[lo, hi)`.
    pub scope: Option<(u64, u64)>,
}

pub fn run_construction(params: &Params, depth: u32, opts: &RunOptions) -> Result<Construction> {
    if depth < 1 {
        return Err(Error::InvalidParam("depth must be at least 1".into()));
    }
    let fits = params
        .r
        .checked_pow(depth)
        .and_then(|x| x.checked_mul(params.n0))
        .is_some();
    if !fits {
        return Err(Error::InvalidParam(
            "grid at this depth exceeds 64-bit cell indices".into(),
        ));
    }
    let mut levels = vec![init_level0(params, opts.scope)];
    let mut reports = Vec::new();
    let mut died_at = None;
    for _ in 0..depth {
        let (next, rep) = build_level(params, &levels);
        let empty = next.is_empty();
        levels.push(next);
        reports.push(rep);
        if empty {
            died_at = Some(levels.len() as u32 - 1);
            break;
        }
    }
    Ok(Construction {
        params: params.clone(),
        levels,
        reports,
        died_at,
    })
}

impl Construction {
    pub fn depth(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    pub fn deepest(&self) -> &IndexSet {
        self.levels.last().expect("J₀ always present")
    }

    /// Screens `J_N` against the next family of every pair without
    /// subdividing.
    pub fn frontier(&self) -> Frontier {
        let params = &self.params;
        let n = self.depth();
        let mut cand = self.deepest().clone();
        let mut pairs: Vec<PairReport> = Vec::new();
        let mut hits = Vec::new();
        for (t, pp) in params.pairs.iter().enumerate() {
            let s = pp.family_for_level(n + pp.m).filter(|&s| s >= 1);
            let mut rep = PairReport {
                pair: t,
                family: s,
                trim: 0,
                ..Default::default()
            };
            if let (true, Some(s)) = (pp.is_active(), s) {
                cand = screen(params, t, s, n, &cand, &mut hits, &mut rep);
            }
            pairs.push(rep);
        }
        let report = LevelReport {
            n,
            parents: self.deepest().len(),
            subdivided: self.deepest().len(),
            candidates: self.deepest().len(),
            survivors: cand.len(),
            pairs,
            hits,
        };
        Frontier { n, cells: cand, report }
    }

    /// All line-family heights handled for pair `t` by `J_N` (`None`) or by
    /// the frontier: lines with `H < R_t^{bound}`.
    pub fn height_exponent(&self, t: usize, frontier: bool) -> u32 {
        let pp = &self.params.pairs[t];
        let n = self.depth();
        let top = if frontier {
            pp.family_for_level(n + pp.m)
        } else {
            pp.family_for_level(n)
        };
        top.unwrap_or(0)
    }
}

/// Closed interval with exact endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn cell(k: u64, w: &Rat) -> Self {
        let lo = Rat::from_integer(BigInt::from(k)) * w;
        Interval { hi: &lo + w, lo }
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2))
    }

    pub fn length(&self) -> Rat {
        &self.hi - &self.lo
    }
}

/// One family a point certificate was checked against.
#[derive(Clone, Debug)]
pub struct FamilyCheck {
    pub pair: Pair,
    pub c: Rat,
    /// Lines with `H < R_t^{height_exp}` are avoided.
    pub r_t: u64,
    pub height_exp: u32,
}

#[derive(Clone, Debug)]
pub struct PointCertificate {
    pub level: u32,
    pub index: u64,
    pub interval: Interval,
    pub point: Rat,
    pub theta: String,
    pub families: Vec<FamilyCheck>,
}

impl PointCertificate {
    /// Decimal rendering of the midpoint to `digits` places, truncated.
    pub fn decimal(&self, digits: usize) -> String {
        render_decimal(&self.point, digits)
    }
}

pub fn render_decimal(x: &Rat, digits: usize) -> String {
    let neg = x < &Rat::zero();
    let scale = ipow(&BigInt::from(10), digits as u64);
    let v = crate::exact::rat_floor(&(if neg { -x } else { x.clone() } * Rat::from_integer(scale.clone())));
    let ip = &v / &scale;
    let fp = (&v % &scale).to_string();
    let pad = "0".repeat(digits.saturating_sub(fp.len()));
    format!("{}{ip}.{pad}{fp}", if neg { "-" } else { "" })
}

/// Leftmost frontier cell and its midpoint.
pub fn extract_point(tree: &Construction) -> Result<(PointCertificate, Frontier)> {
    let frontier = tree.frontier();
    let k = frontier
        .cells
        .first()
        .ok_or(Error::EmptyCollection(frontier.n as usize))?;
    let w = tree.params.cell_width(frontier.n);
    let interval = Interval::cell(k, &w);
    let families = tree
        .params
        .active_pairs()
        .map(|(t, pp)| FamilyCheck {
            pair: pp.pair.clone(),
            c: pp.c.clone(),
            r_t: tree.params.r.pow(pp.m),
            height_exp: tree.height_exponent(t, true),
        })
        .collect();
    let cert = PointCertificate {
        level: frontier.n,
        index: k,
        point: interval.midpoint(),
        interval,
        theta: tree.params.theta.source.clone(),
        families,
    };
    Ok((cert, frontier))
}
