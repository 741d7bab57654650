use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::build::{Construction, Interval};
use super::params::Params;
use crate::error::{Error, Result};
use crate::exact::{rat_ceil, rat_floor, Exp, PowerProduct, Rat};
use crate::index_set::IndexSet;

/// The auxiliary collections `M_{n,m}` and dumping grounds `R_{n,m}`.
#[derive(Clone, Debug)]
pub struct RefinementState {
    /// `m_sets[m][n] = M_{n,m}` for `n ≤ m`.
    pub m_sets: Vec<Vec<IndexSet>>,
    pub r_sets: Vec<Vec<IndexSet>>,
    /// `[2R^{1−ε/2}]`.
    pub threshold: u64,
    /// Dumping threshold actually applied, `min([2R^{1−ε/2}], R)`.
    pub applied_threshold: u64,
    /// Smallest `m` from which `M_{n,m}` no longer changes within `m_max`.
    pub stabilized_at: Vec<u32>,
    /// `M_n := M_{n,m_max}`.
    pub final_sets: Vec<IndexSet>,
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
}

impl RefinementState {
    pub fn all_nonempty(&self) -> bool {
        self.m_sets.iter().all(|row| row.iter().all(|s| !s.is_empty()))
    }
}

/// Parents in `parent` with at least `t` members of `child` below them.
fn heavy_parents(child: &IndexSet, r: u64, t: u64) -> IndexSet {
    IndexSet::from_ranges(
        child
            .child_count_runs(r)
            .into_iter()
            .filter(|x| x.2 >= t)
            .map(|x| (x.0, x.1))
            .collect(),
    )
}

/// Stages 1–5 of the refinement, for `m = 0, …, m_max`.
pub fn refine_collections(tree: &Construction, m_max: u32) -> Result<RefinementState> {
    if m_max > tree.depth() {
        return Err(Error::Precondition(format!(
            "tree has depth {}, refinement needs {m_max}",
            tree.depth()
        )));
    }
    let p = &tree.params;
    let r = p.r;
    let j = &tree.levels;
    let threshold = p.branching_threshold();
    let t = threshold.min(r);
    let mut m_sets = vec![vec![j[0].clone()]];
    let mut r_sets = vec![vec![IndexSet::new()]];
    for m in 1..=m_max as usize {
        let prev_m = &m_sets[m - 1];
        let prev_r = &r_sets[m - 1];
        let kids = prev_m[m - 1].subdivide(r);
        let mut mp: Vec<IndexSet> = vec![IndexSet::new(); m + 1];
        let mut rr: Vec<IndexSet> = vec![IndexSet::new(); m + 1];
        mp[m] = j[m].intersection(&kids);
        rr[m] = kids.difference(&j[m]);
        for u in (0..m).rev() {
            let dumped = heavy_parents(&rr[u + 1], r, t).intersection(&prev_m[u]);
            mp[u] = prev_m[u].difference(&dumped);
            rr[u] = prev_r[u].union(&dumped);
        }
        for u in 1..=m {
            mp[u] = mp[u].intersection(&mp[u - 1].subdivide(r));
        }
        m_sets.push(mp);
        r_sets.push(rr);
    }
    let mm = m_max as usize;
    let stabilized_at = (0..=mm)
        .map(|n| {
            let last = &m_sets[mm][n];
            let mut s = mm;
            while s > n && m_sets[s - 1][n] == *last {
                s -= 1;
            }
            s as u32
        })
        .collect();

    let mut c1 = true;
    let mut c2 = true;
    let mut c3 = true;
    let need = r.saturating_sub(threshold);
    for (m, row) in m_sets.iter().enumerate() {
        for n in 0..=m {
            c1 &= row[n].difference(&j[n]).is_empty();
            if n < m {
                c2 &= row[n + 1].parents(r).difference(&row[n]).is_empty();
                let counted = row[n + 1].child_count_runs(r);
                let covered =
                    IndexSet::from_ranges(counted.iter().filter(|x| x.2 >= need).map(|x| (x.0, x.1)).collect());
                c3 &= need == 0 || row[n].difference(&covered).is_empty();
            }
        }
    }
    Ok(RefinementState {
        final_sets: m_sets[mm].clone(),
        m_sets,
        r_sets,
        threshold,
        applied_threshold: t,
        stabilized_at,
        c1,
        c2,
        c3,
    })
}

/// Cells of one level with weight `1/denom` each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightRun {
    pub lo: u64,
    pub hi: u64,
    pub denom: u128,
}

#[derive(Clone, Debug)]
pub struct MeasureTree {
    pub r: u64,
    pub c1: Rat,
    pub epsilon: Rat,
    pub levels: Vec<Vec<WeightRun>>,
    /// Common denominator of the deepest level.
    pub lcm: u128,
    prefix: Vec<u128>,
    numer: Vec<u128>,
}

/// Recursive weights `μ(J₀) = 1/#M₀`, `μ(J_n) = μ(J_{n−1})/#children`.
pub fn assign_measure(sets: &[IndexSet], params: &Params) -> Result<MeasureTree> {
    let r = params.r;
    for (n, s) in sets.iter().enumerate() {
        if s.is_empty() {
            return Err(Error::EmptyCollection(n));
        }
    }
    let n0 = sets[0].len() as u128;
    let mut levels = vec![sets[0]
        .ranges()
        .iter()
        .map(|&(lo, hi)| WeightRun { lo, hi, denom: n0 })
        .collect::<Vec<_>>()];
    for n in 1..sets.len() {
        let parent = &levels[n - 1];
        let counts = sets[n].child_count_runs(r);
        let mut out: Vec<WeightRun> = Vec::new();
        let (mut ci, mut pi) = (0usize, 0usize);
        for &(lo, hi) in sets[n].ranges() {
            let mut k = lo;
            while k < hi {
                let par = k / r;
                while counts[ci].1 <= par {
                    ci += 1;
                }
                while pi < parent.len() && parent[pi].hi <= par {
                    pi += 1;
                }
                if pi == parent.len() || parent[pi].lo > par {
                    return Err(Error::Precondition(format!(
                        "level {n} is not nested in level {}",
                        n - 1
                    )));
                }
                let end = hi.min(counts[ci].1.min(parent[pi].hi) * r);
                let denom = parent[pi]
                    .denom
                    .checked_mul(counts[ci].2 as u128)
                    .expect("weight denominator fits in u128");
                match out.last_mut() {
                    Some(l) if l.hi == k && l.denom == denom => l.hi = end,
                    _ => out.push(WeightRun { lo: k, hi: end, denom }),
                }
                k = end;
            }
        }
        levels.push(out);
    }
    let deepest = levels.last().expect("non-empty");
    let lcm = deepest.iter().fold(1u128, |acc, w| acc.lcm(&w.denom));
    let numer: Vec<u128> = deepest.iter().map(|w| lcm / w.denom).collect();
    let mut prefix = Vec::with_capacity(deepest.len() + 1);
    prefix.push(0u128);
    for (w, v) in deepest.iter().zip(&numer) {
        let last = *prefix.last().expect("seeded");
        prefix.push(last + (w.hi - w.lo) as u128 * v);
    }
    Ok(MeasureTree {
        r,
        c1: params.c1.clone(),
        epsilon: params.epsilon.clone(),
        levels,
        lcm,
        prefix,
        numer,
    })
}

impl MeasureTree {
    pub fn depth(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    /// `Σ μ` over level `n`, exactly.
    pub fn level_sum(&self, n: usize) -> Rat {
        let mut s = Rat::zero();
        for w in &self.levels[n] {
            s += Rat::new(BigInt::from(w.hi - w.lo), BigInt::from(w.denom));
        }
        s
    }

    /// `d_n = c₁R^{−n}`.
    pub fn d(&self, n: u32) -> Rat {
        &self.c1 / Rat::from_integer(BigInt::from(self.r).pow(n))
    }

    /// Mass (numerator over `lcm`) of deepest cells `[0, k)`.
    fn cumulative(&self, k: u64, cursor: &mut usize) -> u128 {
        let runs = self.levels.last().expect("non-empty");
        if *cursor > 0 && runs.get(*cursor - 1).is_some_and(|w| w.hi > k) {
            *cursor = runs.partition_point(|w| w.hi <= k);
        }
        while *cursor < runs.len() && runs[*cursor].hi <= k {
            *cursor += 1;
        }
        let i = *cursor;
        if i == runs.len() || runs[i].lo >= k {
            return self.prefix[i];
        }
        self.prefix[i] + (k - runs[i].lo) as u128 * self.numer[i]
    }

    /// Deepest cells meeting the closed window `[lo, hi]`, as `[ka, kb)`.
    pub fn cell_range(&self, lo: &Rat, hi: &Rat) -> (u64, u64) {
        let w = self.d(self.depth());
        let a = rat_ceil(&(lo / &w)) - 1;
        let b = rat_floor(&(hi / &w)) + 1;
        let clamp = |v: BigInt| v.max(BigInt::zero()).to_u64().unwrap_or(u64::MAX);
        (clamp(a), clamp(b))
    }

    /// `Σ μ(J_N)` over deepest cells meeting `[lo, hi]`: an upper bound for
    /// `μ([lo, hi])`, as a numerator over `lcm`.
    pub fn mass_numer(&self, ka: u64, kb: u64, cursor: &mut usize) -> u128 {
        if kb <= ka {
            return 0;
        }
        let a = self.cumulative(ka, cursor);
        let b = self.cumulative(kb, cursor);
        b - a
    }

    pub fn mass(&self, lo: &Rat, hi: &Rat) -> Rat {
        let (ka, kb) = self.cell_range(lo, hi);
        let mut cur = 0;
        Rat::new(BigInt::from(self.mass_numer(ka, kb, &mut cur)), BigInt::from(self.lcm))
    }

    /// `a = 2c₁^{ε/2−1}R^{ε/2}`.
    pub fn holder_constant(&self) -> PowerProduct {
        let half = super::params::rat_to_exp(&self.epsilon) / 2;
        PowerProduct::single(self.c1.clone(), half - Exp::from_integer(1))
            .mul(&PowerProduct::single(Rat::from_integer(BigInt::from(self.r)), half))
            .mul_rat(&Rat::from_integer(BigInt::from(2)))
    }

    /// `a·|I|^{1−ε/2}`.
    pub fn holder_bound(&self, len: &Rat) -> PowerProduct {
        let half = super::params::rat_to_exp(&self.epsilon) / 2;
        self.holder_constant()
            .mul(&PowerProduct::single(len.clone(), Exp::from_integer(1) - half))
    }
}

#[derive(Clone, Debug)]
pub struct WindowCheck {
    pub interval: Interval,
    pub mass: Rat,
    /// `n` with `d_{n+1} ≤ |I| < d_n`.
    pub bracket: u32,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct MassReport {
    pub a_approx: f64,
    pub windows: u64,
    pub dyadic_lengths: Vec<(u32, bool)>,
    pub random_windows: usize,
    pub violations: Vec<WindowCheck>,
    /// `min log μ(I)/log |I|`.
    pub raw_exponent: f64,
    /// `min log(μ(I)/a)/log |I|`, compared against `1 − ε/2`.
    pub normalized_exponent: f64,
    pub target_exponent: f64,
}

impl MassReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn bracket(tree: &MeasureTree, len: &Rat) -> u32 {
    let mut n = 0;
    while n < tree.depth() && *len < tree.d(n + 1) {
        n += 1;
    }
    n
}

struct Exponents {
    raw: f64,
    norm: f64,
    log_a: f64,
}

impl Exponents {
    fn update(&mut self, mass: f64, len: f64) {
        if mass > 0.0 && len < 1.0 {
            self.raw = self.raw.min(mass.ln() / len.ln());
            self.norm = self.norm.min((mass.ln() - self.log_a) / len.ln());
        }
    }
}

/// Checks `μ(I) ≤ a|I|^{1−ε/2}` on every window `[j2^{−k}, (j+1)2^{−k}]` with
/// `d_N ≤ 2^{−k} < d₀`, plus `random` windows of length in `[d_N, d₀)`.
pub fn check_mass_bound(tree: &MeasureTree, random: usize, seed: u64) -> MassReport {
    let depth = tree.depth();
    let d0 = tree.d(0);
    let dn = tree.d(depth);
    let a = tree.holder_constant();
    let mut ex = Exponents {
        raw: f64::INFINITY,
        norm: f64::INFINITY,
        log_a: a.to_f64().ln(),
    };
    let mut violations = Vec::new();
    let mut dyadic_lengths = Vec::new();
    let mut windows = 0u64;
    let support_hi = {
        let runs = tree.levels.last().expect("non-empty");
        Rat::from_integer(BigInt::from(runs.last().map_or(0, |w| w.hi))) * &dn
    };

    let mut k = 0u32;
    while crate::exact::pow2(-(k as i64)) >= d0 {
        k += 1;
    }
    while crate::exact::pow2(-(k as i64)) >= dn {
        let len = crate::exact::pow2(-(k as i64));
        let count = rat_ceil(&(&support_hi / &len)).to_u64().unwrap_or(0);
        // Window j covers deepest cells [ceil(j·p/q) − 1, floor((j+1)·p/q) + 1).
        let cells_per = &len / &dn;
        let pq = (cells_per.numer().to_u128(), cells_per.denom().to_u128());
        let mut best = (0u128, 0u64);
        let mut cur = 0usize;
        if let (Some(pn), Some(qd)) = pq {
            for jj in 0..count {
                let lo = jj as u128 * pn;
                let hi = lo + pn;
                let ka = (lo.div_ceil(qd) as u64).saturating_sub(1);
                let kb = (hi / qd) as u64 + 1;
                let m = tree.mass_numer(ka, kb, &mut cur);
                if m > best.0 {
                    best = (m, jj);
                }
            }
        } else {
            for jj in 0..count {
                let lo = Rat::from_integer(BigInt::from(jj)) * &len;
                let (ka, kb) = tree.cell_range(&lo, &(&lo + &len));
                let m = tree.mass_numer(ka, kb, &mut cur);
                if m > best.0 {
                    best = (m, jj);
                }
            }
        }
        windows += count;
        let mass = Rat::new(BigInt::from(best.0), BigInt::from(tree.lcm));
        let ok = tree.holder_bound(&len).cmp_rational(&mass) != Ordering::Less;
        ex.update(crate::exact::rat_to_f64(&mass), crate::exact::rat_to_f64(&len));
        if !ok {
            let lo = Rat::from_integer(BigInt::from(best.1)) * &len;
            violations.push(WindowCheck {
                interval: Interval { hi: &lo + &len, lo },
                mass,
                bracket: bracket(tree, &len),
                ok,
            });
        }
        dyadic_lengths.push((k, ok));
        k += 1;
    }

    let a_low = a.lower_bound(32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale: u64 = 1 << 40;
    let span = crate::exact::rat_to_f64(&support_hi);
    let (lmin, lmax) = (crate::exact::rat_to_f64(&dn), crate::exact::rat_to_f64(&d0));
    let mut done = 0;
    while done < random {
        let len_f = (lmin.ln() + rng.gen::<f64>() * (lmax.ln() - lmin.ln())).exp();
        let len = Rat::new(BigInt::from((len_f * scale as f64) as u64), BigInt::from(scale));
        if len < dn || len >= d0 {
            continue;
        }
        let start = rng.gen::<f64>() * span;
        let lo = Rat::new(BigInt::from((start * scale as f64) as u64), BigInt::from(scale));
        let hi = &lo + &len;
        let (ka, kb) = tree.cell_range(&lo, &hi);
        let mut cur = 0;
        let m = tree.mass_numer(ka, kb, &mut cur);
        let mass = Rat::new(BigInt::from(m), BigInt::from(tree.lcm));
        // |I| < 1 gives a·|I| ≤ a·|I|^{1−ε/2}; the exact test runs only when
        // this sufficient condition fails.
        let ok = mass <= &a_low * &len || tree.holder_bound(&len).cmp_rational(&mass) != Ordering::Less;
        ex.update(crate::exact::rat_to_f64(&mass), crate::exact::rat_to_f64(&len));
        if !ok {
            violations.push(WindowCheck {
                bracket: bracket(tree, &len),
                interval: Interval { lo, hi },
                mass,
                ok,
            });
        }
        done += 1;
    }
    MassReport {
        a_approx: a.to_f64(),
        windows: windows + random as u64,
        dyadic_lengths,
        random_windows: random,
        violations,
        raw_exponent: ex.raw,
        normalized_exponent: ex.norm,
        target_exponent: 1.0 - crate::exact::rat_to_f64(&tree.epsilon) / 2.0,
    }
}

#[derive(Clone, Debug)]
pub struct AdversaryReport {
    pub trials: usize,
    pub choose: u64,
    /// Trials with `T_n ∩ J_n = ∅`, per level `n`.
    pub violations: Vec<usize>,
    /// Smallest `#(T_n ∩ J_n)` seen per level.
    pub min_hits: Vec<u64>,
}

impl AdversaryReport {
    pub fn total_violations(&self) -> usize {
        self.violations.iter().sum()
    }
}

/// Random adversaries keep `[2R^{1−ε/2}]` of the `R` children of every
/// chosen interval below a random `J₀`; reports whether `T_n` meets `J_n`.
pub fn ubiquity_adversary_test(
    tree: &Construction,
    epsilon: Option<&Rat>,
    trials: usize,
    seed: u64,
) -> AdversaryReport {
    let p = &tree.params;
    let r = p.r;
    let choose = match epsilon {
        Some(e) => {
            let half = super::params::rat_to_exp(e) / 2;
            PowerProduct::single(Rat::from_integer(BigInt::from(r)), Exp::from_integer(1) - half)
                .mul_rat(&Rat::from_integer(BigInt::from(2)))
                .floor()
                .to_u64()
                .unwrap_or(u64::MAX)
        }
        None => p.branching_threshold(),
    }
    .min(r);
    let depth = tree.depth() as usize;
    let mut violations = vec![0usize; depth + 1];
    let mut min_hits = vec![u64::MAX; depth + 1];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let roots: Vec<u64> = tree.levels[0].iter().take(1 << 20).collect();
    for _ in 0..trials {
        let j0 = roots[rng.gen_range(0..roots.len())];
        let mut t = vec![j0];
        for n in 0..=depth {
            if n > 0 {
                let mut next = Vec::with_capacity(t.len() * choose as usize);
                for &parent in &t {
                    let picks = rand::seq::index::sample(&mut rng, r as usize, choose as usize);
                    let mut kids: Vec<u64> = picks.iter().map(|i| parent * r + i as u64).collect();
                    kids.sort_unstable();
                    next.extend(kids);
                }
                t = next;
            }
            let hits = t.iter().filter(|&&k| tree.levels[n].contains(k)).count() as u64;
            if hits == 0 {
                violations[n] += 1;
            }
            min_hits[n] = min_hits[n].min(hits);
        }
    }
    AdversaryReport {
        trials,
        choose,
        violations,
        min_hits,
    }
}
