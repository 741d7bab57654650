use std::cmp::Ordering;
use std::path::PathBuf;

use badweave::construction::{
    assign_measure, check_mass_bound, extract_point, refine_collections, run_construction, Construction, Interval,
    RunOptions,
};
use badweave::exact::{parse_rational, parse_real, Exp, PowerProduct, QuadraticSurd, Rat, ThetaSpec};
use badweave::geometry::{
    concurrency_check, count_removed_oracle, find_l0, lines_through, pigeonhole_applies, pigeonhole_clauses,
    pigeonhole_line, type2_configurations, Concurrency, FigureSpec, Prop1Input, Prop1Report, Prop1Verdict,
    RationalPoint, Variant,
};
use badweave::lines::{classify, Height, Line, Source};
use badweave::transference::{
    check_dual, check_simultaneous, dual_from_simultaneous, is_simultaneous_witness, simultaneous_from_dual, DualRange,
    DualResult, SimultaneousResult,
};
use badweave::Pair;
use clap::Args;
use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{parse_pair, Common, RunConfig};
use crate::emit::{dual_witness, rat, simultaneous_witness, Sink};
use crate::Failure;

#[derive(Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// JSON-lines file holding a point certificate (the last one is used).
    #[arg(long)]
    pub point_from: Option<PathBuf>,
    /// A rational y on the line x = θ, checked for the configured pairs.
    #[arg(long)]
    pub point: Option<String>,
    /// Badness constant for `--point`.
    #[arg(long)]
    pub c: Option<String>,
}

#[derive(Args)]
pub struct Theorem4Args {
    #[command(flatten)]
    pub common: Common,
    /// Random windows per (n, l).
    #[arg(long, default_value_t = 100)]
    pub windows: usize,
    #[arg(long, default_value_t = 1)]
    pub l_max: u32,
}

#[derive(Args)]
pub struct Prop1Args {
    #[command(flatten)]
    pub common: Common,
    /// Rational point "p,r,q" standing for (p/q, r/q); without it the
    /// Type-2 configurations of a construction are used.
    #[arg(long)]
    pub point: Option<String>,
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long)]
    pub c: Option<String>,
    /// Largest admissible size of F ∩ Λ.
    #[arg(long, default_value_t = 1 << 22)]
    pub cap: i64,
}

#[derive(Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub common: Common,
    /// Random windows on top of the dyadic ones.
    #[arg(long, default_value_t = 10_000)]
    pub windows: usize,
}

#[derive(Args)]
pub struct TransferArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    #[arg(long)]
    pub c: String,
    /// Simultaneous witness to convert; the smallest q ≤ Q is searched for otherwise.
    #[arg(long)]
    pub q0: Option<u64>,
    /// Dual witness "u1,u2" (form u1·x + u2·y) to convert instead.
    #[arg(long)]
    pub dual: Option<String>,
    /// Node cap of the witness search.
    #[arg(long, default_value_t = 1 << 24)]
    pub cap: u64,
}

#[derive(Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub common: Common,
    /// Rational point "p,r,q" whose F ∩ Λ is written to figure.csv.
    #[arg(long)]
    pub figure_point: Option<String>,
    #[arg(long, default_value = "1")]
    pub tau: String,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long, default_value_t = 1 << 22)]
    pub cap: i64,
}

fn config_err(key: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Config(format!("{key}: {msg}"))
}

fn parse_rat(key: &str, s: &str) -> Result<Rat, Failure> {
    parse_rational(s).map_err(|e| config_err(key, e))
}

fn parse_point(key: &str, s: &str) -> Result<RationalPoint, Failure> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| config_err(key, format!("{s:?} is not p,r,q")))
        })
        .collect::<Result<_, _>>()?;
    match v[..] {
        [p, r, q] => RationalPoint::new(p, r, q).map_err(|e| config_err(key, e)),
        _ => Err(config_err(key, format!("{s:?} is not p,r,q"))),
    }
}

/// Exact rational when possible, otherwise a dyadic upper bound at `2^−64`.
fn power_json(p: &PowerProduct) -> Value {
    match p.to_rational() {
        Some(r) => json!({"value": r.to_string(), "exact": true}),
        None => json!({"value": p.upper_bound(64).to_string(), "exact": false}),
    }
}

fn line_json(l: &Line) -> Value {
    json!({"A": l.a, "B": l.b, "C": l.c})
}

fn build(cfg: &RunConfig) -> Result<Construction, Failure> {
    Ok(run_construction(&cfg.params()?, cfg.depth, &RunOptions::default())?)
}

fn weighted(tree: &Construction) -> impl Iterator<Item = usize> + '_ {
    (0..tree.params.pairs.len()).filter(|&t| tree.params.pairs[t].pair.is_weighted())
}

pub fn construct(a: &ConstructArgs) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(&a.common)?;
    let tree = build(&cfg)?;
    let p = &tree.params;
    let mut out = Sink::open(cfg.out.as_deref())?;
    let pairs: Vec<Value> = p
        .pairs
        .iter()
        .map(|pp| {
            json!({
                "pair": pp.pair.to_string(), "alpha": pp.alpha.to_string(), "lambda": pp.lambda.map(|l| l.to_string()),
                "m": pp.m, "k": pp.k, "c1": rat(&pp.c1), "c": rat(&pp.c), "trim": pp.trim, "trim_viable": pp.trim_viable,
            })
        })
        .collect();
    out.line(&json!({
        "kind": "params", "R": p.r, "theta": p.theta.source, "c1": rat(&p.c1), "epsilon": rat(&p.epsilon),
        "n0": p.n0, "depth": cfg.depth, "pairs": pairs,
    }))?;
    for (n, level) in tree.levels.iter().enumerate() {
        let ranges: Vec<[u64; 2]> = level.ranges().iter().map(|&(lo, hi)| [lo, hi]).collect();
        out.line(&json!({"kind": "level", "n": n, "cells": level.len(), "width": rat(&p.cell_width(n as u32)), "ranges": ranges}))?;
    }
    for rep in &tree.reports {
        out.line(&json!({
            "kind": "level_report", "n": rep.n, "parents": rep.parents, "candidates": rep.candidates,
            "survivors": rep.survivors, "removing_lines": rep.hits.len(), "bound_violations": rep.bound_violations(),
        }))?;
    }
    if let Some(n) = tree.died_at {
        out.finish()?;
        return Err(Failure::Empty(format!("J_{n} is empty")));
    }
    let (cert, _) = extract_point(&tree)?;
    let families: Vec<Value> = cert
        .families
        .iter()
        .map(|f| {
            let h_max = f.r_t.checked_pow(f.height_exp);
            json!({"pair": f.pair.to_string(), "c": rat(&f.c), "R_t": f.r_t, "height_exp": f.height_exp, "Hmax": h_max})
        })
        .collect();
    let record = json!({
        "kind": "certificate", "theta": cert.theta, "level": cert.level, "index": cert.index,
        "interval": [rat(&cert.interval.lo), rat(&cert.interval.hi)], "point": rat(&cert.point),
        "decimal": cert.decimal(20), "families": families,
    });
    out.line(&record)?;
    out.finish()?;
    if let Some(path) = &cfg.cert {
        let mut c = Sink::open(Some(path))?;
        c.line(&record)?;
        c.finish()?;
    }
    Ok(())
}

/// `c' = c·2^{−(1/i+1/j+1)}` and `max{c'^{1/i}, c'^{1/j}}`: a point that is
/// dual badly approximable with `c` has no simultaneous solution with `c'`.
fn simultaneous_threshold(c: &Rat, pair: &Pair) -> Rat {
    let (i, j) = (pair.i(), pair.j());
    let e = i.recip() + j.recip() + Exp::from_integer(1);
    let cp = PowerProduct::single(Rat::from_integer(2.into()), -e).mul_rat(c);
    let (a, b) = (cp.pow(i.recip()), cp.pow(j.recip()));
    let m = if a.cmp_exact(&b) == Ordering::Less { b } else { a };
    m.to_rational().unwrap_or_else(|| m.upper_bound(64))
}

struct Family {
    pair: Pair,
    c: Rat,
    h_max: u64,
}

fn read_certificate(path: &PathBuf) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    text.lines()
        .filter_map(|l| serde_json::from_str::<Value>(l).ok()).rfind(|v| v["kind"] == "certificate")
        .ok_or_else(|| config_err("point-from", format!("{} holds no certificate", path.display())))
}

pub fn verify(a: &VerifyArgs) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(&a.common)?;
    let (theta, y, families) = match (&a.point_from, &a.point) {
        (Some(path), _) => {
            let cert = read_certificate(path)?;
            let field = |k: &str| {
                cert[k]
                    .as_str()
                    .map(str::to_string)
                    .ok_or_else(|| config_err(k, "missing from certificate"))
            };
            let theta = ThetaSpec::parse(&field("theta")?).map_err(|e| config_err("theta", e))?;
            let y = parse_rat("point", &field("point")?)?;
            let mut fams = Vec::new();
            for f in cert["families"].as_array().into_iter().flatten() {
                let pair = parse_pair(f["pair"].as_str().unwrap_or_default())?;
                let c = parse_rat("families.c", f["c"].as_str().unwrap_or_default())?;
                let h_max = cfg
                    .h_max
                    .or(f["Hmax"].as_u64())
                    .ok_or_else(|| config_err("Hmax", "not given and not in certificate"))?;
                fams.push(Family { pair, c, h_max });
            }
            (theta, y, fams)
        }
        (None, Some(pt)) => {
            let c = parse_rat(
                "c",
                a.c.as_deref().ok_or_else(|| config_err("c", "required with --point"))?,
            )?;
            let h_max = cfg.h_max.unwrap_or(4096);
            let fams = cfg
                .pairs
                .iter()
                .map(|p| Family {
                    pair: p.clone(),
                    c: c.clone(),
                    h_max,
                })
                .collect();
            (cfg.theta.clone(), parse_rat("point", pt)?, fams)
        }
        (None, None) => return Err(config_err("verify", "give --point-from or --point")),
    };
    let q_max = cfg.q_max.unwrap_or(10_000);
    let x = theta.value.clone();
    let yq = QuadraticSurd::from_rational(&y);
    let mut out = Sink::open(cfg.out.as_deref())?;
    let mut failed = Vec::new();
    for f in &families {
        let dual = check_dual(&x, &yq, &f.pair, &f.c, DualRange::Height(f.h_max))?;
        let dual_json = match dual {
            DualResult::Pass => json!("pass"),
            DualResult::Witness(a, b) => {
                failed.push(format!("dual witness ({a}, {b}) for {}", f.pair));
                dual_witness(a, b, &x, &yq, &f.pair)
            }
        };
        let (sim_json, constant) = if f.pair.is_weighted() {
            let k = simultaneous_threshold(&f.c, &f.pair);
            let r = match check_simultaneous(&x, &yq, &f.pair, &k, q_max) {
                SimultaneousResult::Pass => json!("pass"),
                SimultaneousResult::Witness(q) => {
                    failed.push(format!("simultaneous witness q = {q} for {}", f.pair));
                    simultaneous_witness(q, &x, &yq, &f.pair)
                }
            };
            (r, json!(k.to_string()))
        } else {
            (json!("skipped"), Value::Null)
        };
        out.line(&json!({
            "kind": "verify", "pair": f.pair.to_string(), "c": rat(&f.c), "Hmax": f.h_max, "Q": q_max,
            "dual": dual_json, "simultaneous": sim_json, "simultaneous_constant": constant,
        }))?;
    }
    out.finish()?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Falsified(failed.join("; ")))
    }
}

pub fn check_theorem4(a: &Theorem4Args) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(&a.common)?;
    let p = cfg.params()?;
    let th = &p.theta.value;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Sink::open(cfg.out.as_deref())?;
    let whole = Interval {
        lo: Rat::from_integer(0.into()),
        hi: Rat::from_integer(1.into()),
    };
    let mut violations = 0;
    for pp in p.pairs.iter().filter(|pp| pp.pair.is_weighted()) {
        let pair = &pp.pair;
        let rt = p.r.pow(pp.m);
        let li = pp.lambda.expect("weighted") * pair.i();
        let four_c1 = &p.c1 * Rat::from_integer(4.into());
        let teq2 = PowerProduct::single(Rat::from_integer(rt.into()), li)
            .mul_rat(&four_c1)
            .cmp_rational(&Rat::from_integer(1.into()));
        out.line(
            &json!({"kind": "theorem4_hypothesis", "pair": pair.to_string(), "holds": teq2 != Ordering::Greater}),
        )?;
        for n in 1..=cfg.depth {
            let pool = lines_through(pair, rt, n, &whole, th);
            for l in 0..=a.l_max.min(n) {
                let len = &p.c1 / Rat::from_integer(BigInt::from(rt).pow(n - l));
                let lf = badweave::exact::rat_to_f64(&len);
                let members: Vec<&Line> = pool
                    .iter()
                    .filter(|x| classify(x, pair, rt, n).is_some_and(|f| f.l == l))
                    .collect();
                let mut starts = Vec::new();
                for trial in 0..a.windows {
                    if trial % 2 == 0 || members.is_empty() {
                        starts.push(rng.gen_range(0.0..(1.0 - lf).max(0.0)));
                    } else {
                        let y = members[rng.gen_range(0..members.len())].trace(th).to_f64();
                        starts.push(y - rng.gen_range(0.0..1.0) * lf);
                    }
                }
                let mut ts: Vec<f64> = members.iter().map(|m| m.trace(th).to_f64()).collect();
                ts.sort_by(f64::total_cmp);
                let close: Vec<f64> = ts
                    .windows(2)
                    .filter(|w| w[1] - w[0] < lf)
                    .map(|w| (w[0] + w[1] - lf) / 2.0)
                    .collect();
                let n_close = close.len();
                starts.extend(close);
                let (mut multi, mut bad) = (0, 0);
                for s in &starts {
                    let lo = Rat::new(
                        BigInt::from((s.max(0.0) * 2f64.powi(50)) as i64),
                        BigInt::from(1u64 << 50),
                    );
                    let window = Interval { hi: &lo + &len, lo };
                    let rep = concurrency_check(pair, rt, n, l, &window, th);
                    multi += (rep.lines.len() >= 2) as usize;
                    if let Concurrency::Triple(l1, l2, l3) = &rep.verdict {
                        bad += 1;
                        out.line(&json!({
                            "kind": "violation", "pair": pair.to_string(), "n": n, "l": l,
                            "window": [rat(&window.lo), rat(&window.hi)], "lines": [line_json(l1), line_json(l2), line_json(l3)],
                        }))?;
                    } else if rep.verdict.is_violation() {
                        bad += 1;
                        out.line(&json!({"kind": "violation", "pair": pair.to_string(), "n": n, "l": l, "verdict": format!("{:?}", rep.verdict)}))?;
                    }
                }
                violations += bad;
                out.line(&json!({
                    "kind": "theorem4", "pair": pair.to_string(), "n": n, "l": l, "windows": starts.len(),
                    "close_pairs": n_close, "multi_line": multi, "violations": bad,
                }))?;
            }
        }
    }
    out.finish()?;
    if violations > 0 {
        return Err(Failure::Falsified(format!(
            "{violations} windows with non-concurrent lines"
        )));
    }
    Ok(())
}

pub fn check_counts(c: &Common) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(c)?;
    let tree = build(&cfg)?;
    let mut out = Sink::open(cfg.out.as_deref())?;
    let mut bad_lines = 0;
    for t in weighted(&tree).collect::<Vec<_>>() {
        let pp = &tree.params.pairs[t];
        let mut s = 1;
        while pp.k + (s + 1) * pp.m <= tree.depth() {
            let reps = count_removed_oracle(&tree, t, s)?;
            let violations: usize = reps
                .iter()
                .map(|r| r.lines.iter().filter(|l| !l.bound_ok).count())
                .sum();
            for r in reps.iter().filter(|r| !r.per_line_ok()) {
                for pl in r.lines.iter().filter(|l| !l.bound_ok) {
                    out.line(
                        &json!({"kind": "per_line_violation", "pair": pp.pair.to_string(), "s": s, "l": r.l, "k": r.k,
                        "cell": r.cell, "line": line_json(&pl.line), "count": pl.count}),
                    )?;
                }
            }
            let max_removed = reps.iter().map(|r| r.removed).max().unwrap_or(0);
            let over = reps.iter().filter(|r| !r.within_aggregate).count();
            let aggregate = reps.first().map(|r| r.context.aggregate);
            out.line(&json!({
                "kind": "counts", "pair": pp.pair.to_string(), "s": s, "groups": reps.len(), "max_removed": max_removed,
                "aggregate_bound": aggregate, "groups_over_aggregate": over, "per_line_violations": violations,
            }))?;
            bad_lines += violations;
            s += 1;
        }
    }
    out.finish()?;
    if bad_lines > 0 {
        return Err(Failure::Falsified(format!(
            "{bad_lines} lines above the per-line bound"
        )));
    }
    Ok(())
}

fn prop1_json(rep: &Prop1Report, extra: Value) -> Value {
    let attempt = rep.attempt.as_ref().map(|c| {
        json!({
            "case": format!("{:?}", c.case), "line": line_json(&c.line), "height": c.height.to_f64(),
            "from_pigeonhole": c.from_pigeonhole, "in_collection": c.in_collection, "cone": c.cone, "minimal": c.minimal,
        })
    });
    json!({
        "kind": "prop1", "point": [rep.point.p, rep.point.r, rep.point.q], "verdict": format!("{:?}", rep.verdict()),
        "preconditions": {"tau": rep.pre.tau, "delta": rep.pre.delta, "lines": rep.pre.lines},
        "figure_points": rep.figure.len(), "attempt": attempt, "note": rep.note, "context": extra,
    })
}

pub fn check_prop1(a: &Prop1Args) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(&a.common)?;
    let mut out = Sink::open(cfg.out.as_deref())?;
    let mut falsified = 0;
    if let Some(pt) = &a.point {
        let point = parse_point("point", pt)?;
        let pair = cfg.pairs.first().ok_or_else(|| config_err("pairs", "empty"))?;
        let inp = Prop1Input {
            point,
            tau: parse_rat(
                "tau",
                a.tau
                    .as_deref()
                    .ok_or_else(|| config_err("tau", "required with --point"))?,
            )?,
            pair,
            r: cfg.r,
            n: a.n.ok_or_else(|| config_err("n", "required with --point"))?,
            k: a.k,
            c: parse_rat(
                "c",
                a.c.as_deref().ok_or_else(|| config_err("c", "required with --point"))?,
            )?,
            theta: &cfg.theta,
            witnesses: None,
            cap: a.cap,
        };
        let rep = find_l0(&inp)?;
        falsified += (rep.verdict() == Prop1Verdict::Falsified) as usize;
        out.line(&prop1_json(&rep, Value::Null))?;
    } else {
        let tree = build(&cfg)?;
        let (mut configs, mut applicable) = (0, 0);
        for t in weighted(&tree).collect::<Vec<_>>() {
            let pp = &tree.params.pairs[t];
            let rt = tree.params.r.pow(pp.m);
            for s in 1..=tree.depth() {
                let Ok(cfgs) = type2_configurations(&tree, t, s) else {
                    break;
                };
                for tc in cfgs {
                    configs += 1;
                    let Some(point) = tc.point() else { continue };
                    let inp = Prop1Input {
                        point,
                        tau: tc.tau.clone(),
                        pair: &pp.pair,
                        r: rt,
                        n: s,
                        k: tc.k,
                        c: pp.c.clone(),
                        theta: &tree.params.theta,
                        witnesses: Some((&tc.lines, &tc.window)),
                        cap: a.cap,
                    };
                    let rep = find_l0(&inp)?;
                    applicable += (rep.verdict() != Prop1Verdict::NotApplicable) as usize;
                    falsified += (rep.verdict() == Prop1Verdict::Falsified) as usize;
                    out.line(&prop1_json(
                        &rep,
                        json!({"pair": pp.pair.to_string(), "s": s, "l": tc.l, "k": tc.k, "cell": tc.cell}),
                    ))?;
                }
            }
        }
        out.line(&json!({"kind": "prop1_summary", "configurations": configs, "applicable": applicable, "falsified": falsified}))?;
    }
    out.finish()?;
    if falsified > 0 {
        return Err(Failure::Falsified(format!("{falsified} instances without a valid L0")));
    }
    Ok(())
}

pub fn check_lemma1(c: &Common) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(c)?;
    let q_max = cfg.q_max.unwrap_or(500) as i64;
    let th = &cfg.theta;
    let mut out = Sink::open(cfg.out.as_deref())?;
    let mut failures = 0;
    for pair in cfg.pairs.iter().filter(|p| p.is_weighted()) {
        let (mut points, mut ok) = (0u64, 0u64);
        for q in 1..=q_max {
            let f = th.value.mul_int(&BigInt::from(q)).floor();
            let f: i64 = f.try_into().map_err(|_| config_err("Q", "qθ exceeds 64 bits"))?;
            for p in [f, f + 1] {
                for r in 0..q {
                    if p.gcd(&r).gcd(&q) != 1 {
                        continue;
                    }
                    let pt = RationalPoint::new(p, r, q)?;
                    if !pigeonhole_applies(&pt, th, pair) {
                        continue;
                    }
                    points += 1;
                    match pigeonhole_line(&pt, th, pair) {
                        Ok(l) if pigeonhole_clauses(&l, &pt, pair) == [true; 3] => ok += 1,
                        res => {
                            let line = res.as_ref().ok().map(line_json);
                            out.line(&json!({"kind": "lemma1_failure", "pair": pair.to_string(), "point": [p, r, q], "line": line}))?;
                        }
                    }
                }
            }
        }
        failures += points - ok;
        out.line(&json!({"kind": "lemma1", "pair": pair.to_string(), "Q": q_max, "points": points, "lines_ok": ok}))?;
    }
    out.finish()?;
    if failures > 0 {
        return Err(Failure::Falsified(format!(
            "{failures} points without a valid pigeonhole line"
        )));
    }
    Ok(())
}

pub fn refine(c: &Common) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(c)?;
    let tree = build(&cfg)?;
    let rs = refine_collections(&tree, tree.depth())?;
    let mut out = Sink::open(cfg.out.as_deref())?;
    for (m, row) in rs.m_sets.iter().enumerate() {
        let sizes: Vec<u64> = row.iter().map(|s| s.len()).collect();
        out.line(&json!({"kind": "refine", "m": m, "sizes": sizes}))?;
    }
    out.line(&json!({
        "kind": "refine_summary", "threshold": rs.threshold, "applied_threshold": rs.applied_threshold,
        "stabilized_at": rs.stabilized_at, "final_sizes": rs.final_sets.iter().map(|s| s.len()).collect::<Vec<_>>(),
        "all_nonempty": rs.all_nonempty(),
    }))?;
    out.finish()?;
    if !rs.all_nonempty() {
        return Err(Failure::Empty("some M_{n,m} is empty".into()));
    }
    Ok(())
}

pub fn measure(a: &MeasureArgs) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(&a.common)?;
    let tree = build(&cfg)?;
    let rs = refine_collections(&tree, tree.depth())?;
    if !rs.all_nonempty() {
        return Err(Failure::Empty("some M_{n,m} is empty".into()));
    }
    let m = assign_measure(&rs.final_sets, &tree.params)?;
    let rep = check_mass_bound(&m, a.windows, cfg.seed);
    let mut out = Sink::open(cfg.out.as_deref())?;
    out.line(&json!({
        "kind": "measure", "a": rep.a_approx, "windows": rep.windows, "random_windows": rep.random_windows,
        "dyadic_lengths": rep.dyadic_lengths.iter().map(|&(k, ok)| json!({"k": k, "ok": ok})).collect::<Vec<_>>(),
        "violations": rep.violations.len(), "raw_exponent": rep.raw_exponent,
        "normalized_exponent": rep.normalized_exponent, "target_exponent": rep.target_exponent,
    }))?;
    out.finish()?;
    if !rep.passed() {
        return Err(Failure::Falsified(format!(
            "{} windows above the mass bound",
            rep.violations.len()
        )));
    }
    Ok(())
}

pub fn transfer(a: &TransferArgs) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(&a.common)?;
    let pair = cfg.pairs.first().ok_or_else(|| config_err("pairs", "empty"))?;
    let x = parse_real(&a.x).map_err(|e| config_err("x", e))?;
    let y = parse_real(&a.y).map_err(|e| config_err("y", e))?;
    let c = parse_rat("c", &a.c)?;
    let mut out = Sink::open(cfg.out.as_deref())?;
    if let Some(d) = &a.dual {
        let (u1, u2) = d
            .split_once(',')
            .and_then(|(s, t)| Some((s.trim().parse::<i64>().ok()?, t.trim().parse::<i64>().ok()?)))
            .ok_or_else(|| config_err("dual", format!("{d:?} is not u1,u2")))?;
        match simultaneous_from_dual(u1, u2, &c, pair, &x, &y, a.cap as u128)? {
            Some(w) => {
                out.line(
                    &json!({"kind": "transfer", "direction": "dual_to_simultaneous", "input": [u1, u2],
                    "constant": power_json(&w.constant), "verified": w.verified}),
                )?;
                out.line(&simultaneous_witness(w.q, &x, &y, pair))?;
            }
            None => {
                out.line(&json!({"kind": "transfer", "direction": "dual_to_simultaneous", "outcome": "not searched"}))?
            }
        }
    } else {
        let q_max = cfg.q_max.unwrap_or(10_000);
        let q0 =
            a.q0.or_else(|| (1..=q_max).find(|&q| is_simultaneous_witness(q, &c, pair, &x, &y)));
        let Some(q0) = q0 else {
            out.line(&json!({"kind": "transfer", "direction": "simultaneous_to_dual", "outcome": "no simultaneous witness", "Q": q_max}))?;
            return out.finish();
        };
        match dual_from_simultaneous(q0, &c, pair, &x, &y, a.cap as u128)? {
            Some(w) => {
                out.line(&json!({"kind": "transfer", "direction": "simultaneous_to_dual", "input": q0, "u": [w.u1, w.u2],
                    "constant": power_json(&w.constant), "verified": w.verified}))?;
                out.line(&dual_witness(w.u1, -w.u2, &x, &y, pair))?;
            }
            None => out.line(&json!({"kind": "transfer", "direction": "simultaneous_to_dual", "input": q0, "outcome": "not searched"}))?,
        }
    }
    out.finish()
}

pub fn emit_plot_data(a: &PlotArgs) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(&a.common)?;
    let tree = build(&cfg)?;
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| Failure::io(&dir, e))?;
    let path = dir.join("removals.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| Failure::Io(e.to_string()))?;
    let cw = |e: csv::Error| Failure::Io(e.to_string());
    w.write_record([
        "level",
        "pair",
        "kind",
        "A",
        "B",
        "C",
        "p",
        "q",
        "family",
        "center",
        "half_width",
        "first_cell",
        "last_cell",
        "count",
    ])
    .map_err(cw)?;
    let th = &tree.params.theta.value;
    let frontier = tree.frontier();
    let mut rows = 0;
    for rep in tree.reports.iter().chain(std::iter::once(&frontier.report)) {
        for h in &rep.hits {
            let pp = &tree.params.pairs[h.pair];
            let half = badweave::exact::rat_to_f64(&pp.c) / h.height.to_f64();
            let (kind, abc, pq, center) = match &h.source {
                Source::Line(l) => (
                    "line",
                    [l.a.to_string(), l.b.to_string(), l.c.to_string()],
                    [String::new(), String::new()],
                    l.trace(th).to_f64(),
                ),
                Source::Rational { p, q } => (
                    "rational",
                    [String::new(), String::new(), String::new()],
                    [p.to_string(), q.to_string()],
                    *p as f64 / *q as f64,
                ),
            };
            let row = [
                rep.n.to_string(),
                pp.pair.to_string(),
                kind.to_string(),
                abc[0].clone(),
                abc[1].clone(),
                abc[2].clone(),
                pq[0].clone(),
                pq[1].clone(),
                h.family.to_string(),
                format!("{center:.17e}"),
                format!("{half:.17e}"),
                h.cells.0.to_string(),
                h.cells.1.to_string(),
                h.count.to_string(),
            ];
            w.write_record(&row).map_err(cw)?;
            rows += 1;
        }
    }
    w.flush().map_err(|e| Failure::io(&path, e))?;
    let mut out = Sink::open(None)?;
    out.line(&json!({"kind": "plot_data", "file": path.display().to_string(), "rows": rows}))?;
    if let Some(fp) = &a.figure_point {
        let point = parse_point("figure-point", fp)?;
        let pair = cfg.pairs.first().ok_or_else(|| config_err("pairs", "empty"))?;
        let tau = parse_rat("tau", &a.tau)?;
        let fig = FigureSpec::new(point, pair, cfg.r, a.k, &tau, Variant::F, th)?;
        let pts = fig.lattice_points(a.cap)?;
        let fpath = dir.join("figure.csv");
        let mut w = csv::Writer::from_path(&fpath).map_err(|e| Failure::Io(e.to_string()))?;
        w.write_record(["A", "B", "height"]).map_err(cw)?;
        for &(a, b) in &pts {
            w.write_record([
                a.to_string(),
                b.to_string(),
                format!("{:.17e}", Height::of(a, b, pair).to_f64()),
            ])
            .map_err(cw)?;
        }
        w.flush().map_err(|e| Failure::io(&fpath, e))?;
        out.line(&json!({"kind": "plot_data", "file": fpath.display().to_string(), "rows": pts.len()}))?;
    }
    out.finish()
}
