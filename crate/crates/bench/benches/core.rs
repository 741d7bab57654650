use badweave::construction::{derive_params, run_construction, RunOptions, ScheduleKind, TrimPolicy};
use badweave::exact::{rat, QuadraticSurd, ThetaSpec};
use badweave::geometry::{find_l0, Prop1Input, RationalPoint};
use badweave::lines::{enumerate_lines, Pair};
use badweave::transference::{check_dual, check_simultaneous, DualRange};
use criterion::{criterion_group, criterion_main, Criterion};

fn theta() -> ThetaSpec {
    ThetaSpec::parse("sqrt(2)-1").unwrap()
}

fn construction(c: &mut Criterion) {
    let p = derive_params(
        &[Pair::weighted(1, 2)],
        &theta(),
        16,
        None,
        TrimPolicy::Fixed(0),
        ScheduleKind::Finite,
    )
    .unwrap();
    let mut g = c.benchmark_group("construction");
    g.sample_size(10);
    for depth in [2, 3] {
        g.bench_function(format!("desk depth {depth}"), |b| {
            b.iter(|| run_construction(&p, depth, &RunOptions::default()).unwrap())
        });
    }
    g.finish();
}

fn lines(c: &mut Criterion) {
    let th = theta().value;
    let half = Pair::weighted(1, 2);
    c.bench_function("enumerate C(3) on [0, 1/64]", |b| {
        b.iter(|| enumerate_lines(&half, 16, 3, &rat(0, 1), &rat(1, 64), &rat(1, 524288), &th))
    });
}

fn checks(c: &mut Criterion) {
    let x = theta().value;
    let y = QuadraticSurd::from_rational(&rat(289, 134217728));
    let half = Pair::weighted(1, 2);
    let mut g = c.benchmark_group("checks");
    g.sample_size(10);
    g.bench_function("check_dual H < 4096", |b| {
        b.iter(|| check_dual(&x, &y, &half, &rat(1, 524288), DualRange::Height(4096)).unwrap())
    });
    g.bench_function("check_simultaneous q ≤ 10^4", |b| {
        b.iter(|| check_simultaneous(&x, &y, &half, &rat(1, 1 << 48), 10_000))
    });
    g.finish();
}

fn prop1(c: &mut Criterion) {
    let th = theta();
    let half = Pair::weighted(1, 2);
    let mut g = c.benchmark_group("prop1");
    g.sample_size(10);
    g.bench_function("find_l0 P = 985/2378, n = 6", |b| {
        b.iter(|| {
            let inp = Prop1Input {
                point: RationalPoint::new(985, 0, 2378).unwrap(),
                tau: rat(16, 1),
                pair: &half,
                r: 16,
                n: 6,
                k: 0,
                c: rat(1, 1),
                theta: &th,
                witnesses: None,
                cap: 1 << 22,
            };
            find_l0(&inp).unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, construction, lines, checks, prop1);
criterion_main!(benches);
