mod common;

use badweave::exact::{parse_real, rat, QuadraticSurd};
use badweave::geometry::{ConeSpec, LatticePlane, RationalPoint};
use badweave::lines::{enumerate_lines, Pair};
use badweave::transference::{dual_from_simultaneous, is_simultaneous_witness, simultaneous_from_dual};
use common::{delta_meets, dist_q, lines_below, q, OLine, Weights};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = RationalPoint> {
    (1i64..60, 0i64..60, 0i64..60)
        .prop_filter("primitive", |&(qq, p, r)| p.gcd(&r).gcd(&qq) == 1)
        .prop_map(|(qq, p, r)| RationalPoint::new(p % qq, r % qq, qq).unwrap())
}

fn theta() -> QuadraticSurd {
    parse_real("sqrt(2)-1").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_has_index_q(pt in point()) {
        let lat = LatticePlane::new(pt);
        prop_assert_eq!(lat.area(), pt.q);
        // qZ² ⊆ Λ, so the box [0, q)² holds exactly q²/[Z²:Λ] points
        let n = pt.q;
        let mut count = 0;
        for a in 0..n {
            for b in 0..n {
                let inside = (a * pt.p - b * pt.r).rem_euclid(n) == 0;
                prop_assert_eq!(inside, lat.contains(a, b));
                count += inside as i64;
            }
        }
        prop_assert_eq!(count, n);
    }

    #[test]
    fn cone_forms_agree(pt in point(), k0 in 1i64..8, k in -20i64..20, b in 1i64..30, cd in 1i64..64) {
        let lat = LatticePlane::new(pt);
        let th = theta();
        let half = Pair::weighted(1, 2);
        let b0 = lat.b0 * k0;
        let a0 = lat.residue(b0).unwrap();
        let c = rat(1, cd);
        let cone = ConeSpec::new(a0, b0, &half, &c, pt, &th);
        let bb = lat.b0 * b;
        let a = lat.residue(bb).unwrap() + k * lat.step;
        prop_assert_eq!(cone.contains(a, bb), cone.contains_direct(a, bb, &th));
    }

    #[test]
    fn enumerated_lines_match_oracle(n in 1u32..3, lo_n in 0i64..1000) {
        let (pair, r, w) = (Pair::weighted(1, 2), 16u64, Weights::half());
        let c = rat(1, 1024);
        let (lo, hi) = (rat(lo_n, 1000), rat(lo_n + 3, 1000));
        let got: Vec<(i64, i64, i64)> = enumerate_lines(&pair, r, n, &lo, &hi, &c, &theta())
            .into_iter()
            .map(|l| (l.a, l.b, l.c))
            .collect();
        let (hlo, hhi) = (BigInt::from(r).pow(n - 1), BigInt::from(r).pow(n));
        let (lq, hq, cq) = (q(lo_n, 1000), q(lo_n + 3, 1000), q(1, 1024));
        let mut want: Vec<(i64, i64, i64)> = lines_below(w, &hhi, lo_n as f64 / 1000.0, (lo_n + 3) as f64 / 1000.0, 1.0 / 1024.0)
            .into_iter()
            .filter(|l: &OLine| !w.height_below(l.a, l.b, &hlo) && delta_meets(w, l, &cq, &lq, &hq))
            .map(|l| (l.a, l.b, l.c))
            .collect();
        want.sort_by_key(|&(a, b, c)| (b, a, c));
        prop_assert_eq!(got, want);
    }

    #[test]
    fn transference_round_trip(xn in 0i64..40, dx in 1i64..40, yn in 0i64..40, dy in 1i64..40, cd in 100i64..400) {
        let pair = Pair::weighted(1, 2);
        let (xr, yr) = (rat(xn % dx, dx), rat(yn % dy, dy));
        let (x, y) = (QuadraticSurd::from_rational(&xr), QuadraticSurd::from_rational(&yr));
        let c = rat(1, cd);
        let q0 = (1..).find(|&k| is_simultaneous_witness(k, &c, &pair, &x, &y)).unwrap();
        let w = dual_from_simultaneous(q0, &c, &pair, &x, &y, 1 << 22).unwrap().expect("searched");
        prop_assert!(w.verified);
        let (xq, yq) = (q(xn % dx, dx), q(yn % dy, dy));
        let defect = dist_q(&(&xq * q(w.u1, 1) + &yq * q(w.u2, 1)));
        prop_assert!(q((w.u1 * w.u1).max(w.u2 * w.u2), 1) * defect <= q(32, cd));
        // the dual witness feeds back into the reverse reduction when its constant allows
        let c32 = rat(32, cd);
        if c32 < rat(1, 4) {
            let sw = simultaneous_from_dual(w.u1, w.u2, &c32, &pair, &x, &y, 1 << 22).unwrap().expect("searched");
            prop_assert!(sw.verified);
        }
    }
}
