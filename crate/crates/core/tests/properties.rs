use boolperc::analysis::{wilson_interval, Dyadic, Z95};
use boolperc::graph::separated_net;
use boolperc::{GraphModel, RadiusLaw, Vertex};
use proptest::prelude::*;

fn any_law() -> impl Strategy<Value = RadiusLaw> {
    prop_oneof![
        (0u64..20).prop_map(RadiusLaw::constant),
        (0.01f64..0.95).prop_map(|q| RadiusLaw::geometric(q).unwrap()),
        (0.3f64..6.0).prop_map(|a| RadiusLaw::zeta(a).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn balls_are_nested(x in -50i64..50, y in -50i64..50, r in 0u64..12) {
        let m = GraphModel::z(2);
        let v = Vertex::new(&[x, y]);
        let small = m.ball(&v, r).unwrap();
        let big = m.ball(&v, r + 1).unwrap();
        prop_assert!(small.len() < big.len());
        let members: std::collections::HashSet<_> = big.vertices().cloned().collect();
        prop_assert!(small.vertices().all(|u| members.contains(u)));
        prop_assert_eq!(small.sphere_sizes.iter().sum::<u64>(), small.len() as u64);
    }

    #[test]
    fn heisenberg_distance_is_a_metric(a in -3i64..4, b in -3i64..4, c in -4i64..5, d in -3i64..4, e in -3i64..4, f in -4i64..5) {
        let m = GraphModel::heisenberg();
        let u = Vertex::new(&[a, b, c]);
        let w = Vertex::new(&[d, e, f]);
        let o = m.origin();
        let uw = m.distance(&u, &w).unwrap();
        prop_assert_eq!(uw, m.distance(&w, &u).unwrap());
        prop_assert!(uw <= m.distance(&u, &o).unwrap() + m.distance(&o, &w).unwrap());
        prop_assert_eq!(uw == 0, u == w);
    }

    #[test]
    fn nets_separate_and_cover(x in -20i64..20, y in -20i64..20, r in 2u64..10, sep in 1u64..6) {
        let m = GraphModel::z(2);
        let base: Vec<Vertex> = m.ball(&Vertex::new(&[x, y]), r).unwrap().vertices().cloned().collect();
        let net = separated_net(&m, &base, sep).unwrap();
        for (i, a) in net.iter().enumerate() {
            for b in &net[i + 1..] {
                prop_assert!(m.distance(a, b).unwrap() >= sep);
            }
        }
        for u in &base {
            prop_assert!(net.iter().any(|c| m.distance(u, c).unwrap() < sep));
        }
    }

    #[test]
    fn tail_and_quantile_are_monotone(law in any_law(), u in 0.0f64..1.0, v in 0.0f64..1.0, k in 0u64..200) {
        let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
        prop_assert!(law.quantile(lo) <= law.quantile(hi));
        prop_assert!(law.tail(k + 1, false) <= law.tail(k, false) + 1e-15);
        prop_assert!(law.tail(k, true) <= law.tail(k, false) + 1e-15);
        // quantile inverts the tail: P(R > q(u)) <= 1 - u < P(R >= q(u))
        let q = law.quantile(u);
        prop_assert!(law.tail(q, true) <= 1.0 - u + 1e-12);
        prop_assert!(law.tail(q, false) > 1.0 - u - 1e-12);
    }

    #[test]
    fn wilson_brackets_the_point_estimate(n in 1u64..5000, frac in 0.0f64..=1.0) {
        let s = ((n as f64) * frac).floor() as u64;
        let (lo, hi) = wilson_interval(s, n, Z95);
        let p = s as f64 / n as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }

    #[test]
    fn dyadic_arithmetic_is_exact(a in 0.0f64..1e6, b in 0.0f64..1e6, bits in 8u64..80) {
        let (da, db) = (Dyadic::from_f64(a).unwrap(), Dyadic::from_f64(b).unwrap());
        let sum = da.add(&db);
        prop_assert!(sum >= da && sum >= db);
        prop_assert!((sum.to_f64() - (a + b)).abs() <= (a + b) * 1e-15);
        let prod = da.mul(&db);
        let up = prod.round_up(bits);
        prop_assert!(up >= prod);
        // rounding slack plus the float roundings of a * b and to_f64
        let slack = 2f64.powi(1 - bits as i32) + 4.0 * f64::EPSILON;
        prop_assert!(up.to_f64() <= (a * b) * (1.0 + slack) + 1e-300);
    }
}
