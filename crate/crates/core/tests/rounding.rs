mod common;

use lrc_core::geometry::{rounding_for, Body, HPolytope};
use lrc_core::PartitionTriple;
use proptest::prelude::*;

fn bodies() -> Vec<(String, HPolytope)> {
    let mut out = Vec::new();
    let triples: [(&[i64], &[i64], &[i64]); 3] = [
        (&[4, 2, 1, 0], &[3, 2, 1, 0], &[6, 4, 2, 1]),
        (&[6, 4, 2, 0], &[5, 3, 1, 0], &[9, 7, 4, 1]),
        (&[4, 2, 1, 0, 0], &[3, 2, 1, 0, 0], &[6, 4, 2, 1, 0]),
    ];
    for (l, m, v) in triples {
        let t = PartitionTriple::from_parts(l, m, v).unwrap();
        let q = HPolytope::for_triple(&t, Body::Outer);
        out.push((format!("Q{t}"), q.clone()));
        out.push((format!("Q{t} deduplicated"), q.deduplicated()));
    }
    out.push(("cube 3".into(), HPolytope::cube(3, -1, 1)));
    out.push(("cube 5".into(), HPolytope::cube(5, 0, 2)));
    out
}

#[test]
fn rounded_support_lies_between_one_and_m_three_halves() {
    for (name, body) in bodies() {
        let map = rounding_for(&body).unwrap();
        let bound = (body.num_rows() as f64).powf(1.5);
        for h in common::rounded_support(&body, &map, 100, 17) {
            assert!(h >= 1.0 - 1e-9 && h <= bound, "{name}: {h} not in [1, {bound}]");
        }
    }
}

#[test]
fn chord_identity_and_sandwich() {
    for (name, body) in bodies() {
        let map = rounding_for(&body).unwrap();
        let m = body.num_rows() as f64;
        for chord in common::chords(&body, &map, 20, 5) {
            let sum: f64 = chord.facets.iter().filter(|t| t.is_finite()).map(|t| 1.0 / (t * t)).sum();
            let lhs = 1.0 / (chord.t * chord.t);
            assert!((lhs - sum).abs() <= 1e-9 * lhs, "{name}: {lhs} vs {sum}");
            let nearest = chord.facets.iter().map(|t| t.abs()).fold(f64::INFINITY, f64::min);
            assert!(chord.t <= nearest * (1.0 + 1e-12), "{name}");
            assert!(chord.t >= nearest / m.sqrt() * (1.0 - 1e-12), "{name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn slack_is_monotone(k in 0i64..60, l in 0i64..60) {
        let t = PartitionTriple::from_parts(&[4, 2, 1, 0], &[3, 2, 1, 0], &[6, 4, 2, 1]).unwrap();
        let o = HPolytope::for_triple(&t, Body::Inner);
        let p = HPolytope::for_triple(&t, Body::Hive);
        let q = HPolytope::for_triple(&t, Body::Outer);
        let x = [lrc_core::ratio::frac(k, 6), lrc_core::ratio::frac(l, 6), lrc_core::ratio::frac(k + l, 9)];
        if o.contains(&x) { prop_assert!(p.contains(&x)); }
        if p.contains(&x) { prop_assert!(q.contains(&x)); }
    }

    #[test]
    fn unit_ball_maps_inside(seed in 0u64..1000) {
        let t = PartitionTriple::from_parts(&[4, 2, 1, 0], &[3, 2, 1, 0], &[6, 4, 2, 1]).unwrap();
        let q = HPolytope::for_triple(&t, Body::Outer);
        let map = rounding_for(&q).unwrap();
        let mut r = lrc_core::rng::stream(seed, 0);
        let y = lrc_core::rng::in_unit_ball(&mut r, 3);
        prop_assert!(q.contains_f64(&map.invert(&y)));
    }
}
