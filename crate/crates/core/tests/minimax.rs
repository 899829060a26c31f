mod common;

use std::f64::consts::PI;

use kscope::c64;
use kscope::minimax::{
    convex_faber_bound, disk_minimax, interval_minimax, minimax_groups, minimax_on_points,
    PointGroup,
};
use proptest::prelude::*;

fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

fn circle(c: c64, r: f64, m: usize) -> Vec<c64> {
    (0..m)
        .map(|j| c + c64::from_polar(r, 2.0 * PI * j as f64 / m as f64))
        .collect()
}

#[test]
fn sampled_disk_matches_the_power_law() {
    let (c, r) = (re(2.0), 1.0);
    let pts = circle(c, r, 300);
    for k in 1..=8 {
        let m = minimax_on_points(&pts, k).unwrap();
        let exact = disk_minimax(c, r, k);
        assert!((exact - 0.5f64.powi(k as i32)).abs() < 1e-15);
        assert!(
            m.value >= exact * (1.0 - 1e-9) && m.value <= 1.01 * exact,
            "k={k}: {} vs {exact}",
            m.value
        );
    }
}

#[test]
fn sampled_interval_matches_chebyshev() {
    let pts: Vec<c64> = (0..301).map(|j| re(1.0 + j as f64 / 300.0)).collect();
    for k in 1..=8 {
        let m = minimax_on_points(&pts, k).unwrap();
        let exact = interval_minimax(1.0, 2.0, k).unwrap();
        assert!((m.value / exact - 1.0).abs() < 0.01, "k={k}");
    }
}

#[test]
fn origin_enclosing_circle_gives_one() {
    let pts = circle(c64::new(0.3, 0.1), 1.0, 200);
    for k in 0..=6 {
        assert!(minimax_on_points(&pts, k).unwrap().value >= 1.0 - 1e-8);
    }
}

#[test]
fn faber_bound_closed_form() {
    // 2ρ^k/(1-ρ^k) at ρ = 1/2, k = 3
    assert!((convex_faber_bound(0.5, 3).unwrap() - 2.0 / 7.0).abs() < 1e-15);
    assert!(convex_faber_bound(1.0, 3).is_err());
}

#[test]
fn equal_weight_groups_reduce_to_the_union() {
    let a = circle(re(3.0), 0.5, 60);
    let g = minimax_groups(
        &[PointGroup {
            weight: 1.0,
            points: a.clone(),
        }],
        3,
    )
    .unwrap();
    let m = minimax_on_points(&a, 3).unwrap();
    assert!((g.value - m.value).abs() <= m.certificate_gap + g.certificate_gap + 1e-12);
}

fn point_set() -> impl Strategy<Value = Vec<c64>> {
    // clouds in the right half-plane so the origin stays outside
    prop::collection::vec((0.5..3.0f64, -1.5..1.5f64), 6..40)
        .prop_map(|v| v.into_iter().map(|(x, y)| c64::new(x, y)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn value_is_nonincreasing_in_degree(pts in point_set()) {
        let mut prev = f64::INFINITY;
        for k in 0..=12 {
            let m = minimax_on_points(&pts, k).unwrap();
            prop_assert!((m.coeffs[0] - 1.0).norm() < 1e-14);
            prop_assert!((m.poly.eval(re(0.0)) - 1.0).norm() < 1e-12);
            let measured = pts.iter().map(|&z| m.poly.eval(z).norm()).fold(0.0, f64::max);
            prop_assert!((measured - m.value).abs() <= 1e-9 * m.value.max(1e-300));
            prop_assert!(m.value <= prev * (1.0 + 1e-12));
            prev = m.value;
        }
    }

    #[test]
    fn subsets_never_cost_more(pts in point_set(), k in 1usize..6) {
        let sub: Vec<c64> = pts.iter().step_by(2).copied().collect();
        let small = minimax_on_points(&sub, k).unwrap();
        let big = minimax_on_points(&pts, k).unwrap();
        // the certified lower bound on the subset optimum stays below the superset value
        prop_assert!(small.value - small.certificate_gap <= big.value + 1e-12);
    }
}
