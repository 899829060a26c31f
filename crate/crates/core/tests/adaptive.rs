mod common;

use common::matrix_and_vector;
use kscope::adaptive::{
    estimate_from_iteration, nested_inclusion_check, EstimateOptions, EstimateSource,
};
use kscope::c64;
use kscope::gallery;
use kscope::krylov::{arnoldi, random_unit_vector, trial_rng};
use kscope::sets::GridBox;
use proptest::prelude::*;

#[test]
fn ritz_certificates_hold_across_the_gallery() {
    for (name, _) in gallery::NAMES {
        let a = gallery::build(name, &Default::default()).unwrap().matrix;
        let n = a.rows();
        for t in 0..10u64 {
            let mut rng = trial_rng(17, t);
            let r0 = random_unit_vector(n, &mut rng);
            let dec = arnoldi(&a, &r0, 12.min(n)).unwrap();
            for k in [3, 6, 12] {
                if k > dec.steps() {
                    continue;
                }
                let opts = EstimateOptions {
                    source: EstimateSource::RectHtilde,
                    bbox: None,
                    resolution: 16,
                    matrix: Some(&a),
                };
                let est = estimate_from_iteration(&dec, k, &[1e-1, 1e-3], 10, &opts).unwrap();
                assert!(est.curves.iter().all(|c| c.estimate));
                for c in &est.ritz_certificates {
                    assert!(c.satisfied, "{name} trial {t} k={k}: {c:?}");
                }
            }
        }
    }
}

#[test]
fn matrix_free_estimates_use_the_hessenberg_data() {
    let a = gallery::integration_matrix(2.5, 64).unwrap().matrix;
    let mut rng = trial_rng(1, 0);
    let dec = arnoldi(&a, &random_unit_vector(64, &mut rng), 20).unwrap();
    let opts = EstimateOptions {
        source: EstimateSource::SquareHk,
        bbox: Some(GridBox::new(-0.5, 2.5, -1.5, 1.5).unwrap()),
        resolution: 40,
        matrix: None,
    };
    let est = estimate_from_iteration(&dec, 20, &[1e-2, 1e-4], 30, &opts).unwrap();
    assert_eq!(est.at_iteration, 20);
    assert!(!est.curves.is_empty());
    assert!(est.epsilon_markers.0 <= est.epsilon_markers.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rectangular_pseudospectra_nest((a, r0) in matrix_and_vector(3, 12, 2.0), pts in prop::collection::vec(common::complex(), 16)) {
        let dec = arnoldi(&a, &r0, a.rows() - 1).unwrap();
        let pts: Vec<c64> = pts.into_iter().map(|z| z * 3.0).collect();
        let report = nested_inclusion_check(&dec, &pts).unwrap();
        prop_assert!(report.checks > 0);
        prop_assert!(report.violations.is_empty(), "{:?}", report.violations);
    }
}
