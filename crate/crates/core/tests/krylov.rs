mod common;

use common::{dense, matrix, matrix_and_vector, smin};
use kscope::error::Error;
use kscope::gallery;
use kscope::krylov::{
    arnoldi, gmres, gmres_residual_ratios, gmres_run, harmonic_ritz_values, ideal_gmres_sandwich,
    random_unit_vector, ritz_values, trial_rng, GmresOptions,
};
use kscope::linalg::two_norm;
use kscope::{c64, ComplexMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

fn vnorm(v: &[c64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn integration_matrix_krylov_relation_holds() {
    let a = gallery::integration_matrix(2.5, 64).unwrap().matrix;
    let mut rng = trial_rng(3, 0);
    let dec = arnoldi(&a, &random_unit_vector(64, &mut rng), 12).unwrap();
    assert_eq!(dec.steps(), 12);
    assert!(dec.relation_residual(&a) <= 1e-10 * two_norm(&a));
}

#[test]
fn invariant_start_vector_breaks_down() {
    let a = ComplexMatrix::from_diag(&[re(1.0), re(2.0), re(3.0), re(4.0)]);
    let r0 = [re(1.0), re(1.0), re(0.0), re(0.0)];
    let dec = arnoldi(&a, &r0, 4).unwrap();
    assert_eq!(dec.breakdown_step, Some(2));
    assert_eq!(dec.steps(), 2);
    let hist = gmres_residual_ratios(&a, &r0, 4, false).unwrap();
    assert!(hist.relative_at(2) < 1e-14);
}

#[test]
fn iteration_cap_returns_history() {
    let a = gallery::integration_matrix(2.5, 32).unwrap().matrix;
    let b = vec![re(1.0); 32];
    let x0 = vec![re(0.0); 32];
    match gmres(&a, &b, &x0, 1e-14, 3) {
        Err(Error::MaxIterationsReached {
            iterations,
            history,
        }) => {
            assert_eq!(iterations, 3);
            assert_eq!(history.residual_norms.len(), 4);
        }
        other => panic!("expected the iteration cap, got {other:?}"),
    }
}

#[test]
fn ipsen_example_matches_closed_form() {
    let (delta, n) = (0.5, 16);
    let a = gallery::example_d(delta, n).unwrap().matrix;
    let mut r0 = vec![re(0.0); n];
    r0[n - 1] = re(1.0);
    let h = gmres_residual_ratios(&a, &r0, 10, false).unwrap();
    for k in 0..=10 {
        assert!((h.relative_at(k) - gallery::ipsen_residual(delta, k)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn arnoldi_basis_is_orthonormal((a, r0) in matrix_and_vector(2, 16, 2.0), k in 1usize..16) {
        let dec = arnoldi(&a, &r0, k.min(a.rows())).unwrap();
        let v = dense(&dec.v);
        let m = v.ncols();
        prop_assert!((v.adjoint() * &v - DMatrix::<c64>::identity(m, m)).norm() <= 1e-10);
        prop_assert!(dec.relation_residual(&a) <= 1e-10 * two_norm(&a).max(1.0));
        prop_assert!(dec.subdiag.iter().all(|&h| h >= 0.0));
    }

    #[test]
    fn gmres_residuals_are_true_and_monotone((a, b) in matrix_and_vector(2, 16, 2.0), k in 1usize..16) {
        let n = a.rows();
        let opts = GmresOptions { tol: 0.0, maxit: k.min(n), keep_solution: true, harmonic: false };
        let h = gmres_run(&a, &b, &vec![re(0.0); n], &opts).unwrap();
        prop_assert!(h.residual_norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
        let x = h.solution.clone().unwrap();
        let ax = a.mul_vec(&x);
        let r: Vec<c64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
        let last = *h.residual_norms.last().unwrap();
        prop_assert!((vnorm(&r) - last).abs() <= 1e-10 * vnorm(&b));
    }

    #[test]
    fn harmonic_ritz_values_are_residual_polynomial_roots((a, r0) in matrix_and_vector(3, 8, 1.0), k in 1usize..8) {
        let k = k.min(a.rows() - 1);
        let h = gmres_residual_ratios(&a, &r0, k, true).unwrap();
        let roots = &h.residual_poly_roots[k.min(h.residual_poly_roots.len() - 1)];
        prop_assume!(!roots.is_empty());
        // apply (I - A/θ) factor by factor
        let mut v = r0.clone();
        for &t in roots {
            let av = a.mul_vec(&v);
            v = v.iter().zip(&av).map(|(x, y)| x - y / t).collect();
        }
        let rel = vnorm(&v) / vnorm(&r0);
        prop_assert!((rel - h.relative_at(k)).abs() <= 1e-8 * (1.0 + rel), "{rel} vs {}", h.relative_at(k));
    }

    #[test]
    fn ritz_certificates_hold((a, r0) in matrix_and_vector(3, 12, 2.0), k in 1usize..12) {
        let k = k.min(a.rows() - 1);
        let dec = arnoldi(&a, &r0, k).unwrap();
        let k = dec.steps();
        let h = dec.h_next(k).unwrap();
        let n = a.rows();
        let d = dense(&a);
        let shifted = |z: c64| smin(&(DMatrix::<c64>::identity(n, n) * z - &d));
        for t in ritz_values(&dec, k).unwrap() {
            prop_assert!(shifted(t) <= h + 1e-10);
        }
        if let Ok(hr) = harmonic_ritz_values(&dec, k) {
            let bound = h + h * h / smin(&dense(&dec.h_square(k).unwrap()));
            for t in hr {
                prop_assert!(shifted(t) <= bound + 1e-10);
            }
        }
    }

    #[test]
    fn runs_stay_below_the_sandwich_upper(a in matrix(2, 10, 2.0), seed in any::<u64>()) {
        let n = a.rows();
        let kmax = n;
        let sw = ideal_gmres_sandwich(&a, kmax, 4, seed).unwrap();
        prop_assert!(sw.lower.iter().zip(&sw.upper).all(|(l, u)| *l <= u * (1.0 + 1e-8) + 1e-12));
        for t in 0..100u64 {
            let mut rng = trial_rng(seed ^ 0xabcd, t);
            let h = gmres_residual_ratios(&a, &random_unit_vector(n, &mut rng), kmax, false).unwrap();
            for k in 0..sw.upper.len() {
                prop_assert!(h.relative_at(k) <= sw.upper[k] * (1.0 + 1e-8) + 1e-12);
            }
        }
    }
}
