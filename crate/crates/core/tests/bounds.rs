mod common;

use common::matrix;
use kscope::analysis::{compute_bounds, BoundsConfig};
use kscope::bounds::{
    bound_cg, bound_ev, bound_fov, bound_fov_prime, bound_psa_doubleprime, bound_psa_from_contour,
    psa_envelope, psa_family, BoundKind, PsaCurve, C_CG, C_FOV,
};
use kscope::gallery;
use kscope::krylov::{gmres_residual_ratios, random_unit_vector, trial_rng};
use kscope::linalg::{eigen_full, ShiftedSmin};
use kscope::projectors::{build_projectors, SpectralPartition};
use kscope::sets::{cg_region, extract_contour, fov_boundary, pseudospectrum_grid, GridBox};
use proptest::prelude::*;

#[test]
fn paper_constants_are_fixed() {
    assert_eq!(C_FOV, 1.0 + 2f64.sqrt());
    assert!((C_CG - (3.0 + 2.0 * 3f64.sqrt())).abs() < 1e-15);
    let a = gallery::toeplitz_interval(1.0, 2.0, 16).unwrap().matrix;
    let f = bound_fov(&fov_boundary(&a, 64).unwrap(), 5, false).unwrap();
    assert_eq!(f.constant, C_FOV);
    let cg = bound_cg(
        &cg_region(&a, &fov_boundary(&a, 64).unwrap(), 100).unwrap(),
        5,
    )
    .unwrap();
    assert_eq!(cg.constant, C_CG);
}

#[test]
fn inapplicable_cases_are_flagged() {
    let jordan = gallery::example_d(0.5, 8).unwrap().matrix;
    assert!(
        !bound_ev(&eigen_full(&jordan).unwrap(), 4)
            .unwrap()
            .applicable
    );
    let diag = gallery::example_e_diag().matrix;
    assert!(
        !bound_fov(&fov_boundary(&diag, 64).unwrap(), 4, false)
            .unwrap()
            .applicable
    );
}

#[test]
fn trivial_partition_reproduces_fov() {
    let a = gallery::example_c(0.01, 1.0, 2.0, 16, gallery::Spacing::Equispaced)
        .unwrap()
        .matrix;
    let spec = eigen_full(&a).unwrap();
    let pset = build_projectors(&a, &spec, &SpectralPartition::whole(&spec)).unwrap();
    let fp = bound_fov_prime(&pset, 10, 128, false).unwrap();
    let f = bound_fov(&fov_boundary(&a, 128).unwrap(), 10, false).unwrap();
    for k in 0..=10 {
        assert!(
            (fp.values[k] - f.values[k]).abs() <= 1e-10 * f.values[k].max(1e-300),
            "k={k}"
        );
    }
}

#[test]
fn single_curve_doubleprime_reproduces_psa() {
    let a = gallery::jordan2(10.0).unwrap().matrix;
    let spec = eigen_full(&a).unwrap();
    let eps = 1e-2;
    let grid = pseudospectrum_grid(
        &a,
        GridBox::covering(&a, &spec.eigenvalues, spec.norm_a, eps).unwrap(),
        80,
        80,
    )
    .unwrap();
    let c = extract_contour(&grid, eps)
        .unwrap()
        .certify(&a, &spec.eigenvalues)
        .unwrap();
    let psa = bound_psa_from_contour(&c, 8).unwrap();
    let s = ShiftedSmin::new(&a).unwrap();
    let curve = PsaCurve {
        loops: c.loops.clone(),
        epsilon: c.effective_level(),
    };
    let dp = bound_psa_doubleprime(&[curve], 8, |z| s.eval(z)).unwrap();
    for k in 0..=8 {
        assert!(
            (dp.values[k] - psa.values[k]).abs() <= 1e-10 * psa.values[k],
            "k={k}"
        );
    }
}

#[test]
fn envelope_is_the_pointwise_minimum() {
    let a = gallery::example_d(0.5, 8).unwrap().matrix;
    let spec = eigen_full(&a).unwrap();
    let eps = [1e-1, 1e-2, 1e-3];
    let grid = pseudospectrum_grid(
        &a,
        GridBox::covering(&a, &spec.eigenvalues, spec.norm_a, 1e-1).unwrap(),
        60,
        60,
    )
    .unwrap();
    let fam = psa_family(&a, &spec.eigenvalues, &grid, &eps, 10).unwrap();
    assert!(fam.iter().filter(|c| c.applicable).count() >= 2);
    let env = psa_envelope(&fam).unwrap();
    for k in 0..=10 {
        let m = fam
            .iter()
            .filter(|c| c.applicable)
            .map(|c| c.values[k])
            .fold(f64::INFINITY, f64::min);
        assert_eq!(env.values[k], m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn applicable_curves_dominate_gmres(a in matrix(2, 6, 2.0), seed in any::<u64>()) {
        let kmax = 8;
        let cfg = BoundsConfig {
            kmax,
            grid: 50,
            fov_angles: 64,
            cg_grid: 80,
            trials: 4,
            seed,
            ..Default::default()
        };
        let rep = compute_bounds(&a, &cfg).unwrap();
        let n = a.rows();
        for t in 0..10u64 {
            let mut rng = trial_rng(seed ^ 0x77, t);
            let h = gmres_residual_ratios(&a, &random_unit_vector(n, &mut rng), kmax, false).unwrap();
            for c in rep.curves.iter().chain(rep.envelope.iter()).filter(|c| c.applicable && !c.estimate) {
                for k in 0..=kmax {
                    prop_assert!(
                        h.relative_at(k) <= c.values[k] + 1e-8,
                        "{} at k={k}: {} > {}", c.kind.as_str(), h.relative_at(k), c.values[k]
                    );
                }
            }
        }
        prop_assert!(rep.curve(BoundKind::EV).is_some());
    }
}
