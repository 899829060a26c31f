mod common;

use common::{dense, matrix, norm2};
use kscope::linalg::{apply_matrix_polynomial, eigen_full, two_norm};
use kscope::projectors::{
    build_projectors, ew_condition_sum, theorem_gensp_rhs, SpectralPartition,
};
use kscope::{c64, ComplexMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

#[test]
fn two_by_two_projector_norm_is_the_eigenvalue_condition_number() {
    // [[1, t], [0, 2]]: ||P_1|| = sqrt(1 + t^2)
    let t = 3.0;
    let a = ComplexMatrix::from_real_rows(&[&[1.0, t], &[0.0, 2.0]]);
    let spec = eigen_full(&a).unwrap();
    let p = build_projectors(&a, &spec, &SpectralPartition::finest(&spec)).unwrap();
    for g in &p.groups {
        assert!((g.norm_p - (1.0 + t * t).sqrt()).abs() < 1e-12);
        assert!((g.norm_p - spec.kappa_lambda[g.indices[0]]).abs() < 1e-10);
    }
}

#[test]
fn whole_partition_is_the_identity() {
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 5.0], &[0.0, -2.0]]);
    let spec = eigen_full(&a).unwrap();
    let p = build_projectors(&a, &spec, &SpectralPartition::whole(&spec)).unwrap();
    assert_eq!(p.groups.len(), 1);
    assert!(p.groups[0].p.sub(&ComplexMatrix::identity(2)).max_abs() < 1e-14);
    assert!((p.groups[0].norm_p - 1.0).abs() < 1e-14);
}

fn coeffs() -> impl Strategy<Value = Vec<c64>> {
    prop::collection::vec(common::complex(), 1..5).prop_map(|mut v| {
        v.insert(0, re(1.0));
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn projectors_are_complementary_commuting_idempotents(a in matrix(2, 12, 2.0), cut in -1.0..1.0f64) {
        let spec = eigen_full(&a).unwrap();
        let part = SpectralPartition::split_by(&spec, |z| z.re < cut);
        prop_assume!(part.is_ok());
        let pset = build_projectors(&a, &spec, &part.unwrap());
        prop_assume!(pset.is_ok());
        let pset = pset.unwrap();
        let n = a.rows();
        let d = dense(&a);
        let mut sum = DMatrix::<c64>::zeros(n, n);
        for g in &pset.groups {
            let p = dense(&g.p);
            let scale = g.norm_p * g.norm_p;
            prop_assert!((&p * &p - &p).norm() <= 1e-8 * scale);
            prop_assert!((&p * &d - &d * &p).norm() <= 1e-8 * scale * two_norm(&a).max(1.0));
            prop_assert!((norm2(&p) - g.norm_p).abs() <= 1e-8 * g.norm_p);
            // U*AU is upper triangular and U has orthonormal columns
            let u = dense(&g.u);
            let m = u.ncols();
            prop_assert!((u.adjoint() * &u - DMatrix::<c64>::identity(m, m)).norm() <= 1e-10);
            prop_assert!((u.adjoint() * &d * &u - dense(&g.compressed)).norm() <= 1e-8 * two_norm(&a).max(1.0));
            sum += p;
        }
        prop_assert!((sum - DMatrix::<c64>::identity(n, n)).norm() <= 1e-8 * pset.norms().iter().sum::<f64>());
    }

    #[test]
    fn localized_bound_dominates_the_matrix_polynomial(a in matrix(2, 12, 2.0), cut in -1.0..1.0f64, c in coeffs()) {
        let spec = eigen_full(&a).unwrap();
        let part = SpectralPartition::split_by(&spec, |z| z.im < cut);
        prop_assume!(part.is_ok());
        let pset = build_projectors(&a, &spec, &part.unwrap());
        prop_assume!(pset.is_ok());
        let lhs = two_norm(&apply_matrix_polynomial(&c, &a).unwrap());
        let rhs = theorem_gensp_rhs(&pset.unwrap(), &c).unwrap();
        prop_assert!(lhs <= rhs + 1e-8 * rhs.max(1.0));
    }

    #[test]
    fn eigenvalue_condition_sum_dominates_the_matrix_polynomial(a in matrix(2, 10, 1.5), c in coeffs()) {
        let spec = eigen_full(&a).unwrap();
        prop_assume!(!spec.has_repeated() && !spec.defective);
        let lhs = two_norm(&apply_matrix_polynomial(&c, &a).unwrap());
        let rhs = ew_condition_sum(&spec, &c).unwrap();
        prop_assert!(lhs <= rhs + 1e-8 * rhs.max(1.0));
    }
}
