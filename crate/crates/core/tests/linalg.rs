mod common;

use common::{dense, from_dense, matrix, norm2, smin};
use kscope::linalg::{
    eigen_full, schur_decompose, singular_values, smallest_singular_value, two_norm, ShiftedSmin,
};
use kscope::{c64, ComplexMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

#[test]
fn schur_of_rotation_has_unit_imaginary_eigenvalues() {
    let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
    let mut eigs = schur_decompose(&a).unwrap().eigenvalues();
    eigs.sort_by(|x, y| x.im.total_cmp(&y.im));
    assert!((eigs[0] - c64::new(0.0, -1.0)).norm() < 1e-14);
    assert!((eigs[1] - c64::new(0.0, 1.0)).norm() < 1e-14);
}

#[test]
fn diagonal_matrix_is_its_own_schur_form() {
    let a = ComplexMatrix::from_diag(&[re(2.0), re(3.0)]);
    let s = schur_decompose(&a).unwrap();
    assert!(s.reconstruct().sub(&a).max_abs() < 1e-14);
    assert!(s.t[(1, 0)].norm() < 1e-14);
}

#[test]
fn normal_matrix_has_perfect_conditioning() {
    // U diag(d) U* with U from the QR factor of a fixed matrix
    let m = DMatrix::<c64>::from_fn(6, 6, |i, j| {
        c64::new(
            (i * 7 + j * 3) as f64 % 5.0 - 2.0,
            (i + 2 * j) as f64 % 3.0 - 1.0,
        )
    });
    let u = m.qr().q();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(6, |i, _| {
        c64::new(i as f64, (i * i) as f64 * 0.3)
    }));
    let a = from_dense(&(&u * d * u.adjoint()));
    let spec = eigen_full(&a).unwrap();
    assert!(
        spec.kappa_v() <= 1.0 + 1e-6,
        "kappa(V) = {}",
        spec.kappa_v()
    );
    assert!(spec.kappa_lambda.iter().all(|&k| k <= 1.0 + 1e-6));
}

#[test]
fn jordan_block_is_flagged_defective() {
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
    let spec = eigen_full(&a).unwrap();
    assert!(spec.kappa_v().is_infinite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schur_reconstructs(a in matrix(1, 12, 3.0)) {
        let s = schur_decompose(&a).unwrap();
        let scale = two_norm(&a).max(1.0);
        prop_assert!(s.reconstruct().sub(&a).frobenius_norm() <= 1e-10 * scale);
        let q = dense(&s.q);
        let n = a.rows();
        prop_assert!((q.adjoint() * &q - DMatrix::<c64>::identity(n, n)).norm() <= 1e-10);
        for i in 0..n {
            for j in 0..i {
                prop_assert!(s.t[(i, j)].norm() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn eigenpairs_satisfy_their_equations(a in matrix(1, 10, 2.0)) {
        let spec = eigen_full(&a).unwrap();
        let n = a.rows();
        for j in 0..n {
            let v = spec.right_vectors.column(j);
            let av = a.mul_vec(&v);
            let res: f64 = av.iter().zip(&v).map(|(x, y)| (x - spec.eigenvalues[j] * y).norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(res <= 1e-10 * spec.norm_a.max(1.0), "residual {res}");
        }
        if !spec.has_repeated() {
            prop_assert!(spec.kappa_lambda.iter().all(|&k| k >= 1.0 - 1e-12));
        }
        if spec.kappa_v().is_finite() {
            prop_assert!(spec.kappa_v() >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn norms_agree_with_dense_svd(a in matrix(1, 20, 2.0)) {
        let d = dense(&a);
        let (hi, lo) = (norm2(&d), smin(&d));
        prop_assert!((two_norm(&a) - hi).abs() <= 1e-10 * hi);
        prop_assert!((smallest_singular_value(&a).unwrap() - lo).abs() <= 1e-10 * hi);
        let sv = singular_values(&a);
        prop_assert!(sv.windows(2).all(|w| w[0] >= w[1]) || sv.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn smin_is_below_every_rayleigh_quotient(a in matrix(2, 10, 2.0), seed in any::<u64>()) {
        let s = smallest_singular_value(&a).unwrap();
        let mut rng = kscope::krylov::trial_rng(seed, 0);
        for _ in 0..100 {
            let x = kscope::krylov::random_unit_vector(a.rows(), &mut rng);
            let ax = a.mul_vec(&x);
            let q = ax.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(s <= q * (1.0 + 1e-12));
        }
    }

    #[test]
    fn shifted_smin_matches_dense(a in matrix(1, 10, 3.0), z in common::complex()) {
        let z = z * 3.0;
        let s = ShiftedSmin::new(&a).unwrap();
        let n = a.rows();
        let oracle = smin(&(DMatrix::<c64>::identity(n, n) * z - dense(&a)));
        prop_assert!((s.eval(z) - oracle).abs() <= 1e-10 * (1.0 + two_norm(&a)));
    }
}
