use std::collections::BTreeMap;
use std::f64::consts::PI;

use kscope::error::Error;
use kscope::gallery::{self, Spacing};
use kscope::krylov::gmres_residual_ratios;
use kscope::linalg::{eigen_full, two_norm, ShiftedSmin};
use kscope::sets::fov_boundary;
use kscope::{c64, ComplexMatrix};

fn support_gap(poly: &[c64], centre: c64, radius: f64) -> f64 {
    (0..4096)
        .map(|j| {
            let d = c64::from_polar(1.0, -2.0 * PI * j as f64 / 4096.0);
            let h = poly
                .iter()
                .map(|v| ((v - centre) * d).re)
                .fold(f64::NEG_INFINITY, f64::max);
            (h - radius).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn every_entry_builds_deterministically_with_defaults() {
    for (name, _) in gallery::NAMES {
        let a = gallery::build(name, &BTreeMap::new()).unwrap();
        let b = gallery::build(name, &BTreeMap::new()).unwrap();
        assert_eq!(a.matrix, b.matrix, "{name}");
        assert_eq!(a.name, *name);
    }
}

#[test]
fn unknown_names_and_parameters_are_rejected() {
    assert!(matches!(
        gallery::build("nope", &BTreeMap::new()),
        Err(Error::UnknownEntry(_))
    ));
    let mut p = BTreeMap::new();
    p.insert("zeta".to_string(), 1.0);
    assert!(gallery::build("scalar", &p).is_err());
}

#[test]
fn random_spacing_is_seeded() {
    let a = gallery::example_b(10.0, 1.5, 20, Spacing::Random(7))
        .unwrap()
        .matrix;
    let b = gallery::example_b(10.0, 1.5, 20, Spacing::Random(7))
        .unwrap()
        .matrix;
    let c = gallery::example_b(10.0, 1.5, 20, Spacing::Random(8))
        .unwrap()
        .matrix;
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn closed_form_references_match_the_machinery() {
    for (name, _) in gallery::NAMES {
        let e = gallery::build(name, &BTreeMap::new()).unwrap();
        let a = &e.matrix;
        if let Some((c, r)) = e.reference.fov_disk {
            let f = fov_boundary(a, 512).unwrap();
            assert!(support_gap(&f.outer, c, r) <= 1e-4, "{name} fov disk");
        }
        if let Some(alpha) = e.reference.jordan_alpha {
            let s = ShiftedSmin::new(&a.submatrix(0, 2, 0, 2)).unwrap();
            for eps in [1e-1, 1e-3, 1e-6] {
                let r = (alpha * eps + eps * eps).sqrt();
                for j in 0..8 {
                    let z = c64::new(1.0, 0.0) + c64::from_polar(r, 2.0 * PI * j as f64 / 8.0);
                    assert!(
                        (s.eval(z) - eps).abs() <= 1e-6 * eps.max(1e-6),
                        "{name} eps={eps}"
                    );
                }
            }
        }
        if let Some(delta) = e.reference.ipsen_delta {
            let n = a.rows();
            let mut r0 = vec![c64::new(0.0, 0.0); n];
            r0[n - 1] = c64::new(1.0, 0.0);
            let h = gmres_residual_ratios(a, &r0, 10.min(n), false).unwrap();
            for k in 0..=10.min(n) {
                assert!(
                    (h.relative_at(k) - gallery::ipsen_residual(delta, k)).abs() <= 1e-10,
                    "{name} k={k}"
                );
            }
        }
        if let Some((lo, hi)) = e.reference.spectrum_interval {
            let spec = eigen_full(a).unwrap();
            let slack = 1e-6 * spec.norm_a.max(1.0);
            for l in &spec.eigenvalues {
                assert!(
                    l.re >= lo - slack && l.re <= hi + slack && l.im.abs() <= slack,
                    "{name} eigenvalue {l}"
                );
            }
        }
    }
}

#[test]
fn integration_matrix_factors_reconstruct() {
    let (beta, n) = (2.5, 12);
    let a = gallery::integration_matrix(beta, n).unwrap().matrix;
    let (x, j) = gallery::jordan_factors(beta, n);
    let xm = ComplexMatrix::from_diag(&x.iter().map(|&v| c64::new(v, 0.0)).collect::<Vec<_>>());
    let xinv = ComplexMatrix::from_diag(
        &x.iter()
            .map(|&v| c64::new(1.0 / v, 0.0))
            .collect::<Vec<_>>(),
    );
    let rebuilt = xm.matmul(&j).matmul(&xinv);
    assert!(rebuilt.sub(&a).frobenius_norm() <= 1e-8 * two_norm(&a));
}

#[test]
fn fold_example_has_the_promised_conditioning() {
    let delta = 1e-4;
    let a = gallery::example_e_fold(delta, 16, Spacing::Equispaced)
        .unwrap()
        .matrix;
    let spec = eigen_full(&a).unwrap();
    assert!(spec.kappa_v() >= gallery::example_e_kappa_lower(delta) * (1.0 - 1e-6));
}
