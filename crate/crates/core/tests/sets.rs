mod common;

use std::f64::consts::PI;

use common::{dense, matrix, smin};
use kscope::error::Error;
use kscope::gallery;
use kscope::linalg::{eigen_full, two_norm, ShiftedSmin};
use kscope::sets::{extract_contour, fov_boundary, pseudospectrum_grid, zoomed_contour, GridBox};
use kscope::{c64, ComplexMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

#[test]
fn hermitian_field_of_values_is_its_eigenvalue_interval() {
    let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[1.0, 2.0, 1.0], &[0.0, 1.0, 2.0]]);
    let f = fov_boundary(&a, 64).unwrap();
    let (lo, hi) = (2.0 - 2f64.sqrt(), 2.0 + 2f64.sqrt());
    for z in &f.outer {
        assert!(z.re >= lo - 1e-10 && z.re <= hi + 1e-10 && z.im.abs() < 1e-10);
    }
    assert!((f.min_real_part - lo).abs() < 1e-12);
    assert!((f.numerical_radius - hi).abs() < 1e-12);
}

#[test]
fn fov_hulls_converge_quadratically() {
    let a = gallery::jordan2(10.0).unwrap().matrix;
    // convex sets: Hausdorff distance is the sup gap of support functions
    let support = |p: &[c64], d: c64| {
        p.iter()
            .map(|v| (v * d.conj()).re)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let d = |m: usize| {
        let (f, g) = (
            fov_boundary(&a, m).unwrap(),
            fov_boundary(&a, 2 * m).unwrap(),
        );
        (0..4096)
            .map(|j| {
                let dir = c64::from_polar(1.0, 2.0 * PI * j as f64 / 4096.0);
                (support(&f.outer, dir) - support(&g.outer, dir)).abs()
            })
            .fold(0.0, f64::max)
    };
    let (d1, d2) = (d(32), d(64));
    // one halving of the angle step quarters the gap, up to sampling noise
    assert!(d2 < 0.4 * d1, "{d1:e} -> {d2:e}");
}

#[test]
fn jordan_pseudospectrum_contour_is_a_disk() {
    let alpha = 10.0;
    let eps = 1e-2;
    let a = gallery::jordan2(alpha).unwrap().matrix;
    let r = (alpha * eps + eps * eps).sqrt();
    let grid = pseudospectrum_grid(
        &a,
        GridBox::new(1.0 - 2.0 * r, 1.0 + 2.0 * r, -2.0 * r, 2.0 * r).unwrap(),
        161,
        161,
    )
    .unwrap();
    let c = extract_contour(&grid, eps)
        .unwrap()
        .certify(&a, &[re(1.0)])
        .unwrap();
    assert_eq!(c.loops.len(), 1);
    assert_eq!(c.winding(re(1.0)), 1);
    assert_eq!(c.encloses_spectrum, Some(true));
    for z in &c.loops[0] {
        assert!(((z - 1.0).norm() - r).abs() < 1e-3 * r);
    }
    assert!((c.length / (2.0 * PI * r) - 1.0).abs() < 1e-3);
    // the polygon is inscribed, so the measured level sits just below eps
    let level = c.certified_level.unwrap();
    assert!(level <= eps * (1.0 + 1e-9) && level > 0.99 * eps);
}

#[test]
fn level_outside_the_grid_range_is_rejected() {
    let a = gallery::jordan2(1.0).unwrap().matrix;
    let grid = pseudospectrum_grid(&a, GridBox::new(0.0, 2.0, -1.0, 1.0).unwrap(), 11, 11).unwrap();
    assert!(matches!(
        extract_contour(&grid, 100.0),
        Err(Error::LevelOutOfRange { .. })
    ));
}

#[test]
fn overlapping_zoom_boxes_are_rejected() {
    let a = ComplexMatrix::from_diag(&[re(1.0), re(1.0 + 1e-9)]);
    let r = zoomed_contour(&a, &[re(1.0), re(1.0 + 1e-9)], 1e-8, 4e-8, 21);
    assert!(matches!(r, Err(Error::InvalidArgument(_))));
}

#[test]
fn covering_box_clears_strongly_nonnormal_blocks() {
    // a bidiagonal block whose pseudospectra reach far past its eigenvalue
    let a = gallery::cg_pair_matrix(32)
        .unwrap()
        .matrix
        .submatrix(0, 16, 0, 16);
    let spec = eigen_full(&a).unwrap();
    let eps = 1e-2;
    let b = GridBox::covering(&a, &spec.eigenvalues, spec.norm_a, eps).unwrap();
    let s = ShiftedSmin::new(&a).unwrap();
    for j in 0..200 {
        let t = j as f64 / 200.0;
        let x = b.re_min + t * (b.re_max - b.re_min);
        let y = b.im_min + t * (b.im_max - b.im_min);
        for z in [
            c64::new(x, b.im_min),
            c64::new(x, b.im_max),
            c64::new(b.re_min, y),
            c64::new(b.re_max, y),
        ] {
            assert!(s.eval(z) > 0.9 * eps);
        }
    }
    let grid = pseudospectrum_grid(&a, b, 60, 60).unwrap();
    assert!(!extract_contour(&grid, eps).unwrap().touches_boundary);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn field_of_values_brackets_the_spectrum(a in matrix(1, 10, 3.0)) {
        let f = fov_boundary(&a, 128).unwrap();
        let spec = eigen_full(&a).unwrap();
        let scale = spec.norm_a.max(1.0);
        for &l in &spec.eigenvalues {
            prop_assert!(f.contains(l, 1e-9 * scale));
        }
        for &v in &f.vertices {
            prop_assert!(f.contains(v, 1e-9 * scale));
        }
        prop_assert!(f.numerical_radius >= spec.spectral_radius() - 1e-9 * scale);
        prop_assert!(f.numerical_radius <= two_norm(&a) + 1e-9 * scale);
        prop_assert!(f.numerical_radius >= 0.5 * two_norm(&a) - 1e-9 * scale);
    }

    #[test]
    fn grid_values_are_shifted_singular_values(a in matrix(1, 6, 2.0)) {
        let spec = eigen_full(&a).unwrap();
        let grid = pseudospectrum_grid(&a, GridBox::auto(&spec.eigenvalues, spec.norm_a, 0.1).unwrap(), 7, 5).unwrap();
        let n = a.rows();
        let d = dense(&a);
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let z = grid.node(ix, iy);
                let oracle = smin(&(DMatrix::<c64>::identity(n, n) * z - &d));
                prop_assert!((grid.value(ix, iy) - oracle).abs() <= 1e-10 * (1.0 + spec.norm_a));
            }
        }
    }

    #[test]
    fn contours_wind_once_around_resolved_eigenvalues(a in matrix(2, 6, 1.0), level in 0.05..0.3f64) {
        let spec = eigen_full(&a).unwrap();
        let eps = level * spec.norm_a.max(1e-3);
        let b = GridBox::covering(&a, &spec.eigenvalues, spec.norm_a, eps).unwrap();
        let grid = pseudospectrum_grid(&a, b, 80, 80).unwrap();
        let c = extract_contour(&grid, eps).unwrap().certify(&a, &spec.eigenvalues).unwrap();
        prop_assert!(!c.touches_boundary);
        for &l in &spec.eigenvalues {
            // interpolated grid value below eps means the eigenvalue is resolved
            if grid.interpolate(l).is_some_and(|v| v < eps) {
                prop_assert_eq!(c.winding(l), 1);
            }
        }
    }
}
